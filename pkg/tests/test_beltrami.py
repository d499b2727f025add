"""Tests for the Gram-determinant normalization and the momentum fit."""

import numpy as np
import pytest

from kahler_circles.errors import DependenceError, PreconditionError, SamplingError
from kahler_circles.geometry import get_metric
from kahler_circles.geometry.beltrami import (
    MOMENTUM_FEATURES,
    derivative_identity_defect,
    line_constancy_defect,
    momentum_polynomial_fit,
    normalized_h,
    recover_g,
)
from kahler_circles.geometry.metrics import gram_G


class TestNormalizedField:
    """Tests for h = g / (G / G*)^(2/3)."""

    def test_equals_g_at_base_point(self, fubini_study):
        hf = normalized_h(fubini_study)
        assert hf.evaluate_h(np.zeros(4)) == pytest.approx(fubini_study.evaluate(np.zeros(4)))

    def test_gram_at_base(self, hyperbolic):
        hf = normalized_h(hyperbolic)
        e = np.eye(4)
        assert hf.gram_at_base == pytest.approx(gram_G(hyperbolic, np.zeros(4), e[0], e[2]))

    def test_recover_g(self, fubini_study, base_point):
        """Test h / H^2 = g / G*^2."""
        hf = normalized_h(fubini_study)
        expected = fubini_study.evaluate(base_point) / hf.gram_at_base**2
        assert recover_g(hf, base_point) == pytest.approx(expected, rel=1e-10)

    def test_as_metric(self, fubini_study, base_point):
        hf = normalized_h(fubini_study)
        h = hf.as_metric()
        assert h.evaluate(base_point) == pytest.approx(hf.evaluate_h(base_point))

    def test_dependent_frame(self, fubini_study):
        e = np.eye(4)
        with pytest.raises(DependenceError):
            normalized_h(fubini_study, frame=np.vstack([e[0], e[1]]))


class TestLineConstancy:
    """Tests for constancy of h along complex lines."""

    def test_fubini(self, base_point):
        for alpha in (-1.0, 1.0):
            hf = normalized_h(get_metric(f"fubini:{alpha}"))
            defect = line_constancy_defect(hf, base_point, np.array([1.0, 0.0, 0.5, 0.0]))
            assert defect < 1e-8

    def test_conformal_field_varies(self, base_point):
        hf = normalized_h(get_metric("testfield:conformal"))
        defect = line_constancy_defect(hf, base_point, np.array([1.0, 0.0, 0.5, 0.0]))
        assert defect > 1e-3


class TestDerivativeIdentity:
    """Tests for X G = 3 Re L(X) G and X g(X, X) = 2 Re L(X) g(X, X)."""

    def test_fubini(self, fubini_study, base_point):
        assert derivative_identity_defect(fubini_study, base_point) < 1e-5

    def test_requires_proportional_gamma(self, base_point):
        with pytest.raises(PreconditionError):
            derivative_identity_defect(get_metric("testfield:diagonal"), base_point)

    def test_precondition_can_be_skipped(self, base_point):
        defect = derivative_identity_defect(
            get_metric("testfield:diagonal"), base_point, require_proportional=False
        )
        assert np.isfinite(defect)


class TestMomentumFit:
    """Tests for the Hermitian momentum polynomial."""

    def test_fubini(self, fubini_study):
        fit = momentum_polynomial_fit(normalized_h(fubini_study), n_samples=120, seed=2)

        assert fit.residual < 1e-6
        assert fit.n_samples == 120
        assert fit.seed == 2
        assert fit.coefficients == pytest.approx(fit.coefficients.conj().T)

    def test_non_fubini_field_misfits(self):
        """Test a Hermitian field that is not a Fubini metric leaves a large residual."""
        fit = momentum_polynomial_fit(normalized_h(get_metric("testfield:conformal")))
        assert fit.residual >= 1e-2

    def test_needs_enough_samples(self, fubini_study):
        with pytest.raises(SamplingError):
            momentum_polynomial_fit(normalized_h(fubini_study), n_samples=MOMENTUM_FEATURES - 4)
