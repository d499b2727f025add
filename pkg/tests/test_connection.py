"""Tests for Christoffel forms, geodesic integration and exponential 2-jets."""

import numpy as np
import pytest

from kahler_circles.circles.fitting import fit_circle
from kahler_circles.core.quaternion import ComplexLinear, classify_A
from kahler_circles.errors import DegenerateMetricError, DomainExitError
from kahler_circles.geometry import get_metric
from kahler_circles.geometry.connection import (
    Trajectory,
    christoffel,
    complex_bilinearity_defect,
    energy_drift,
    exp_jet2,
    extract_L,
    geodesic,
    geodesics,
)
from kahler_circles.geometry.metrics import MetricField, everywhere


class TestChristoffel:
    """Tests for the Christoffel form."""

    def test_flat_metric_has_zero_symbols(self, flat, base_point):
        assert np.all(christoffel(flat, base_point).coefficients == 0.0)

    def test_fubini_vanishes_at_origin(self, fubini_study):
        assert christoffel(fubini_study, np.zeros(4)).coefficients == pytest.approx(
            np.zeros((4, 4, 4)), abs=1e-15
        )

    def test_symmetric_lower_indices(self, fubini_study, base_point):
        T = christoffel(fubini_study, base_point).coefficients
        assert T == pytest.approx(np.swapaxes(T, 1, 2))

    def test_degenerate_metric(self, base_point):
        zero = MetricField(
            name="zero",
            form=lambda p: np.zeros(p.shape[:-1] + (4, 4)),
            domain=everywhere,
        )
        with pytest.raises(DegenerateMetricError):
            christoffel(zero, base_point)

    def test_complex_bilinear_for_kahler(self, base_point):
        for alpha in (-1.0, 0.5, 1.0):
            gamma = christoffel(get_metric(f"fubini:{alpha}"), base_point)
            assert complex_bilinearity_defect(gamma) < 1e-8

    def test_not_complex_bilinear_for_nonkahler(self, base_point):
        gamma = christoffel(get_metric("testfield:nonkahler"), base_point)
        assert complex_bilinearity_defect(gamma) > 1e-3


class TestExtractL:
    """Tests for Gamma(v, v) = L(v) v."""

    def test_fubini_is_proportional(self, fubini_study, base_point):
        fit = extract_L(christoffel(fubini_study, base_point))

        assert fit.residual < 1e-9
        assert fit.linearity_defect is not None
        assert fit.linearity_defect < 1e-9

    def test_fitted_functional_reproduces_gamma(self, hyperbolic, base_point, gen):
        gamma = christoffel(hyperbolic, base_point)
        L = extract_L(gamma).functional
        v = gen.standard_normal((5, 4))
        assert L.scale(v) == pytest.approx(gamma.quadratic(v), abs=1e-9)

    def test_diagonal_field_is_not_proportional(self, base_point):
        fit = extract_L(christoffel(get_metric("testfield:diagonal"), base_point))

        assert fit.residual > 1e-3
        assert fit.linearity_defect is None


class TestGeodesics:
    """Tests for RK4 geodesic integration."""

    def test_flat_geodesic_is_straight(self, flat, base_point):
        v = np.array([0.3, -0.1, 0.2, 0.4])
        traj = geodesic(flat, base_point, v, 1.0, 32)

        assert len(traj) == 33
        assert traj.complete
        assert traj.points[-1] == pytest.approx(base_point + v, abs=1e-12)

    def test_energy_is_conserved(self, fubini_study, base_point):
        v = np.array([0.0, 0.5, 0.2, 0.0])
        traj = geodesic(fubini_study, base_point, v, 1.0, 1024)
        assert energy_drift(traj, fubini_study) < 1e-7

    def test_fubini_geodesic_is_circle(self, fubini_study, base_point):
        v = np.array([0.0, 0.5, 0.2, 0.0])
        traj = geodesic(fubini_study, base_point, v, 1.0, 1024)
        assert fit_circle(traj.points).relative_residual < 1e-6

    def test_reversibility(self, fubini_study, base_point):
        """Test integrating back from the end point returns to the start."""
        v = np.array([0.0, 0.5, 0.2, 0.0])
        forward = geodesic(fubini_study, base_point, v, 1.0, 512)
        backward = geodesic(fubini_study, forward.points[-1], -forward.velocities[-1], 1.0, 512)

        assert backward.points[-1] == pytest.approx(base_point, abs=1e-7)
        assert backward.velocities[-1] == pytest.approx(-v, abs=1e-7)

    def test_fourth_order_convergence(self, fubini_study, base_point):
        """Test halving the step divides the end-point error by about 16."""
        v = np.array([0.0, 1.5, 0.6, 0.0])
        reference = geodesic(fubini_study, base_point, v, 1.0, 1024).points[-1]
        coarse, fine = (
            np.linalg.norm(geodesic(fubini_study, base_point, v, 1.0, n).points[-1] - reference)
            for n in (32, 64)
        )

        assert 10.0 < coarse / fine < 22.0

    def test_batch_matches_single(self, fubini_study, base_point):
        V = np.array([[0.0, 0.5, 0.2, 0.0], [0.3, 0.0, 0.0, -0.3]])
        P = np.vstack([base_point, base_point])
        batch = geodesics(fubini_study, P, V, 0.5, 64)
        single = geodesic(fubini_study, base_point, V[1], 0.5, 64)
        assert batch[1].points == pytest.approx(single.points)

    def test_leaving_the_domain(self):
        """Test a fast curve toward the unit sphere stops with a partial trajectory."""
        g = get_metric("ball")
        with pytest.raises(DomainExitError) as exc_info:
            geodesic(g, np.array([0.9, 0, 0, 0]), np.array([50.0, 0, 0, 0]), 1.0, 16)

        partial = exc_info.value.partial
        assert isinstance(partial, Trajectory)
        assert not partial.complete
        assert len(partial) == 1

    def test_batch_truncates_individually(self):
        g = get_metric("ball")
        P = np.array([[0.9, 0, 0, 0], [0.0, 0, 0, 0]])
        V = np.array([[50.0, 0, 0, 0], [0.0, 0.1, 0, 0]])
        first, second = geodesics(g, P, V, 1.0, 16)

        assert not first.complete
        assert second.complete
        assert len(second) == 17

    def test_too_few_steps(self, flat, base_point):
        with pytest.raises(ValueError):
            geodesic(flat, base_point, np.ones(4), 1.0, 8)

    def test_nonpositive_time(self, flat, base_point):
        with pytest.raises(ValueError):
            geodesic(flat, base_point, np.ones(4), 0.0, 32)


class TestTrajectory:
    """Tests for trajectory validation."""

    def test_times_must_increase(self):
        with pytest.raises(ValueError):
            Trajectory(
                times=np.array([0.0, 0.0]),
                points=np.zeros((2, 4)),
                velocities=np.zeros((2, 4)),
                metric="euclidean",
            )

    def test_shapes_must_match(self):
        with pytest.raises(ValueError):
            Trajectory(
                times=np.array([0.0, 1.0]),
                points=np.zeros((3, 4)),
                velocities=np.zeros((2, 4)),
                metric="euclidean",
            )


class TestExpJet:
    """Tests for exponential 2-jets."""

    def test_fubini_jet_is_holomorphic(self, fubini_study, base_point):
        jet = exp_jet2(fubini_study, base_point)

        assert jet.residual < 1e-9
        assert jet.holomorphy_defect() < 1e-7
        assert isinstance(classify_A(jet.A, 1e-6), ComplexLinear)

    def test_jet_quadratic_is_minus_gamma(self, hyperbolic, base_point, gen):
        jet = exp_jet2(hyperbolic, base_point)
        x = gen.standard_normal((4, 4))
        assert jet.A.quadratic(x) == pytest.approx(jet.quadratic(x), abs=1e-9)

    def test_nonkahler_jet_is_not_holomorphic(self, base_point):
        jet = exp_jet2(get_metric("testfield:nonkahler"), base_point)
        assert jet.holomorphy_defect() > 1e-3
