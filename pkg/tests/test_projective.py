"""Tests for projective maps and rectifiers."""

import numpy as np
import pytest

from kahler_circles.circles.projective import (
    ProjectiveMap,
    image_of_line,
    image_trajectory,
    jet2_of_map,
    rectifier,
    rectifier_from_christoffel,
)
from kahler_circles.core.quaternion import ComplexFunctional, RealLinearMapToH, to_complex
from kahler_circles.errors import PreconditionError, SingularLocusError
from kahler_circles.geometry import get_metric
from kahler_circles.geometry.connection import christoffel, extract_L
from kahler_circles.numerics import evaluation_sample


class TestProjectiveMap:
    """Tests for ProjectiveMap."""

    def test_identity(self, gen):
        x = gen.standard_normal((5, 4))
        assert ProjectiveMap.identity()(x) == pytest.approx(x)

    def test_translation(self, base_point):
        assert ProjectiveMap.translation(base_point)(np.zeros(4)) == pytest.approx(base_point)

    def test_canonical_scaling(self):
        F = ProjectiveMap(5.0j * np.eye(3))
        assert F.allclose(ProjectiveMap.identity())
        assert np.linalg.norm(F.M) == pytest.approx(1.0)

    def test_inverse(self, base_point):
        F = rectifier(base_point, ComplexFunctional(0.3 - 0.2j, 0.1j))
        assert (F @ F.inverse()).allclose(ProjectiveMap.identity())

    def test_compose_applies_right_first(self, base_point):
        F = rectifier(np.zeros(4), ComplexFunctional(0.3, 0.0))
        T = ProjectiveMap.translation(base_point)
        x = np.array([0.1, 0.2, 0.0, -0.1])
        assert (T @ F)(x) == pytest.approx(F(x) + base_point)

    def test_push_matches_differences(self, base_point):
        F = rectifier(base_point, ComplexFunctional(0.3 - 0.2j, 0.5j))
        x = np.array([0.1, 0.2, 0.0, -0.1])
        v = np.array([0.3, -0.4, 0.2, 0.1])
        h = 1e-6
        numeric = (F(x + h * v) - F(x - h * v)) / (2 * h)
        assert F.push(x, v) == pytest.approx(numeric, abs=1e-8)

    def test_zero_matrix(self):
        with pytest.raises(PreconditionError):
            ProjectiveMap(np.zeros((3, 3)))

    def test_singular_matrix(self):
        with pytest.raises(PreconditionError):
            ProjectiveMap(np.diag([1.0, 1.0, 0.0]))

    def test_singular_hyperplane(self):
        F = rectifier(np.zeros(4), ComplexFunctional(2.0, 0.0))
        with pytest.raises(SingularLocusError):
            F(np.array([1.0, 0.0, 0.0, 0.0]))


class TestRectifier:
    """Tests for rectifiers x -> p + (1 - 1/2 L(x))^-1 x."""

    def test_two_jet(self, base_point):
        """Test the 2-jet at the origin is p + x + 1/2 L(x) x."""
        L = ComplexFunctional(0.4 - 0.3j, 0.2j)
        jet = jet2_of_map(rectifier(base_point, L), np.zeros(4))
        sample = evaluation_sample()[:10]

        assert jet.value == pytest.approx(base_point)
        assert jet.linear == pytest.approx(np.eye(4), abs=1e-7)
        assert jet.quadratic(sample) == pytest.approx(L.scale(sample), abs=1e-6)

    def test_real_map_form(self, base_point):
        L = ComplexFunctional(0.4 - 0.3j, 0.2j)
        assert rectifier(base_point, L.as_real_map()).allclose(rectifier(base_point, L))

    def test_affine_action(self, base_point, gen):
        """Test F(x) = p + x / (1 - 1/2 L(x)) computed in complex coordinates."""
        L = ComplexFunctional(0.4 - 0.3j, 0.2j)
        x = 0.5 * gen.standard_normal((8, 4))
        z = to_complex(x)
        expected = to_complex(base_point) + z / (1.0 - 0.5 * L(x))[:, None]

        assert to_complex(rectifier(base_point, L)(x)) == pytest.approx(expected, abs=1e-12)

    def test_non_holomorphic_map(self, base_point):
        matrix = np.zeros((4, 4))
        matrix[2, 0] = 1.0
        with pytest.raises(PreconditionError):
            rectifier(base_point, RealLinearMapToH(matrix))

    def test_zero_functional_is_translation(self, base_point):
        assert rectifier(base_point, ComplexFunctional.zero()).allclose(
            ProjectiveMap.translation(base_point)
        )


class TestImageOfLine:
    """Tests for images of real lines."""

    def test_line_maps_to_known_circle(self):
        """Test t e0 maps to the circle of radius 2 centered at 2i tangent to the real axis."""
        F = rectifier(np.zeros(4), ComplexFunctional(0.5j, 0.0))
        fit = image_of_line(F, np.zeros(4), np.array([1.0, 0, 0, 0]))

        assert fit.is_circle
        assert fit.radius == pytest.approx(2.0, rel=1e-6)
        assert fit.center == pytest.approx([0.0, 2.0, 0.0, 0.0], abs=1e-6)
        assert fit.relative_residual < 1e-9

    def test_real_value_gives_line(self):
        F = rectifier(np.zeros(4), ComplexFunctional(0.5, 0.0))
        fit = image_of_line(F, np.zeros(4), np.array([1.0, 0, 0, 0]))
        assert fit.kind == "line"

    def test_image_trajectory_velocities(self, base_point):
        F = rectifier(base_point, ComplexFunctional(0.2j, 0.1))
        direction = np.array([0.0, 1.0, 0.5, 0.0])
        traj = image_trajectory(F, np.zeros(4), direction, T=0.5, n=16)

        assert traj.initial_point == pytest.approx(base_point)
        assert traj.initial_velocity == pytest.approx(direction)


class TestRectifierFromChristoffel:
    """Tests for rectifiers built from a Christoffel form."""

    def test_jet_is_exponential_jet(self, fubini_study, base_point):
        gamma = christoffel(fubini_study, base_point)
        F = rectifier_from_christoffel(base_point, gamma)
        jet = jet2_of_map(F, np.zeros(4))
        sample = evaluation_sample()[:10]

        assert jet.quadratic(sample) == pytest.approx(-gamma.quadratic(sample), abs=1e-6)

    def test_sign_of_functional(self, hyperbolic, base_point):
        gamma = christoffel(hyperbolic, base_point)
        L = extract_L(gamma).functional
        assert rectifier_from_christoffel(base_point, gamma).allclose(rectifier(base_point, -L))

    def test_not_proportional(self, base_point):
        gamma = christoffel(get_metric("testfield:diagonal"), base_point)
        with pytest.raises(PreconditionError):
            rectifier_from_christoffel(base_point, gamma)
