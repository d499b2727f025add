"""Tests for circle, line and complex-line recognition."""

import numpy as np
import pytest

from kahler_circles.circles.fitting import (
    circle_from_jet,
    complex_line_defect,
    complex_line_distance,
    fit_circle,
    line_residual,
)
from kahler_circles.core.quaternion import jmul
from kahler_circles.errors import FitError, PreconditionError
from kahler_circles.geometry.connection import Trajectory, christoffel, geodesic


class TestFitCircle:
    """Tests for fit_circle."""

    def test_exact_circle(self, circle_sample):
        fit = fit_circle(circle_sample["points"])

        assert fit.is_circle
        assert fit.radius == pytest.approx(circle_sample["radius"], rel=1e-9)
        assert fit.center == pytest.approx(circle_sample["center"], abs=1e-8)
        assert fit.relative_residual < 1e-10
        assert fit.curvature == pytest.approx(1.0 / circle_sample["radius"], rel=1e-9)

    def test_plane_is_orthonormal(self, circle_sample):
        plane = fit_circle(circle_sample["points"]).plane
        assert plane @ plane.T == pytest.approx(np.eye(2), abs=1e-12)

    def test_without_refinement(self, circle_sample):
        fit = fit_circle(circle_sample["points"], refine=False)
        assert fit.radius == pytest.approx(circle_sample["radius"], rel=1e-8)

    def test_noisy_circle_residual(self, circle_sample, gen):
        noisy = circle_sample["points"] + 1e-3 * gen.standard_normal(circle_sample["points"].shape)
        fit = fit_circle(noisy)

        assert fit.is_circle
        assert 1e-4 < fit.relative_residual < 1e-2

    def test_refinement_lowers_residual(self, gen):
        """Test the Gauss-Newton step improves the algebraic fit of a noisy short arc."""
        theta = np.linspace(0.0, 0.8, 40)
        arc = np.column_stack([np.cos(theta), np.sin(theta), np.zeros(40), np.zeros(40)])
        noisy = arc + 1e-2 * gen.standard_normal(arc.shape)

        raw = fit_circle(noisy, refine=False)
        refined = fit_circle(noisy)

        assert refined.rms_residual < raw.rms_residual

    def test_refinement_never_increases_residual(self, circle_sample):
        for seed in range(100):
            gen = np.random.default_rng(seed)
            noisy = circle_sample["points"] + 1e-3 * gen.standard_normal(circle_sample["points"].shape)
            assert fit_circle(noisy).rms_residual <= fit_circle(noisy, refine=False).rms_residual

    def test_small_noise(self, circle_sample):
        """Test uniform noise of 1e-6 keeps the relative residual at the noise level."""
        for seed in range(100):
            gen = np.random.default_rng(seed)
            noise = gen.uniform(-1e-6, 1e-6, circle_sample["points"].shape)
            fit = fit_circle(circle_sample["points"] + noise)

            assert fit.is_circle
            assert fit.relative_residual <= 3e-6

    def test_full_circle(self):
        theta = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
        points = np.column_stack([1.0 + 2.0 * np.cos(theta), np.zeros(64), 2.0 * np.sin(theta), np.zeros(64)])
        fit = fit_circle(points)

        assert fit.radius == pytest.approx(2.0, abs=1e-12)
        assert fit.center == pytest.approx([1.0, 0.0, 0.0, 0.0], abs=1e-12)

    def test_isometry_equivariance(self, circle_sample, gen):
        """Test rotating and translating the sample moves the fit the same way."""
        noisy = circle_sample["points"] + 1e-3 * gen.standard_normal(circle_sample["points"].shape)
        Q, _ = np.linalg.qr(gen.standard_normal((4, 4)))
        shift = np.array([1.0, -2.0, 0.5, 3.0])

        fit = fit_circle(noisy)
        moved = fit_circle(noisy @ Q.T + shift)

        assert moved.radius == pytest.approx(fit.radius, rel=1e-9)
        assert moved.rms_residual == pytest.approx(fit.rms_residual, rel=1e-9)
        assert moved.center == pytest.approx(Q @ fit.center + shift, abs=1e-9)
        assert moved.plane.T @ moved.plane == pytest.approx(Q @ fit.plane.T @ fit.plane @ Q.T, abs=1e-9)

    def test_straight_line(self):
        t = np.linspace(-1.0, 1.0, 20)[:, None]
        points = np.array([0.1, 0.2, 0.3, 0.4]) + t * np.array([1.0, -2.0, 0.5, 0.0])
        fit = fit_circle(points)

        assert fit.kind == "line"
        assert fit.radius is None
        assert fit.curvature == 0.0
        assert fit.relative_residual < 1e-12

    def test_too_few_points(self, circle_sample):
        with pytest.raises(FitError):
            fit_circle(circle_sample["points"][:7])

    def test_coincident_points(self):
        with pytest.raises(FitError):
            fit_circle(np.ones((10, 4)))


class TestCircleFromJet:
    """Tests for the osculating circle of a 2-jet."""

    def test_unit_circle(self):
        fit = circle_from_jet(np.zeros(4), np.array([1.0, 0, 0, 0]), np.array([0, 1.0, 0, 0]))

        assert fit.is_circle
        assert fit.radius == pytest.approx(1.0)
        assert fit.center == pytest.approx([0.0, 1.0, 0.0, 0.0])

    def test_tangential_acceleration_is_ignored(self):
        fit = circle_from_jet(np.zeros(4), np.array([2.0, 0, 0, 0]), np.array([3.0, 0, 1.0, 0]))
        assert fit.radius == pytest.approx(4.0)

    def test_line(self):
        fit = circle_from_jet(np.zeros(4), np.array([1.0, 0, 0, 0]), np.array([2.0, 0, 0, 0]))
        assert fit.kind == "line"

    def test_matches_fitted_geodesic(self, hyperbolic):
        """Test the osculating circle of a geodesic is the circle it traces.

        The geodesic stays in the disk z2 = 0 and follows the circle through
        0.2 orthogonal to the unit circle, centered at 2.6 with radius 2.4.
        """
        p = np.array([0.2, 0.0, 0.0, 0.0])
        v = np.array([0.0, 1.0, 0.0, 0.0])
        traj = geodesic(hyperbolic, p, v, 1.0, 2048)

        fitted = fit_circle(traj.points)
        osculating = circle_from_jet(p, v, -christoffel(hyperbolic, p).quadratic(v))

        assert osculating.radius == pytest.approx(fitted.radius, rel=1e-6)
        assert osculating.center == pytest.approx(fitted.center, abs=1e-6)
        assert fitted.center == pytest.approx([2.6, 0.0, 0.0, 0.0], abs=1e-6)

    def test_zero_velocity(self):
        with pytest.raises(FitError):
            circle_from_jet(np.zeros(4), np.zeros(4), np.ones(4))


class TestLineResidual:
    """Tests for line_residual."""

    def test_collinear(self):
        t = np.linspace(0.0, 1.0, 10)[:, None]
        assert line_residual(t * np.array([1.0, 2.0, 3.0, 4.0])) < 1e-12

    def test_complex_points(self):
        """Test complex points are read as points of R^2."""
        t = np.linspace(-1.0, 1.0, 10)
        assert line_residual((1 + 1j) * t + 0.5j) < 1e-12

    def test_circle_is_not_a_line(self, circle_sample):
        assert line_residual(circle_sample["points"]) > 1e-2

    def test_single_point(self):
        with pytest.raises(FitError):
            line_residual(np.zeros((1, 4)))


class TestComplexLines:
    """Tests for distances to complex lines."""

    def test_points_in_complex_line(self, gen):
        p = np.array([0.1, 0.2, -0.3, 0.0])
        v = np.array([1.0, 0.5, 0.0, -1.0])
        s, t = gen.standard_normal((2, 12))
        points = p + s[:, None] * v + t[:, None] * jmul(v)
        assert complex_line_distance(points, p, v).max() < 1e-12

    def test_trajectory_in_complex_line(self):
        v = np.array([1.0, 0.0, 1.0, 0.0])
        theta = np.linspace(0.0, 1.0, 20)
        points = np.cos(theta)[:, None] * v + np.sin(theta)[:, None] * jmul(v)
        velocities = -np.sin(theta)[:, None] * v + np.cos(theta)[:, None] * jmul(v)
        traj = Trajectory(times=theta, points=points - points[0], velocities=velocities, metric="test")
        assert complex_line_defect(traj) < 1e-12

    def test_trajectory_leaving_complex_line(self):
        t = np.linspace(0.0, 1.0, 20)
        points = np.column_stack([t, np.zeros(20), t**2, np.zeros(20)])
        velocities = np.column_stack([np.ones(20), np.zeros(20), 2 * t, np.zeros(20)])
        traj = Trajectory(times=t, points=points, velocities=velocities, metric="test")
        assert complex_line_defect(traj) > 0.1

    def test_zero_direction(self):
        with pytest.raises(PreconditionError):
            complex_line_distance(np.zeros((2, 4)), np.zeros(4), np.zeros(4))
