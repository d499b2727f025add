"""Seeded sampling regions per metric.

Regions are chosen so that sampled points, their difference stencils and
the curves started from them stay well inside each field's domain. For a
Fubini field with |alpha| > 1 every radius shrinks by 1/sqrt(|alpha|).
"""

import math
from typing import Optional

import numpy as np

from kahler_circles.geometry.metrics import MetricField
from kahler_circles.numerics import FloatArray, Region, random_unit_vectors

EXTERIOR_SHELL = Region(2.4, 1.6)

# Poincare suspension samples: x in [-1, 1], Im z in [0.2, 2], |w| <= 1
SUSPENSION_X = (-1.0, 1.0)
SUSPENSION_Y = (0.2, 2.0)
SUSPENSION_W = 1.0


def analytic_alpha(g: MetricField) -> Optional[float]:
    return g.analytic_params.get("alpha")


def is_exterior(g: MetricField) -> bool:
    return not g.positive_definite_claimed


def _scale(g: MetricField) -> float:
    alpha = analytic_alpha(g)
    if alpha is None:
        return 1.0
    return 1.0 / math.sqrt(max(1.0, abs(alpha)))


def point_region(g: MetricField) -> Region:
    """Base points for pointwise checks (defects, jets, Gram quantities)."""
    if is_exterior(g):
        return EXTERIOR_SHELL
    return Region(0.5 * _scale(g))


def geodesic_region(g: MetricField) -> Region:
    if is_exterior(g):
        return EXTERIOR_SHELL
    return Region(0.3 * _scale(g))


def geodesic_speed(g: MetricField) -> float:
    if is_exterior(g):
        return 0.4
    return 0.5 * _scale(g)


def default_time(g: Optional[MetricField]) -> float:
    """Integration horizon; exterior curves are kept short."""
    if g is not None and is_exterior(g):
        return 0.5
    return 1.0


def scan_region(g: MetricField) -> Region:
    """Region of the curvature constancy scan: |z| <= 1 (alpha > 0), |z| <= 0.5 (alpha < 0)."""
    alpha = analytic_alpha(g)
    if is_exterior(g):
        return EXTERIOR_SHELL
    if alpha is not None and alpha < 0:
        return Region(0.5 * _scale(g))
    return Region(1.0 * _scale(g))


def momentum_region(g: MetricField) -> Region:
    return Region(0.6 * _scale(g))


def initial_conditions(
    g: MetricField, gen: np.random.Generator, n: int
) -> tuple[FloatArray, FloatArray]:
    """n seeded (point, velocity) pairs for geodesic suites."""
    points = geodesic_region(g).sample(gen, n)
    velocities = geodesic_speed(g) * random_unit_vectors(gen, n)
    return points, velocities


def suspension_points(gen: np.random.Generator, n: int) -> FloatArray:
    """n seeded points (z, w) of the Poincare suspension's domain."""
    x = gen.uniform(*SUSPENSION_X, n)
    y = gen.uniform(*SUSPENSION_Y, n)
    radius = SUSPENSION_W * np.sqrt(gen.random(n))
    angle = gen.uniform(0.0, 2.0 * np.pi, n)
    return np.column_stack([x, y, radius * np.cos(angle), radius * np.sin(angle)])
