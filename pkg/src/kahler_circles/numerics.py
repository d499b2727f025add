"""Shared numerical helpers: finite-difference stencils and seeded sampling.

All stencils are central. The second-order stencil is used for first
derivatives of metric fields; the five-point stencil is used where a second
differentiation follows (curvature).
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]

# Seed of the deterministic evaluation sample shared by the quadratic-map tests
SAMPLE_SEED = 1729

DIM = 4


def rng(seed: int) -> np.random.Generator:
    """Create the generator used for every seeded sample in the package."""
    return np.random.default_rng(seed)


def random_unit_vectors(gen: np.random.Generator, n: int, dim: int = DIM) -> FloatArray:
    """Draw n vectors uniformly from the unit sphere of R^dim."""
    v = gen.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_points_in_ball(
    gen: np.random.Generator,
    n: int,
    radius: float,
    dim: int = DIM,
) -> FloatArray:
    """Draw n points uniformly from the Euclidean ball of the given radius."""
    directions = random_unit_vectors(gen, n, dim)
    radii = radius * gen.random(n) ** (1.0 / dim)
    return directions * radii[:, None]


def random_points_in_shell(
    gen: np.random.Generator,
    n: int,
    r_min: float,
    r_max: float,
    dim: int = DIM,
) -> FloatArray:
    """Draw n points with Euclidean norm uniform in [r_min, r_max]."""
    directions = random_unit_vectors(gen, n, dim)
    radii = gen.uniform(r_min, r_max, n)
    return directions * radii[:, None]


@dataclass(frozen=True)
class Region:
    """A Euclidean ball (r_min == 0) or spherical shell around the origin.

    Attributes:
        r_max: Outer radius
        r_min: Inner radius, 0 for a ball
    """

    r_max: float
    r_min: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.r_min < self.r_max:
            raise ValueError(f"invalid region radii: [{self.r_min}, {self.r_max}]")

    def sample(self, gen: np.random.Generator, n: int) -> FloatArray:
        if self.r_min == 0.0:
            return random_points_in_ball(gen, n, self.r_max)
        return random_points_in_shell(gen, n, self.r_min, self.r_max)


def evaluation_sample(seed: int = SAMPLE_SEED) -> FloatArray:
    """Deterministic sample on which quadratic maps are compared.

    The sample is the 4 basis vectors, their 6 pairwise sums and 20 seeded
    unit vectors (30 rows). A real quadratic map on R^4 is determined by its
    values on the first ten rows.
    """
    basis = np.eye(DIM)
    sums = [basis[i] + basis[j] for i in range(DIM) for j in range(i + 1, DIM)]
    seeded = random_unit_vectors(rng(seed), 20)
    return np.vstack([basis, np.array(sums), seeded])


def partial_derivatives(
    f: Callable[[FloatArray], NDArray],
    x: FloatArray,
    step: float,
    order: int = 2,
) -> NDArray:
    """Central-difference partial derivatives of a vectorized field.

    Args:
        f: Function accepting points of shape (..., 4)
        x: Base point(s), shape (..., 4)
        step: Stencil step
        order: 2 for the three-point stencil, 4 for the five-point stencil

    Returns:
        Array of shape (..., 4, *value_shape); index [..., m, ...] is the
        derivative along the m-th coordinate.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    x = np.asarray(x, dtype=float)
    eye = np.eye(DIM)
    derivs = []
    for m in range(DIM):
        e = step * eye[m]
        if order == 2:
            d = (f(x + e) - f(x - e)) / (2.0 * step)
        elif order == 4:
            d = (-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (
                12.0 * step
            )
        else:
            raise ValueError(f"unsupported stencil order: {order}")
        derivs.append(np.asarray(d))
    return np.stack(derivs, axis=x.ndim - 1)
