"""Complex projective transformations of the affine chart C^2 of CP^2.

A 3x3 complex matrix M acts on (z1, z2) through the homogeneous lift
[z1, z2, 1]. The rectifier x -> p + (1 - 1/2 L(x))^-1 x of a complex
linear functional L is such a map; it takes real lines to circles and has
the 2-jet x -> p + x + 1/2 L(x) x at the origin.
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.typing import NDArray

from kahler_circles.circles.fitting import CircleFit, fit_circle
from kahler_circles.core.quaternion import (
    ComplexFunctional,
    NotHolomorphic,
    RealLinearMapToH,
    classify_A,
    from_complex,
    to_complex,
)
from kahler_circles.errors import PreconditionError, SingularLocusError
from kahler_circles.geometry.connection import ChristoffelData, Trajectory, extract_L
from kahler_circles.numerics import DIM, FloatArray

# Smallest |last homogeneous coordinate| accepted when applying a map
SINGULAR_MARGIN = 1e-6

JET_STEP = 1e-4


def _canonical(M: NDArray) -> NDArray[np.complex128]:
    """Unit Frobenius norm and positive-real first nonzero entry."""
    M = np.asarray(M, dtype=complex)
    M = M / np.linalg.norm(M)
    flat = M.ravel()
    pivot = flat[np.flatnonzero(np.abs(flat) > 1e-12)[0]]
    return M * (abs(pivot) / pivot)


@dataclass(frozen=True, eq=False)
class ProjectiveMap:
    """Projective transformation of the affine chart, canonically scaled.

    Attributes:
        M: Homogeneous 3x3 complex matrix
    """

    M: NDArray[np.complex128]

    def __post_init__(self) -> None:
        M = np.asarray(self.M, dtype=complex)
        if M.shape != (3, 3) or not np.all(np.isfinite(M)):
            raise PreconditionError("a projective map needs a finite 3x3 matrix")
        if np.linalg.norm(M) == 0.0:
            raise PreconditionError("projective matrix is zero")
        M = _canonical(M)
        if abs(np.linalg.det(M)) < 1e-12:
            raise PreconditionError("projective matrix is singular")
        object.__setattr__(self, "M", M)

    @classmethod
    def identity(cls) -> "ProjectiveMap":
        return cls(np.eye(3, dtype=complex))

    @classmethod
    def translation(cls, p: NDArray) -> "ProjectiveMap":
        z = to_complex(p)
        return cls(np.array([[1, 0, z[0]], [0, 1, z[1]], [0, 0, 1]], dtype=complex))

    def _homogeneous(self, z: NDArray) -> NDArray[np.complex128]:
        lifted = np.concatenate([z, np.ones(z.shape[:-1] + (1,))], axis=-1)
        return lifted @ self.M.T

    def denominator(self, x: NDArray) -> NDArray[np.complex128]:
        """Last homogeneous coordinate of the image; the map is singular where it vanishes."""
        return self._homogeneous(to_complex(x))[..., 2]

    def apply_complex(self, z: NDArray) -> NDArray[np.complex128]:
        """Image of complex points (..., 2)."""
        w = self._homogeneous(np.asarray(z, dtype=complex))
        if np.any(np.abs(w[..., 2]) < SINGULAR_MARGIN):
            raise SingularLocusError("point too close to the singular hyperplane of the map")
        return w[..., :2] / w[..., 2:]

    def __call__(self, x: NDArray) -> FloatArray:
        """Image of real points (..., 4)."""
        return from_complex(self.apply_complex(to_complex(x)))

    def push(self, x: NDArray, v: NDArray) -> FloatArray:
        """Differential of the map at x applied to v, as real (..., 4) arrays."""
        w = self._homogeneous(to_complex(x))
        if np.any(np.abs(w[..., 2]) < SINGULAR_MARGIN):
            raise SingularLocusError("point too close to the singular hyperplane of the map")
        dw = to_complex(v) @ self.M[:, :2].T
        w2 = w[..., 2:]
        dy = (dw[..., :2] * w2 - w[..., :2] * dw[..., 2:]) / w2**2
        return from_complex(dy)

    def compose(self, other: "ProjectiveMap") -> "ProjectiveMap":
        """self after other."""
        return ProjectiveMap(self.M @ other.M)

    def inverse(self) -> "ProjectiveMap":
        return ProjectiveMap(np.linalg.inv(self.M))

    def __matmul__(self, other: "ProjectiveMap") -> "ProjectiveMap":
        return self.compose(other)

    def allclose(self, other: "ProjectiveMap", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.M, other.M, rtol=0.0, atol=atol))


def rectifier(
    p: NDArray,
    L: Union[ComplexFunctional, RealLinearMapToH],
) -> ProjectiveMap:
    """The projective map x -> p + (1 - 1/2 L(x))^-1 x.

    L(x) acts on x as a complex scalar on C^2, so placing the factor on the
    left or on the right of x gives the same map.

    Raises:
        PreconditionError: If L is given as a map to H that is not a complex
            linear functional
    """
    if isinstance(L, RealLinearMapToH):
        result = classify_A(L)
        if isinstance(result, NotHolomorphic):
            raise PreconditionError(
                f"rectifier needs a complex linear functional (holomorphy defect {result.defect:.3g})"
            )
        L = result.L
    scaling = np.array(
        [[1, 0, 0], [0, 1, 0], [-0.5 * L.c1, -0.5 * L.c2, 1]],
        dtype=complex,
    )
    return ProjectiveMap(ProjectiveMap.translation(p).M @ scaling)


def rectifier_from_christoffel(
    p: NDArray, gamma: ChristoffelData, tol: float = 1e-6
) -> ProjectiveMap:
    """Rectifier whose 2-jet at p is the exponential 2-jet, i.e. A = -L.

    Raises:
        PreconditionError: If Gamma(v, v) is not of the form L(v) v
    """
    fit = extract_L(gamma, tol)
    if fit.residual > tol or fit.linearity_defect is None or fit.linearity_defect > tol:
        raise PreconditionError(
            f"Christoffel form is not complex-proportional (residual {fit.residual:.3g})"
        )
    return rectifier(p, -fit.functional)


@dataclass(frozen=True)
class Jet2:
    """Value, first and second differentials of a map at a base point.

    ``hessian[r, i, j]`` is the second partial of component r along x_i, x_j.
    """

    value: FloatArray
    linear: FloatArray
    hessian: FloatArray

    def quadratic(self, x: NDArray) -> FloatArray:
        """The second differential evaluated on (x, x)."""
        return np.einsum("rij,...i,...j->...r", self.hessian, x, x)


def jet2_of_map(
    F: Callable[[FloatArray], FloatArray],
    base: NDArray,
    step: float = JET_STEP,
) -> Jet2:
    """Central-difference 2-jet of a vectorized map R^4 -> R^4."""
    base = np.asarray(base, dtype=float)
    h = step
    eye = np.eye(DIM)
    linear = np.empty((DIM, DIM))
    hessian = np.empty((DIM, DIM, DIM))
    value = np.asarray(F(base), dtype=float)
    for i in range(DIM):
        ei = h * eye[i]
        linear[:, i] = (F(base + ei) - F(base - ei)) / (2 * h)
        hessian[:, i, i] = (F(base + 2 * ei) - 2 * value + F(base - 2 * ei)) / (4 * h * h)
        for j in range(i + 1, DIM):
            ej = h * eye[j]
            mixed = (
                F(base + ei + ej) - F(base + ei - ej) - F(base - ei + ej) + F(base - ei - ej)
            ) / (4 * h * h)
            hessian[:, i, j] = mixed
            hessian[:, j, i] = mixed
    return Jet2(value=value, linear=linear, hessian=hessian)


def _segment(F: ProjectiveMap, q: NDArray, direction: NDArray, t: FloatArray) -> FloatArray:
    points = np.asarray(q, dtype=float) + t[:, None] * np.asarray(direction, dtype=float)
    if np.abs(F.denominator(points)).min() < SINGULAR_MARGIN:
        raise SingularLocusError("sampled segment comes too close to the singular hyperplane")
    return points


def image_of_line(
    F: ProjectiveMap,
    q: NDArray,
    direction: NDArray,
    T: float = 1.0,
    n: int = 64,
) -> CircleFit:
    """Fit a circle to the image of the segment q + t dir, t in [-T, T]."""
    points = _segment(F, q, direction, np.linspace(-T, T, n))
    return fit_circle(F(points))


def image_trajectory(
    F: ProjectiveMap,
    q: NDArray,
    direction: NDArray,
    T: float = 1.0,
    n: int = 64,
) -> Trajectory:
    """Image of q + t dir, t in [0, T], with exact velocities."""
    t = np.linspace(0.0, T, n)
    points = _segment(F, q, direction, t)
    velocities = F.push(points, np.broadcast_to(direction, points.shape))
    return Trajectory(times=t, points=F(points), velocities=velocities, metric="projective-image")
