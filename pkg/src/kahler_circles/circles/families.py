"""Complete complex families of circles beyond metric geodesics.

A planar family lives on a domain U of C and is rectified at each point by
a Moebius map P = L1/L2. Its suspension is a family on U x C: on a vertical
complex line {z = const} the curves are real lines; on any other complex
line the curves are the preimages of the planar curves under the
projection (z, w) -> z.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from kahler_circles.circles.projective import ProjectiveMap
from kahler_circles.errors import (
    DomainError,
    PreconditionError,
    SingularLocusError,
    UnknownIdentifierError,
)
from kahler_circles.geometry.connection import Trajectory, geodesic
from kahler_circles.geometry.metrics import EXTERIOR_MARGIN, ball_metric
from kahler_circles.numerics import DIM, FloatArray

ComplexArray = NDArray[np.complex128]

# Directions with |Re u| below this are treated as vertical
VERTICAL = 1e-12


@dataclass(frozen=True)
class MoebiusMap:
    """P(z) = L1(z) / L2(z) with L1 = a z + b and L2 = c z + d."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __call__(self, z: NDArray) -> ComplexArray:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def denominator(self, z: NDArray) -> ComplexArray:
        return self.c * np.asarray(z) + self.d


CurveFn = Callable[[complex, complex, NDArray], tuple[ComplexArray, ComplexArray]]


@dataclass(frozen=True, eq=False)
class PlanarFamily:
    """A point-wise rectifiable family of circles on a domain U of C.

    Attributes:
        name: Identifier
        contains: Membership test for U
        curve: (z0, unit direction u, times t) -> (points, velocities) of the
            family curve through z0 with velocity u at t = 0
        reach: z0 -> largest |t| for which the curve stays in U
        rectifier: z0 -> Moebius map straightening every curve through z0
    """

    name: str
    contains: Callable[[complex], bool]
    curve: CurveFn
    reach: Callable[[complex], float]
    rectifier: Callable[[complex], MoebiusMap]

    def check(self, z0: complex) -> None:
        if not self.contains(z0):
            raise DomainError(f"{self.name}: point {z0} is outside the family's domain")

    def sample(self, z0: complex, u: complex, n: int = 64) -> tuple[FloatArray, ComplexArray, ComplexArray]:
        """n samples of the curve through z0 in direction u, t in [0, reach)."""
        self.check(z0)
        u = complex(u) / abs(u)
        t = np.linspace(0.0, 0.9 * self.reach(z0), n)
        points, velocities = self.curve(complex(z0), u, t)
        return t, points, velocities


def _poincare_curve(z0: complex, u: complex, t: NDArray) -> tuple[ComplexArray, ComplexArray]:
    t = np.asarray(t, dtype=float)
    if abs(u.real) <= VERTICAL:
        return z0 + t * u, np.full(t.shape, u, dtype=complex)
    x, y = z0.real, z0.imag
    center = x + y * u.imag / u.real
    radius = y / abs(u.real)
    sigma = -np.sign(u.real)
    phase = np.exp(1j * sigma * t / radius)
    points = center + (z0 - center) * phase
    velocities = (z0 - center) * (1j * sigma / radius) * phase
    return points, velocities


def poincare_family() -> PlanarFamily:
    """Geodesics of the Poincare upper half-plane, rectified by 1/(z - conj(z0))."""
    return PlanarFamily(
        name="poincare",
        contains=lambda z: complex(z).imag > 0.0,
        curve=_poincare_curve,
        reach=lambda z: complex(z).imag,
        rectifier=lambda z: MoebiusMap(0.0, 1.0, 1.0, -complex(z).conjugate()),
    )


def _line_curve(z0: complex, u: complex, t: NDArray) -> tuple[ComplexArray, ComplexArray]:
    t = np.asarray(t, dtype=float)
    return z0 + t * u, np.full(t.shape, u, dtype=complex)


def line_family() -> PlanarFamily:
    """Straight lines of C; the rectifier is the identity."""
    return PlanarFamily(
        name="lines",
        contains=lambda z: bool(np.isfinite(complex(z))),
        curve=_line_curve,
        reach=lambda z: 1.0,
        rectifier=lambda z: MoebiusMap(1.0, 0.0, 0.0, 1.0),
    )


@dataclass(frozen=True, eq=False)
class SuspensionFamily:
    """Suspension of a planar family to U x C."""

    base: PlanarFamily

    @property
    def name(self) -> str:
        return f"suspension:{self.base.name}"

    def contains(self, point: NDArray) -> bool:
        z = complex(point[0], point[1])
        return self.base.contains(z)

    def curve(self, point: NDArray, direction: NDArray, n: int = 64) -> Trajectory:
        """The family curve through a point with the given initial velocity.

        Args:
            point: a = (z, w) as a real 4-vector
            direction: (dz, dw) as a real 4-vector, nonzero
            n: Number of samples

        Raises:
            DomainError: If the point is outside U x C
            PreconditionError: If the direction is zero
        """
        point = np.asarray(point, dtype=float)
        direction = np.asarray(direction, dtype=float)
        if not self.contains(point):
            raise DomainError(f"{self.name}: point outside U x C")
        z, w = complex(point[0], point[1]), complex(point[2], point[3])
        dz, dw = complex(direction[0], direction[1]), complex(direction[2], direction[3])
        if dz == 0 and dw == 0:
            raise PreconditionError("direction must be nonzero")

        if abs(dz) == 0.0:
            # vertical complex line: a real line
            t = np.linspace(0.0, 1.0, n)
            zeta = np.full(n, z, dtype=complex)
            omega = w + t * dw
            d_zeta = np.zeros(n, dtype=complex)
            d_omega = np.full(n, dw, dtype=complex)
        else:
            s, zeta, base_velocity = self.base.sample(z, dz, n)
            # base arc length s = |dz| t gives velocity (dz, dw) at t = 0
            t = s / abs(dz)
            d_zeta = base_velocity * abs(dz)
            slope = dw / dz
            omega = w + (zeta - z) * slope
            d_omega = d_zeta * slope

        points = np.stack([zeta.real, zeta.imag, omega.real, omega.imag], axis=1)
        velocities = np.stack([d_zeta.real, d_zeta.imag, d_omega.real, d_omega.imag], axis=1)
        return Trajectory(times=t, points=points, velocities=velocities, metric=self.name)


def suspend(base: PlanarFamily) -> SuspensionFamily:
    return SuspensionFamily(base=base)


def suspension_rectifier(fam: SuspensionFamily, a: NDArray) -> ProjectiveMap:
    """(z, w) -> (P(z), w / L2(z)) with P = L1/L2 the base rectifier at z(a).

    Raises:
        SingularLocusError: If L2 vanishes at a
    """
    a = np.asarray(a, dtype=float)
    if not fam.contains(a):
        raise DomainError(f"{fam.name}: point outside U x C")
    z = complex(a[0], a[1])
    P = fam.base.rectifier(z)
    if abs(P.denominator(z)) < 1e-12:
        raise SingularLocusError(f"{fam.name}: L2 vanishes at the base point")
    M = np.array(
        [[P.a, 0, P.b], [0, 1, 0], [P.c, 0, P.d]],
        dtype=complex,
    )
    return ProjectiveMap(M)


FAMILIES: dict[str, Callable[[], PlanarFamily]] = {
    "poincare": poincare_family,
    "lines": line_family,
}


def get_family(identifier: str) -> SuspensionFamily:
    """Suspension named "suspension:<planar family>"."""
    kind, _, base = identifier.strip().lower().partition(":")
    if kind != "suspension" or base not in FAMILIES:
        raise UnknownIdentifierError(
            f"Unknown family: {identifier}. Supported families: "
            + ", ".join([f"suspension:{name}" for name in FAMILIES] + ["exterior-ball"])
        )
    return suspend(FAMILIES[base]())


def exterior_ball_curve(p: NDArray, v: NDArray, T: float, n: int) -> Trajectory:
    """Geodesic of the ball metric in the exterior of the unit ball.

    Raises:
        DomainError: If |z(p)|^2 <= 1 + 1e-6
        DomainExitError: If the curve reaches |z|^2 <= 1 + 1e-6
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (DIM,) or float(p @ p) <= 1.0 + EXTERIOR_MARGIN:
        raise DomainError(f"exterior-ball: start point must satisfy |z|^2 > 1 + {EXTERIOR_MARGIN:g}")
    return geodesic(ball_metric("exterior"), p, v, T, n)
