"""Christoffel form, geodesics and exponential 2-jets.

Sign convention: a geodesic satisfies x'' = -Gamma(x', x'), so the
exponential map at p has the 2-jet x -> p + x + 1/2 A(x) x with
A(x) x = -Gamma_p(x, x).
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from kahler_circles.core.quaternion import (
    J_MATRIX,
    ComplexFunctional,
    RealLinearMapToH,
    hamilton,
    jmul,
    quadratic_holomorphy_defect,
)
from kahler_circles.errors import DegenerateMetricError, DomainExitError
from kahler_circles.geometry.metrics import DEFAULT_FD_STEP, MetricField
from kahler_circles.numerics import DIM, FloatArray, evaluation_sample

DEGENERACY_THRESHOLD = 1e-12

MIN_STEPS = 16


@dataclass(frozen=True, eq=False)
class ChristoffelData:
    """Christoffel form Gamma at a point.

    Attributes:
        point: Base point
        coefficients: Gamma^l_ij as an array indexed [l, i, j], symmetric in (i, j)
    """

    point: FloatArray
    coefficients: FloatArray

    def __call__(self, v: NDArray, w: NDArray) -> FloatArray:
        return np.einsum("lij,...i,...j->...l", self.coefficients, v, w)

    def quadratic(self, v: NDArray) -> FloatArray:
        return self(v, v)


def christoffel_symbols(
    g: MetricField, p: NDArray, step: float = DEFAULT_FD_STEP
) -> FloatArray:
    """Levi-Civita symbols Gamma^l_ij at points of shape (..., 4).

    Returns:
        Array of shape (..., 4, 4, 4) indexed [..., l, i, j]

    Raises:
        DegenerateMetricError: If |det g| < 1e-12 at any of the points
    """
    p = np.asarray(p, dtype=float)
    G = g.evaluate(p)
    det = np.linalg.det(G)
    if np.any(np.abs(det) < DEGENERACY_THRESHOLD):
        raise DegenerateMetricError(f"{g.name}: metric is degenerate (|det g| < 1e-12)")
    dg = g.derivative(p, step)
    # lowered symbols Gamma_{k,ij} = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij)
    low = 0.5 * (np.einsum("...ijk->...kij", dg) + np.einsum("...jik->...kij", dg) - dg)
    return np.einsum("...lk,...kij->...lij", np.linalg.inv(G), low)


def christoffel(g: MetricField, p: NDArray, step: float = DEFAULT_FD_STEP) -> ChristoffelData:
    """Christoffel form of g at a single point p."""
    p = np.asarray(p, dtype=float)
    return ChristoffelData(point=p.copy(), coefficients=christoffel_symbols(g, p, step))


def complex_bilinearity_defect(gamma: ChristoffelData) -> float:
    """max over basis pairs of |Gamma(Jv, w) - J Gamma(v, w)|."""
    T = gamma.coefficients
    rotated_first = np.einsum("lib,ia->abl", T, J_MATRIX)
    rotated_value = np.einsum("kl,lab->abk", J_MATRIX, T)
    return float(np.linalg.norm(rotated_first - rotated_value, axis=-1).max())


@dataclass(frozen=True, eq=False)
class ProportionalityFit:
    """Best fit of Gamma(v, v) by L(v) v with L complex-valued and R-linear.

    Attributes:
        coefficients: Complex l_m with L(v) = sum_m l_m v_m
        residual: max over the sample of |Gamma(v, v) - L(v) v|
        linearity_defect: max over basis v of |L(Jv) - i L(v)|, only
            reported when the residual is within tolerance
    """

    coefficients: NDArray[np.complex128]
    residual: float
    linearity_defect: Optional[float]

    def __call__(self, v: NDArray) -> Union[complex, NDArray[np.complex128]]:
        value = np.asarray(v, dtype=float) @ self.coefficients
        return complex(value) if np.ndim(value) == 0 else value

    @property
    def functional(self) -> ComplexFunctional:
        """The complex linear functional with the same values on e0 and e2."""
        return ComplexFunctional(complex(self.coefficients[0]), complex(self.coefficients[2]))


def extract_L(gamma: ChristoffelData, tol: float = 1e-6) -> ProportionalityFit:
    """Least-squares fit of L with Gamma(v, v) = L(v) v on the evaluation sample."""
    sample = evaluation_sample()
    targets = gamma.quadratic(sample)
    rotated = jmul(sample)
    columns = [sample[:, m, None] * sample for m in range(DIM)]
    columns += [sample[:, m, None] * rotated for m in range(DIM)]
    design = np.stack(columns, axis=-1)
    solution, *_ = linalg.lstsq(design.reshape(-1, 2 * DIM), targets.reshape(-1))
    fitted = (design @ solution).reshape(targets.shape)
    residual = float(np.linalg.norm(fitted - targets, axis=-1).max())
    coefficients = solution[:DIM] + 1j * solution[DIM:]

    linearity: Optional[float] = None
    if residual <= tol:
        on_rotated = J_MATRIX.T @ coefficients
        linearity = float(np.abs(on_rotated - 1j * coefficients).max())
    return ProportionalityFit(coefficients=coefficients, residual=residual, linearity_defect=linearity)


# ---------------------------------------------------------------------------
# Geodesics
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A sampled curve with its velocities.

    Attributes:
        times: Strictly increasing sample times
        points: Positions, shape (n, 4)
        velocities: Velocities, shape (n, 4)
        metric: Name of the metric (or family) that produced the curve
        complete: False when integration stopped at the domain boundary
    """

    times: FloatArray
    points: FloatArray
    velocities: FloatArray
    metric: str
    complete: bool = True

    def __post_init__(self) -> None:
        n = len(self.times)
        if n == 0:
            raise ValueError("trajectory has no samples")
        if self.points.shape != (n, DIM) or self.velocities.shape != (n, DIM):
            raise ValueError("times, points and velocities must have matching lengths")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def initial_point(self) -> FloatArray:
        return self.points[0]

    @property
    def initial_velocity(self) -> FloatArray:
        return self.velocities[0]


def _acceleration(g: MetricField, x: FloatArray, v: FloatArray, step: float) -> FloatArray:
    gamma = christoffel_symbols(g, x, step)
    return -np.einsum("...lij,...i,...j->...l", gamma, v, v)


def _rk4_step(
    g: MetricField,
    x: FloatArray,
    v: FloatArray,
    dt: float,
    step: float,
) -> tuple[NDArray[np.bool_], FloatArray, FloatArray]:
    """One RK4 step of (x, v)' = (v, -Gamma_x(v, v)) for a batch of states.

    Rows whose stage points leave the domain are flagged in the returned
    mask; their acceleration is evaluated at the base point instead.
    """
    ok = np.ones(len(x), dtype=bool)

    def accel(y: FloatArray, u: FloatArray) -> FloatArray:
        nonlocal ok
        ok = ok & np.asarray(g.in_domain(y), dtype=bool)
        return _acceleration(g, np.where(ok[:, None], y, x), u, step)

    k1x, k1v = v, accel(x, v)
    k2x = v + 0.5 * dt * k1v
    k2v = accel(x + 0.5 * dt * k1x, k2x)
    k3x = v + 0.5 * dt * k2v
    k3v = accel(x + 0.5 * dt * k2x, k3x)
    k4x = v + dt * k3v
    k4v = accel(x + dt * k3x, k4x)

    x_new = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    v_new = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    ok = ok & np.asarray(g.in_domain(x_new), dtype=bool) & np.isfinite(v_new).all(axis=-1)
    return ok, x_new, v_new


def geodesics(
    g: MetricField,
    P: NDArray,
    V: NDArray,
    T: float,
    n: int,
    step: float = DEFAULT_FD_STEP,
) -> list[Trajectory]:
    """Integrate a batch of geodesics with fixed-step RK4.

    Each geodesic is frozen individually when a stage point leaves the
    domain; its trajectory is then truncated and marked incomplete.

    Args:
        g: Metric field
        P: Initial points, shape (b, 4)
        V: Initial velocities, shape (b, 4)
        T: Integration horizon (> 0)
        n: Number of RK4 steps (>= 16); n + 1 samples are returned
        step: Finite-difference step for fields without exact derivatives

    Returns:
        One Trajectory per initial condition, in input order
    """
    if n < MIN_STEPS:
        raise ValueError(f"n must be at least {MIN_STEPS}, got {n}")
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    P = np.atleast_2d(np.asarray(P, dtype=float))
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if P.shape != V.shape or P.shape[-1] != DIM:
        raise ValueError(f"points and velocities must both have shape (b, 4), got {P.shape} and {V.shape}")
    g.check_domain(P)

    batch = len(P)
    dt = T / n
    times = np.linspace(0.0, T, n + 1)
    xs = np.empty((n + 1, batch, DIM))
    vs = np.empty((n + 1, batch, DIM))
    xs[0], vs[0] = P, V
    last = np.full(batch, n)
    alive = np.ones(batch, dtype=bool)
    x, v = P.copy(), V.copy()

    for k in range(n):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        ok, x_new, v_new = _rk4_step(g, x[idx], v[idx], dt, step)
        stopped = idx[~ok]
        last[stopped] = k
        alive[stopped] = False
        moved = idx[ok]
        x[moved], v[moved] = x_new[ok], v_new[ok]
        xs[k + 1, moved], vs[k + 1, moved] = x_new[ok], v_new[ok]

    return [
        Trajectory(
            times=times[: last[b] + 1].copy(),
            points=xs[: last[b] + 1, b].copy(),
            velocities=vs[: last[b] + 1, b].copy(),
            metric=g.name,
            complete=bool(last[b] == n),
        )
        for b in range(batch)
    ]


def geodesic(
    g: MetricField,
    p: NDArray,
    v: NDArray,
    T: float,
    n: int,
    step: float = DEFAULT_FD_STEP,
) -> Trajectory:
    """Integrate a single geodesic from (p, v) over [0, T] with n RK4 steps.

    Raises:
        DomainExitError: If the curve leaves the domain; the partial
            trajectory is attached as ``.partial``
    """
    traj = geodesics(g, np.asarray(p, dtype=float)[None], np.asarray(v, dtype=float)[None], T, n, step)[0]
    if not traj.complete:
        raise DomainExitError(
            f"{g.name}: geodesic left the domain at t={traj.times[-1]:.6g} "
            f"(requires {g.constraint})",
            partial=traj,
        )
    return traj


def energy_drift(traj: Trajectory, g: MetricField) -> float:
    """Largest change of g(x', x') along a trajectory.

    Relative to |g_p|_2 |v0|^2, which stays meaningful for indefinite forms.
    """
    energy = np.einsum("nij,ni,nj->n", g.evaluate(traj.points), traj.velocities, traj.velocities)
    scale = np.linalg.norm(g.evaluate(traj.initial_point), 2) * float(traj.initial_velocity @ traj.initial_velocity)
    if scale == 0.0:
        return 0.0
    return float(np.abs(energy - energy[0]).max() / scale)


# ---------------------------------------------------------------------------
# Exponential 2-jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExpJet2:
    """Quadratic part of the exponential map at a point.

    Attributes:
        christoffel: Gamma at the base point
        A: Best-fit map with A(x) x close to -Gamma(x, x)
        residual: max over the evaluation sample of |A(x) x + Gamma(x, x)|
    """

    christoffel: ChristoffelData
    A: RealLinearMapToH
    residual: float

    def quadratic(self, x: NDArray) -> FloatArray:
        """Q(x) = -Gamma_p(x, x)."""
        return -self.christoffel.quadratic(x)

    def holomorphy_defect(self) -> float:
        return quadratic_holomorphy_defect(self.quadratic)


def exp_jet2(g: MetricField, p: NDArray, step: float = DEFAULT_FD_STEP) -> ExpJet2:
    """Exponential 2-jet of g at p and its quaternionic form A(x) x."""
    gamma = christoffel(g, p, step)
    sample = evaluation_sample()
    targets = -gamma.quadratic(sample)
    units = np.eye(DIM)
    # unknown M[c, m] multiplies x_m (e_c * x)
    columns = [sample[:, m, None] * hamilton(units[c], sample) for c in range(DIM) for m in range(DIM)]
    design = np.stack(columns, axis=-1)
    solution, *_ = linalg.lstsq(design.reshape(-1, DIM * DIM), targets.reshape(-1))
    A = RealLinearMapToH(solution.reshape(DIM, DIM))
    residual = float(np.linalg.norm(A.quadratic(sample) - targets, axis=-1).max())
    return ExpJet2(christoffel=gamma, A=A, residual=residual)
