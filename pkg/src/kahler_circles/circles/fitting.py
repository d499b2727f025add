"""Circle and line recognition in R^4.

A circle of R^4 lies in an affine 2-plane, so points are first projected to
their principal 2-plane and then fitted by an algebraic circle fit (Pratt
normalization) followed by one Gauss-Newton step on geometric distance.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy import linalg
from scipy.spatial.distance import pdist

from kahler_circles.core.quaternion import jmul
from kahler_circles.errors import FitError, PreconditionError
from kahler_circles.geometry.connection import Trajectory
from kahler_circles.numerics import DIM, FloatArray

MIN_POINTS = 8

# A fit is reported as a line when curvature * sample diameter falls below this
LINE_CURVATURE = 1e-9

COINCIDENT = 1e-14

_PRATT_BINV = np.array(
    [
        [0.0, 0.0, 0.0, -0.5],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [-0.5, 0.0, 0.0, 0.0],
    ]
)


@dataclass(frozen=True)
class CircleFit:
    """Fitted circle or straight line.

    Attributes:
        kind: "circle" or "line"
        center: Center (circles only)
        radius: Radius (circles only)
        plane: Two orthonormal vectors spanning the fitted affine 2-plane
        rms_residual: rms of the full R^4 distance to the fitted curve
        relative_residual: rms_residual / radius (circle) or / sample diameter (line)
    """

    kind: str
    center: Optional[FloatArray]
    radius: Optional[float]
    plane: FloatArray
    rms_residual: float
    relative_residual: float

    @property
    def is_circle(self) -> bool:
        return self.kind == "circle"

    @property
    def curvature(self) -> float:
        return 1.0 / self.radius if self.radius else 0.0


def _as_real_points(points: NDArray) -> FloatArray:
    points = np.asarray(points)
    if np.iscomplexobj(points):
        points = points.reshape(len(points), -1)
        return np.column_stack([points.real, points.imag])
    return np.asarray(points, dtype=float).reshape(len(points), -1)


def line_residual(points: NDArray) -> float:
    """rms distance to the best-fit straight line; complex points are read as R^2."""
    X = _as_real_points(points)
    if len(X) < 2:
        raise FitError("at least two points are needed for a line fit")
    X = X - X.mean(axis=0)
    singular = linalg.svd(X, compute_uv=False)
    return float(np.sqrt(np.sum(singular[1:] ** 2) / len(X)))


def _pratt(xy: FloatArray) -> FloatArray:
    """Algebraic circle A (x^2+y^2) + B x + C y + D = 0 with Pratt normalization."""
    Z = np.sum(xy**2, axis=1)
    design = np.column_stack([Z, xy[:, 0], xy[:, 1], np.ones(len(xy))])
    _, S, Vt = linalg.svd(design, full_matrices=False)
    V = Vt.T
    if S[3] / S[0] < 1e-12:
        return V[:, 3]
    W = V * S
    eigenvalues, eigenvectors = linalg.eigh(W.T @ _PRATT_BINV @ W)
    order = np.argsort(eigenvalues)
    # the smallest eigenvalue is the negative one; the next is the fit
    a = eigenvectors[:, order[1]]
    return V @ (a / S)


def _gauss_newton(xy: FloatArray, center: FloatArray, radius: float) -> tuple[FloatArray, float]:
    """One Gauss-Newton step on the geometric distances | |x - c| - r |."""
    diff = xy - center
    dist = np.linalg.norm(diff, axis=1)
    residual = dist - radius
    jacobian = np.column_stack([-diff / dist[:, None], -np.ones(len(xy))])
    delta, *_ = linalg.lstsq(jacobian, -residual)
    return center + delta[:2], radius + float(delta[2])


def _circle_rms(xy: FloatArray, out_of_plane: FloatArray, center: FloatArray, radius: float) -> float:
    in_plane = np.linalg.norm(xy - center, axis=1) - radius
    return float(np.sqrt(np.mean(in_plane**2 + out_of_plane**2)))


def fit_circle(points: NDArray, refine: bool = True) -> CircleFit:
    """Fit a circle or a straight line to points of R^4.

    Args:
        points: Array of shape (n, 4), n >= 8
        refine: Apply the Gauss-Newton step (kept only if it does not
            increase the residual)

    Raises:
        FitError: With fewer than 8 points or when all points coincide
    """
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or len(P) < MIN_POINTS:
        raise FitError(f"at least {MIN_POINTS} points are needed, got {len(P)}")
    centroid = P.mean(axis=0)
    X = P - centroid
    if np.abs(X).max() <= COINCIDENT:
        raise FitError("all points coincide")
    diameter = float(pdist(P).max())

    _, vectors = linalg.eigh(X.T @ X)
    u1, u2 = vectors[:, -1], vectors[:, -2]
    plane = np.vstack([u1, u2])
    xy = X @ plane.T
    out_of_plane = np.linalg.norm(X - xy @ plane, axis=1)

    along = X @ u1
    line_rms = float(np.sqrt(np.mean(np.sum((X - np.outer(along, u1)) ** 2, axis=1))))

    scale = float(np.sqrt(np.mean(np.sum(xy**2, axis=1))))
    a = _pratt(xy / scale)
    circle: Optional[tuple[FloatArray, float, float]] = None
    discriminant = a[1] ** 2 + a[2] ** 2 - 4.0 * a[0] * a[3]
    if a[0] != 0.0 and discriminant > 0.0:
        curvature = 2.0 * abs(a[0]) / np.sqrt(discriminant) / scale
        if curvature * diameter > LINE_CURVATURE:
            center = -scale * a[1:3] / (2.0 * a[0])
            radius = scale * np.sqrt(discriminant) / (2.0 * abs(a[0]))
            rms = _circle_rms(xy, out_of_plane, center, radius)
            if refine:
                center_gn, radius_gn = _gauss_newton(xy, center, radius)
                rms_gn = _circle_rms(xy, out_of_plane, center_gn, radius_gn)
                if radius_gn > 0 and rms_gn <= rms:
                    center, radius, rms = center_gn, radius_gn, rms_gn
            circle = (center, float(radius), rms)

    if circle is None or line_rms <= circle[2]:
        return CircleFit(
            kind="line",
            center=None,
            radius=None,
            plane=plane,
            rms_residual=line_rms,
            relative_residual=line_rms / diameter,
        )
    center, radius, rms = circle
    return CircleFit(
        kind="circle",
        center=centroid + center @ plane,
        radius=radius,
        plane=plane,
        rms_residual=rms,
        relative_residual=rms / radius,
    )


def circle_from_jet(p: NDArray, v: NDArray, a: NDArray) -> CircleFit:
    """The circle (or line) through p with velocity v and acceleration a.

    Raises:
        FitError: If v is zero
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    a = np.asarray(a, dtype=float)
    vv = float(v @ v)
    if vv == 0.0:
        raise FitError("velocity must be nonzero")
    a_perp = a - (float(a @ v) / vv) * v
    norm_perp = float(np.linalg.norm(a_perp))
    u1 = v / np.sqrt(vv)
    if norm_perp <= 1e-12 * float(np.linalg.norm(a)) + 1e-300:
        # any unit vector orthogonal to v completes the plane
        basis = linalg.null_space(u1[None, :])
        return CircleFit(
            kind="line",
            center=None,
            radius=None,
            plane=np.vstack([u1, basis[:, 0]]),
            rms_residual=0.0,
            relative_residual=0.0,
        )
    radius = vv / norm_perp
    return CircleFit(
        kind="circle",
        center=p + (vv / norm_perp**2) * a_perp,
        radius=radius,
        plane=np.vstack([u1, a_perp / norm_perp]),
        rms_residual=0.0,
        relative_residual=0.0,
    )


def complex_line_distance(points: NDArray, p: NDArray, v: NDArray) -> FloatArray:
    """Euclidean distances of points to the complex line {p + c v : c in C}."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise PreconditionError("direction must be nonzero")
    u1 = v / norm
    u2 = jmul(u1)
    W = np.asarray(points, dtype=float) - np.asarray(p, dtype=float)
    residual = W - np.outer(W @ u1, u1) - np.outer(W @ u2, u2)
    return np.linalg.norm(residual, axis=1)


def complex_line_defect(traj: Trajectory) -> float:
    """Largest distance of a trajectory to its initial complex line, over its diameter."""
    if len(traj) < 2:
        return 0.0
    diameter = float(pdist(traj.points).max())
    if diameter == 0.0:
        return 0.0
    distances = complex_line_distance(traj.points, traj.initial_point, traj.initial_velocity)
    return float(distances.max() / diameter)
