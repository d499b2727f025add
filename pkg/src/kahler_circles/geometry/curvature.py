"""Riemann tensor, holomorphic sectional curvature and constancy scans."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from kahler_circles.core.quaternion import jmul
from kahler_circles.errors import DegenerateMetricError
from kahler_circles.geometry.connection import christoffel_symbols
from kahler_circles.geometry.metrics import MetricField
from kahler_circles.numerics import FloatArray, Region, partial_derivatives, random_unit_vectors, rng

CURVATURE_STEP = 1e-3

PLANE_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class RiemannTensor:
    """Curvature tensor at a point.

    ``tensor[l, i, j, k]`` is the l-th component of R(e_j, e_k) e_i and
    ``lowered[a, i, j, k]`` is g(R(e_j, e_k) e_i, e_a).
    """

    point: FloatArray
    tensor: FloatArray
    lowered: FloatArray
    metric_form: FloatArray

    def sectional(self, X: NDArray, Y: NDArray) -> float:
        """Sectional curvature of span(X, Y)."""
        G = self.metric_form
        denominator = (X @ G @ X) * (Y @ G @ Y) - (X @ G @ Y) ** 2
        if abs(denominator) <= PLANE_THRESHOLD:
            raise DegenerateMetricError("the 2-plane is degenerate for the metric")
        numerator = np.einsum("aijk,a,i,j,k->", self.lowered, X, Y, X, Y)
        return float(numerator / denominator)


def riemann(g: MetricField, p: NDArray, step: float = CURVATURE_STEP) -> RiemannTensor:
    """R^l_ijk = d_j G^l_ki - d_k G^l_ji + G^l_jm G^m_ki - G^l_km G^m_ji.

    Derivatives of the Christoffel symbols use the five-point stencil.
    """
    p = np.asarray(p, dtype=float)
    G = g.evaluate(p)
    gamma = christoffel_symbols(g, p)
    offsets = step * np.vstack([np.eye(4), -np.eye(4), 2 * np.eye(4), -2 * np.eye(4)])
    g.check_domain(p + offsets)
    d_gamma = partial_derivatives(lambda x: christoffel_symbols(g, x), p, step, order=4)

    tensor = (
        np.einsum("jlki->lijk", d_gamma)
        - np.einsum("klji->lijk", d_gamma)
        + np.einsum("ljm,mki->lijk", gamma, gamma)
        - np.einsum("lkm,mji->lijk", gamma, gamma)
    )
    lowered = np.einsum("al,lijk->aijk", G, tensor)
    return RiemannTensor(point=p.copy(), tensor=tensor, lowered=lowered, metric_form=G)


def hsc(g: MetricField, p: NDArray, xi: NDArray, step: float = CURVATURE_STEP) -> float:
    """Holomorphic sectional curvature: sectional curvature of span(xi, J xi)."""
    xi = np.asarray(xi, dtype=float)
    norm = np.linalg.norm(xi)
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    xi = xi / norm
    return riemann(g, p, step).sectional(xi, jmul(xi))


def gauss_on_complex_line(
    g: MetricField, p: NDArray, xi: NDArray, step: float = CURVATURE_STEP
) -> float:
    """Gauss curvature of the complex line p + C xi with the induced metric.

    Brioschi formula on the chart (s, t) -> p + s xi + t J xi.
    """
    p = np.asarray(p, dtype=float)
    xi = np.asarray(xi, dtype=float)
    xi = xi / np.linalg.norm(xi)
    jxi = jmul(xi)

    offsets = np.array([(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)], dtype=float) * step
    points = p + offsets[:, :1] * xi + offsets[:, 1:] * jxi
    forms = g.evaluate(points).reshape(3, 3, 4, 4)
    E = np.einsum("stij,i,j->st", forms, xi, xi)
    F = np.einsum("stij,i,j->st", forms, xi, jxi)
    Gg = np.einsum("stij,i,j->st", forms, jxi, jxi)

    def d_s(f: NDArray) -> float:
        return float((f[2, 1] - f[0, 1]) / (2 * step))

    def d_t(f: NDArray) -> float:
        return float((f[1, 2] - f[1, 0]) / (2 * step))

    def d_ss(f: NDArray) -> float:
        return float((f[2, 1] - 2 * f[1, 1] + f[0, 1]) / step**2)

    def d_tt(f: NDArray) -> float:
        return float((f[1, 2] - 2 * f[1, 1] + f[1, 0]) / step**2)

    def d_st(f: NDArray) -> float:
        return float((f[2, 2] - f[2, 0] - f[0, 2] + f[0, 0]) / (4 * step**2))

    e, f, gg = E[1, 1], F[1, 1], Gg[1, 1]
    first = np.array(
        [
            [-0.5 * d_tt(E) + d_st(F) - 0.5 * d_ss(Gg), 0.5 * d_s(E), d_s(F) - 0.5 * d_t(E)],
            [d_t(F) - 0.5 * d_s(Gg), e, f],
            [0.5 * d_t(Gg), f, gg],
        ]
    )
    second = np.array(
        [
            [0.0, 0.5 * d_t(E), 0.5 * d_s(Gg)],
            [0.5 * d_t(E), e, f],
            [0.5 * d_s(Gg), f, gg],
        ]
    )
    area = e * gg - f**2
    if abs(area) <= PLANE_THRESHOLD:
        raise DegenerateMetricError("the complex line is degenerate for the metric")
    return float((np.linalg.det(first) - np.linalg.det(second)) / area**2)


@dataclass(frozen=True)
class CurvatureSample:
    """One holomorphic sectional curvature value."""

    point: FloatArray
    direction: FloatArray
    K: float
    gauss: Optional[float] = None


@dataclass(frozen=True)
class CurvatureScan:
    """Spread statistics of holomorphic sectional curvature over a region.

    Attributes:
        metric: Metric name
        n: Number of samples
        mean: Mean of K
        std: Standard deviation of K
        max_dev: Largest |K - mean|
        seed: Seed of the sample
        gauss_disagreement: Largest |K - Gauss curvature of the complex
            line| when the cross-check ran
        samples: The individual values
    """

    metric: str
    n: int
    mean: float
    std: float
    max_dev: float
    seed: int
    gauss_disagreement: Optional[float] = None
    samples: list[CurvatureSample] = field(default_factory=list, repr=False)

    @property
    def relative_spread(self) -> float:
        """std/|mean|, or max_dev when the mean vanishes."""
        if abs(self.mean) <= 1e-8:
            return self.max_dev
        return self.std / abs(self.mean)


def hsc_constancy_scan(
    g: MetricField,
    region: Region,
    n: int,
    seed: int = 0,
    cross_check: bool = False,
) -> CurvatureScan:
    """Sample K at n seeded (point, direction) pairs in a region.

    With ``cross_check`` the Gauss curvature of each complex line is also
    computed and the largest disagreement is reported.
    """
    if n < 10:
        raise ValueError(f"n must be at least 10, got {n}")
    gen = rng(seed)
    points = region.sample(gen, n)
    directions = random_unit_vectors(gen, n)

    samples = []
    for point, direction in zip(points, directions):
        K = hsc(g, point, direction)
        gauss = gauss_on_complex_line(g, point, direction) if cross_check else None
        samples.append(CurvatureSample(point=point, direction=direction, K=K, gauss=gauss))

    values = np.array([s.K for s in samples])
    mean = float(values.mean())
    disagreement = None
    if cross_check:
        disagreement = float(max(abs(s.K - s.gauss) for s in samples if s.gauss is not None))
    return CurvatureScan(
        metric=g.name,
        n=n,
        mean=mean,
        std=float(values.std()),
        max_dev=float(np.abs(values - mean).max()),
        seed=seed,
        gauss_disagreement=disagreement,
        samples=samples,
    )
