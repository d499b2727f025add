"""Gram-determinant normalization of Hermitian metrics on domains of C^2.

For a metric whose complex lines are totally geodesic, h = g / G^(2/3) is
constant along every complex line, where G is the Gram determinant of a
constant complex frame. The metric is recovered as g = h / H^2 with H the
Gram determinant of h, and h(v, v) is a Hermitian form in the complex
momentum v and the angular momentum x ^ v.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from kahler_circles.core.quaternion import jmul, to_complex
from kahler_circles.errors import (
    DefinitenessError,
    DependenceError,
    PreconditionError,
    SamplingError,
)
from kahler_circles.geometry.connection import christoffel, extract_L
from kahler_circles.geometry.metrics import (
    DEFAULT_FD_STEP,
    MetricField,
    complex_wedge,
    gram_from_form,
)
from kahler_circles.numerics import DIM, FloatArray, Region, random_unit_vectors, rng

DEFAULT_FRAME = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])

MOMENTUM_FEATURES = 9


@dataclass(frozen=True, eq=False)
class NormalizedField:
    """h = g / (G / G(p*))^(2/3) for a fixed constant complex frame.

    Attributes:
        base: The metric g
        frame: Constant complex frame (X, Y), shape (2, 4)
        base_point: Normalization point p*
        gram_at_base: G(p*)
    """

    base: MetricField
    frame: FloatArray
    base_point: FloatArray
    gram_at_base: float

    def gram(self, x: NDArray) -> FloatArray:
        X, Y = self.frame
        return gram_from_form(self.base.evaluate(x), X, Y)

    def evaluate_h(self, x: NDArray) -> FloatArray:
        x = np.asarray(x, dtype=float)
        G = self.gram(x)
        if np.any(G <= 0):
            raise DefinitenessError(f"{self.base.name}: Gram determinant is not positive")
        ratio = G / self.gram_at_base
        return self.base.evaluate(x) / ratio[..., None, None] ** (2.0 / 3.0)

    def as_metric(self) -> MetricField:
        """h as a metric field of its own."""
        return MetricField(
            name=f"h[{self.base.name}]",
            form=self.evaluate_h,
            domain=self.base.domain,
            constraint=self.base.constraint,
            singular=self.base.singular,
            singular_constraint=self.base.singular_constraint,
        )


def normalized_h(
    g: MetricField,
    frame: NDArray = DEFAULT_FRAME,
    base_point: Optional[NDArray] = None,
) -> NormalizedField:
    """Normalize g by the Gram determinant of a constant complex frame.

    Raises:
        DefinitenessError: If G(p*) <= 0
    """
    frame = np.asarray(frame, dtype=float)
    if abs(complex_wedge(frame[0], frame[1])) < 1e-12:
        raise DependenceError("frame vectors are complex-linearly dependent")
    base_point = np.zeros(DIM) if base_point is None else np.asarray(base_point, dtype=float)
    G_star = float(gram_from_form(g.evaluate(base_point), frame[0], frame[1]))
    if G_star <= 0:
        raise DefinitenessError(f"{g.name}: Gram determinant at the base point is {G_star:.3g}")
    return NormalizedField(base=g, frame=frame, base_point=base_point.copy(), gram_at_base=G_star)


def _line_points(p: FloatArray, u: FloatArray, samples: int, span: float) -> FloatArray:
    """Deterministic points p + c u on the complex line, |c| <= span."""
    k = np.arange(samples)
    radius = span * (k + 1) / samples
    angle = 2.0 * np.pi * k * 0.6180339887498949
    c = radius * np.exp(1j * angle)
    return p + c.real[:, None] * u + c.imag[:, None] * jmul(u)


def line_constancy_defect(
    hf: NormalizedField,
    p: NDArray,
    direction: NDArray,
    samples: int = 16,
    span: float = 0.2,
) -> float:
    """Largest spread of h(u,u), h(Ju,Ju), h(u,Ju) along a complex line.

    Args:
        hf: Normalized field
        p: Point of the line
        direction: Real vector spanning the line's complex direction
        samples: Number of points on the line
        span: Largest |c| of the sampled points p + c u
    """
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    ju = jmul(u)
    points = _line_points(np.asarray(p, dtype=float), u, samples, span)
    H = hf.evaluate_h(points)
    values = np.stack(
        [
            np.einsum("nij,i,j->n", H, u, u),
            np.einsum("nij,i,j->n", H, ju, ju),
            np.einsum("nij,i,j->n", H, u, ju),
        ]
    )
    return float((values.max(axis=1) - values.min(axis=1)).max())


def recover_g(hf: NormalizedField, p: NDArray) -> FloatArray:
    """h / H^2 with H the Gram determinant of h in the same frame."""
    h = hf.evaluate_h(p)
    X, Y = hf.frame
    H = float(gram_from_form(h, X, Y))
    if H <= 0:
        raise DefinitenessError("Gram determinant of h is not positive")
    return h / H**2


def derivative_identity_defect(
    g: MetricField,
    p: NDArray,
    step: float = DEFAULT_FD_STEP,
    tol: float = 1e-6,
    require_proportional: bool = True,
) -> float:
    """Check X G = 3 Re L(X) G and X g(X, X) = 2 Re L(X) g(X, X).

    X runs over the constant frame (e0, e2); derivatives along X are central
    differences; each defect is divided by the magnitude of G or g(X, X).

    Raises:
        PreconditionError: If Gamma(v, v) = L(v) v fails beyond tol at p
            (skipped with ``require_proportional=False``)
    """
    p = np.asarray(p, dtype=float)
    fit = extract_L(christoffel(g, p, step), tol)
    if require_proportional and fit.residual > tol:
        raise PreconditionError(
            f"{g.name}: Gamma(v,v) is not proportional to v at p (residual {fit.residual:.3g})"
        )
    X0, Y0 = DEFAULT_FRAME

    def gram_at(x: NDArray) -> float:
        return float(gram_from_form(g.evaluate(x), X0, Y0))

    G = gram_at(p)
    worst = 0.0
    for X in DEFAULT_FRAME:
        re_L = float(np.real(fit(X)))
        dG = (gram_at(p + step * X) - gram_at(p - step * X)) / (2 * step)
        g_xx = g.quadratic(p, X)
        d_gxx = (g.quadratic(p + step * X, X) - g.quadratic(p - step * X, X)) / (2 * step)
        worst = max(
            worst,
            abs(dG - 3.0 * re_L * G) / abs(G),
            abs(d_gxx - 2.0 * re_L * g_xx) / abs(g_xx),
        )
    return float(worst)


@dataclass(frozen=True)
class MomentumFit:
    """Fit of h_x(v, v) as a Hermitian form in (v1, v2, x1 v2 - x2 v1).

    Attributes:
        residual: Relative least-squares residual
        coefficients: 3x3 Hermitian coefficient matrix
        n_samples: Number of (x, v) samples
        seed: Seed of the sample
    """

    residual: float
    coefficients: NDArray[np.complex128]
    n_samples: int
    seed: int


def _momentum_features(w: NDArray) -> FloatArray:
    """Real features of the Hermitian form w* C w, w of shape (n, 3)."""
    columns = [np.abs(w[:, j]) ** 2 for j in range(3)]
    for j, k in ((0, 1), (0, 2), (1, 2)):
        product = w[:, j].conj() * w[:, k]
        columns += [2.0 * product.real, -2.0 * product.imag]
    return np.stack(columns, axis=1)


def _hermitian_from_solution(solution: FloatArray) -> NDArray[np.complex128]:
    C = np.diag(solution[:3]).astype(complex)
    for n, (j, k) in enumerate(((0, 1), (0, 2), (1, 2))):
        value = solution[3 + 2 * n] + 1j * solution[4 + 2 * n]
        C[j, k] = value
        C[k, j] = np.conj(value)
    return C


def momentum_polynomial_fit(
    hf: NormalizedField,
    n_samples: int = 200,
    seed: int = 0,
    region: Region = Region(0.6),
) -> MomentumFit:
    """Least-squares fit of h_x(v, v) by a Hermitian form in (v1, v2, m).

    Raises:
        SamplingError: If the design matrix is rank deficient
    """
    gen = rng(seed)
    x = region.sample(gen, n_samples)
    v = random_unit_vectors(gen, n_samples)
    target = np.einsum("nij,ni,nj->n", hf.evaluate_h(x), v, v)

    z = to_complex(x)
    vc = to_complex(v)
    m = z[:, 0] * vc[:, 1] - z[:, 1] * vc[:, 0]
    design = _momentum_features(np.column_stack([vc, m]))
    solution, _, rank, _ = linalg.lstsq(design, target)
    if rank < MOMENTUM_FEATURES:
        raise SamplingError(
            f"momentum design has rank {rank} < {MOMENTUM_FEATURES}; increase n_samples"
        )
    residual = float(np.linalg.norm(design @ solution - target) / np.linalg.norm(target))
    return MomentumFit(
        residual=residual,
        coefficients=_hermitian_from_solution(solution),
        n_samples=n_samples,
        seed=seed,
    )
