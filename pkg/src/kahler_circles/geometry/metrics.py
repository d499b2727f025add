"""Metric fields on domains of C^2 = R^4.

Metrics are stored as real 4x4 symmetric forms so that non-Hermitian fields
can be expressed. Every field evaluates on arrays of points of shape
(..., 4). The Fubini family and the ball metric carry exact first
derivatives; other fields are differentiated by central differences.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from numpy.typing import NDArray

from kahler_circles.core.quaternion import J_MATRIX, to_complex
from kahler_circles.errors import DependenceError, DomainError, SingularLocusError
from kahler_circles.numerics import DIM, FloatArray, partial_derivatives

FormFn = Callable[[FloatArray], FloatArray]
MaskFn = Callable[[FloatArray], NDArray[np.bool_]]

DEFAULT_FD_STEP = 1e-4

# Margin kept from the unit sphere by the exterior branch of the ball metric
EXTERIOR_MARGIN = 1e-6

# Complex directions of the real coordinate vectors e0..e3
_COORD_DIRECTIONS = np.array([[1.0, 0.0], [1.0j, 0.0], [0.0, 1.0], [0.0, 1.0j]])

_ROTATION = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True, eq=False)
class MetricField:
    """A field of real symmetric bilinear forms on a domain of R^4.

    Attributes:
        name: Identifier, e.g. "fubini:1"
        form: Vectorized map from points (..., 4) to forms (..., 4, 4)
        domain: Vectorized domain predicate
        constraint: Human-readable statement of the domain condition
        analytic_params: Parameters of analytic families (e.g. alpha)
        positive_definite_claimed: Whether the form is positive on the domain
        form_derivative: Optional exact derivative, (..., 4) -> (..., 4, 4, 4)
            with index [..., m, i, j] the derivative of g_ij along x_m
        singular: Optional predicate of the singular locus
        singular_constraint: Statement of the singular locus
    """

    name: str
    form: FormFn
    domain: MaskFn
    constraint: str = "any point"
    analytic_params: dict[str, float] = field(default_factory=dict)
    positive_definite_claimed: bool = True
    form_derivative: Optional[FormFn] = None
    singular: Optional[MaskFn] = None
    singular_constraint: str = ""

    def in_domain(self, p: NDArray) -> Union[bool, NDArray[np.bool_]]:
        """Vectorized membership test; singular points are outside."""
        p = np.asarray(p, dtype=float)
        ok = np.asarray(self.domain(p)) & np.isfinite(p).all(axis=-1)
        if self.singular is not None:
            ok = ok & ~np.asarray(self.singular(p))
        return bool(ok) if ok.ndim == 0 else ok

    def check_domain(self, p: NDArray) -> None:
        """Raise if any of the points lies outside the domain."""
        p = np.asarray(p, dtype=float)
        if self.singular is not None and np.any(self.singular(p)):
            raise SingularLocusError(
                f"{self.name}: point on the singular locus ({self.singular_constraint})"
            )
        if not np.all(self.domain(p)) or not np.all(np.isfinite(p)):
            raise DomainError(f"{self.name}: point outside the domain, requires {self.constraint}")

    def evaluate(self, p: NDArray) -> FloatArray:
        """The form g_p, shape (..., 4, 4)."""
        p = np.asarray(p, dtype=float)
        self.check_domain(p)
        return self.form(p)

    def derivative(self, p: NDArray, step: float = DEFAULT_FD_STEP) -> FloatArray:
        """First derivatives of the form, shape (..., 4, 4, 4), index [..., m, i, j]."""
        p = np.asarray(p, dtype=float)
        self.check_domain(p)
        if self.form_derivative is not None:
            return self.form_derivative(p)
        offsets = step * np.vstack([np.eye(DIM), -np.eye(DIM)])
        self.check_domain(p[..., None, :] + offsets)
        return partial_derivatives(self.form, p, step)

    def bilinear(self, p: NDArray, v: NDArray, w: NDArray) -> Union[float, FloatArray]:
        """g_p(v, w), vectorized over matching leading dimensions."""
        value = np.einsum("...ij,...i,...j->...", self.evaluate(p), v, w)
        return float(value) if np.ndim(value) == 0 else value

    def quadratic(self, p: NDArray, v: NDArray) -> Union[float, FloatArray]:
        return self.bilinear(p, v, v)

    def without_exact_derivative(self) -> "MetricField":
        """Copy of the field that is differentiated numerically."""
        return MetricField(
            name=self.name,
            form=self.form,
            domain=self.domain,
            constraint=self.constraint,
            analytic_params=dict(self.analytic_params),
            positive_definite_claimed=self.positive_definite_claimed,
            singular=self.singular,
            singular_constraint=self.singular_constraint,
        )


# ---------------------------------------------------------------------------
# Complex <-> real presentations of Hermitian forms
# ---------------------------------------------------------------------------


def realify(H: NDArray) -> FloatArray:
    """Real 4x4 form of a 2x2 complex Hermitian form, vectorized over leading axes.

    The quadratic form of the result at x is v* H v with v = to_complex(x).
    """
    H = np.asarray(H, dtype=complex)
    blocks = np.einsum("...jk,ab->...jakb", H.real, np.eye(2)) + np.einsum(
        "...jk,ab->...jakb", H.imag, _ROTATION
    )
    return blocks.reshape(H.shape[:-2] + (DIM, DIM))


# ---------------------------------------------------------------------------
# Analytic fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FubiniParams:
    """Signature parameter of the pseudo-Hermitian form |Z0|^2 + alpha*sum |Zj|^2."""

    alpha: float


def _identity_form(p: FloatArray) -> FloatArray:
    return np.broadcast_to(np.eye(DIM), p.shape[:-1] + (DIM, DIM)).copy()


def _zero_derivative(p: FloatArray) -> FloatArray:
    return np.zeros(p.shape[:-1] + (DIM, DIM, DIM))


def everywhere(p: FloatArray) -> NDArray[np.bool_]:
    return np.ones(p.shape[:-1], dtype=bool)


def _squared_norm(p: FloatArray) -> FloatArray:
    return np.sum(np.asarray(p, dtype=float) ** 2, axis=-1)


def _outer_derivatives(z: NDArray) -> NDArray:
    """Derivatives of z z* along e0..e3, shape (..., 4, 2, 2)."""
    d = _COORD_DIRECTIONS
    return np.einsum("mj,...k->...mjk", d, z.conj()) + np.einsum("...j,mk->...mjk", z, d.conj())


def euclidean() -> MetricField:
    """The flat metric; its form is the identity everywhere."""
    return MetricField(
        name="euclidean",
        form=_identity_form,
        domain=everywhere,
        analytic_params={"alpha": 0.0},
        form_derivative=_zero_derivative,
    )


def fubini_metric(params: Union[FubiniParams, float]) -> MetricField:
    """Affine-chart metric of the Fubini space with signature parameter alpha.

    With X = (1, z), V = (0, v) and <A, B> = A0 B0* + alpha sum Aj Bj*,
    |v|^2 = (<V,V><X,X> - |<X,V>|^2) / <X,X>^2, negated for alpha < 0.
    As a Hermitian matrix this is |alpha| (D I - alpha z z*) / D^2 with
    D = 1 + alpha |z|^2. alpha = 0 gives the Euclidean metric.
    """
    alpha = float(params.alpha if isinstance(params, FubiniParams) else params)
    name = f"fubini:{alpha:g}"
    if alpha == 0.0:
        flat = euclidean()
        return MetricField(
            name=name,
            form=flat.form,
            domain=flat.domain,
            analytic_params={"alpha": 0.0},
            form_derivative=flat.form_derivative,
        )

    scale = abs(alpha)
    eye2 = np.eye(2)

    def numerator(z: NDArray, D: NDArray) -> NDArray:
        return D[..., None, None] * eye2 - alpha * np.einsum("...j,...k->...jk", z, z.conj())

    def form(p: FloatArray) -> FloatArray:
        z = to_complex(p)
        D = 1.0 + alpha * _squared_norm(p)
        return realify(scale * numerator(z, D) / D[..., None, None] ** 2)

    def form_derivative(p: FloatArray) -> FloatArray:
        z = to_complex(p)
        D = 1.0 + alpha * _squared_norm(p)
        N = numerator(z, D)
        dD = 2.0 * alpha * np.einsum("...j,mj->...m", z.conj(), _COORD_DIRECTIONS).real
        dN = dD[..., None, None] * eye2 - alpha * _outer_derivatives(z)
        D2 = D[..., None, None, None] ** 2
        dH = scale * (dN / D2 - 2.0 * N[..., None, :, :] * dD[..., None, None] / (D2 * D[..., None, None, None]))
        return realify(dH)

    if alpha > 0:
        domain: MaskFn = everywhere
        constraint = "any point"
    else:
        def domain(p: FloatArray) -> NDArray[np.bool_]:
            return 1.0 + alpha * _squared_norm(p) > 0.0

        constraint = "1 + alpha*|z|^2 > 0"

    return MetricField(
        name=name,
        form=form,
        domain=domain,
        constraint=constraint,
        analytic_params={"alpha": alpha},
        form_derivative=form_derivative,
    )


def ball_metric(region: str = "full") -> MetricField:
    """Metric of the complex hyperbolic ball and its exterior continuation.

    ds^2 = (|dz|^2 (1 - |z|^2) + |z* dz|^2) / (1 - |z|^2)^2.

    Args:
        region: "full" (everything off the unit sphere), "interior" (the
            positive-definite ball) or "exterior" (|z|^2 > 1 + 1e-6)
    """
    eye2 = np.eye(2)

    def numerator(z: NDArray, E: NDArray) -> NDArray:
        return E[..., None, None] * eye2 + np.einsum("...j,...k->...jk", z, z.conj())

    def form(p: FloatArray) -> FloatArray:
        z = to_complex(p)
        E = 1.0 - _squared_norm(p)
        return realify(numerator(z, E) / E[..., None, None] ** 2)

    def form_derivative(p: FloatArray) -> FloatArray:
        z = to_complex(p)
        E = 1.0 - _squared_norm(p)
        N = numerator(z, E)
        dE = -2.0 * np.einsum("...j,mj->...m", z.conj(), _COORD_DIRECTIONS).real
        dN = dE[..., None, None] * eye2 + _outer_derivatives(z)
        E2 = E[..., None, None, None] ** 2
        dH = dN / E2 - 2.0 * N[..., None, :, :] * dE[..., None, None] / (E2 * E[..., None, None, None])
        return realify(dH)

    def on_sphere(p: FloatArray) -> NDArray[np.bool_]:
        return np.abs(1.0 - _squared_norm(p)) < 1e-12

    if region == "full":
        domain: MaskFn = everywhere
        constraint = "|z|^2 != 1"
        name = "ball"
        positive = False
    elif region == "interior":
        def domain(p: FloatArray) -> NDArray[np.bool_]:
            return _squared_norm(p) < 1.0

        constraint = "|z|^2 < 1"
        name = "ball"
        positive = True
    elif region == "exterior":
        def domain(p: FloatArray) -> NDArray[np.bool_]:
            return _squared_norm(p) > 1.0 + EXTERIOR_MARGIN

        constraint = f"|z|^2 > 1 + {EXTERIOR_MARGIN:g}"
        name = "ball-exterior"
        positive = False
    else:
        raise ValueError(f"unknown ball region: {region!r}")

    return MetricField(
        name=name,
        form=form,
        domain=domain,
        constraint=constraint,
        analytic_params={"alpha": -1.0},
        positive_definite_claimed=positive,
        form_derivative=form_derivative,
        singular=on_sphere,
        singular_constraint="|z|^2 = 1",
    )


# ---------------------------------------------------------------------------
# Defects and Hermitian products
# ---------------------------------------------------------------------------


def hermitian_defect(g: MetricField, p: NDArray) -> float:
    """max over basis pairs of |g(Jx, Jy) - g(x, y)| at p."""
    G = g.evaluate(p)
    return float(np.abs(J_MATRIX.T @ G @ J_MATRIX - G).max())


def kahler_defect(g: MetricField, p: NDArray, step: float = DEFAULT_FD_STEP) -> float:
    """Largest component of d(omega) at p, omega(x, y) = g(Jx, y).

    All derivatives are central differences with the given step, also for
    fields that carry exact derivatives.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    p = np.asarray(p, dtype=float)
    g.check_domain(p)
    offsets = step * np.vstack([np.eye(DIM), -np.eye(DIM)])
    g.check_domain(p + offsets)

    def omega(x: FloatArray) -> FloatArray:
        return np.einsum("ia,...ib->...ab", J_MATRIX, g.form(x))

    d = partial_derivatives(omega, p, step)
    d_omega = d + np.einsum("bca->abc", d) + np.einsum("cab->abc", d)
    return float(np.abs(d_omega).max())


def inner_from_form(G: NDArray, X: NDArray, Y: NDArray) -> NDArray[np.complex128]:
    """<X, Y> = G(X, Y) - i G(JX, Y) for forms of shape (..., 4, 4)."""
    JX = X @ J_MATRIX.T
    real = np.einsum("...ij,...i,...j->...", G, X, Y)
    imag = np.einsum("...ij,...i,...j->...", G, JX, Y)
    return real - 1j * imag


def hermitian_inner(g: MetricField, p: NDArray, X: NDArray, Y: NDArray) -> complex:
    """The Hermitian product <X, Y> = g(X, Y) - i omega(X, Y) at p."""
    value = inner_from_form(g.evaluate(p), np.asarray(X, dtype=float), np.asarray(Y, dtype=float))
    return complex(value)


def gram_from_form(G: NDArray, X: NDArray, Y: NDArray) -> FloatArray:
    """Vectorized Gram determinant <X,X><Y,Y> - <X,Y><Y,X> (real part)."""
    xx = inner_from_form(G, X, X)
    yy = inner_from_form(G, Y, Y)
    xy = inner_from_form(G, X, Y)
    yx = inner_from_form(G, Y, X)
    return (xx * yy - xy * yx).real


def complex_wedge(X: NDArray, Y: NDArray) -> complex:
    """The complex determinant x1 y2 - x2 y1 of two vectors of C^2."""
    x = to_complex(X)
    y = to_complex(Y)
    return complex(x[0] * y[1] - x[1] * y[0])


def gram_G(g: MetricField, p: NDArray, X: NDArray, Y: NDArray) -> float:
    """Gram determinant of the complex frame (X, Y) for g at p."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if abs(complex_wedge(X, Y)) < 1e-12:
        raise DependenceError("frame vectors are complex-linearly dependent")
    return float(gram_from_form(g.evaluate(p), X, Y))
