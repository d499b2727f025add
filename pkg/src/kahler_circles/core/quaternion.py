"""Quaternions and the fixed identification R^4 = C^2 = H.

A point x = (x0, x1, x2, x3) is read as the complex pair z1 = x0 + i x1,
z2 = x2 + i x3 and as the quaternion q = z1 + z2 j. With this choice the
quaternion components of q are exactly (x0, x1, x2, x3), and left
multiplication by i is the standard complex structure J of C^2.
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.typing import NDArray

from kahler_circles.numerics import DIM, FloatArray, evaluation_sample

ComplexArray = NDArray[np.complex128]

# Matrix of the complex structure: J @ x == jmul(x)
J_MATRIX: FloatArray = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)


def hamilton(a: NDArray, b: NDArray) -> FloatArray:
    """Hamilton product of quaternion arrays of shape (..., 4) in basis (1,i,j,k)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


@dataclass(frozen=True)
class Quaternion:
    """A quaternion w + x i + y j + z k."""

    w: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, values: NDArray) -> "Quaternion":
        w, x, y, z = (float(c) for c in np.asarray(values, dtype=float))
        return cls(w, x, y, z)

    def as_array(self) -> FloatArray:
        return np.array([self.w, self.x, self.y, self.z])

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return qmul(self, other)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.as_array() + other.as_array())

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b."""
    return Quaternion.from_array(hamilton(a.as_array(), b.as_array()))


# ---------------------------------------------------------------------------
# Views of a point of R^4
# ---------------------------------------------------------------------------


def to_complex(x: NDArray) -> ComplexArray:
    """(..., 4) real -> (..., 2) complex (z1, z2)."""
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def from_complex(z: NDArray) -> FloatArray:
    """(..., 2) complex -> (..., 4) real, inverse of :func:`to_complex`."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (DIM,))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def jmul(v: NDArray) -> FloatArray:
    """Complex structure: (z1, z2) -> (i z1, i z2), i.e. left multiplication by i."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0], -v[..., 3], v[..., 2]], axis=-1)


# ---------------------------------------------------------------------------
# Linear maps to H and complex functionals
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RealLinearMapToH:
    """R-linear map A: R^4 -> H stored as a 4x4 real matrix.

    Row r holds the coefficients of the r-th quaternion component, so
    A(x) = a(x) + b(x) i + c(x) j + d(x) k with (a, b, c, d) the rows.
    """

    matrix: FloatArray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (DIM, DIM):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls) -> "RealLinearMapToH":
        return cls(np.zeros((DIM, DIM)))

    def apply(self, x: NDArray) -> FloatArray:
        """Quaternion components of A(x) for x of shape (..., 4)."""
        return np.asarray(x, dtype=float) @ self.matrix.T

    def __call__(self, x: NDArray) -> Quaternion:
        return Quaternion.from_array(self.apply(x))

    def quadratic(self, x: NDArray) -> FloatArray:
        """The quadratic map x -> A(x) x (left multiplication)."""
        return hamilton(self.apply(x), x)


@dataclass(frozen=True)
class ComplexFunctional:
    """Complex linear functional L(z1, z2) = c1 z1 + c2 z2."""

    c1: complex
    c2: complex

    @classmethod
    def zero(cls) -> "ComplexFunctional":
        return cls(0j, 0j)

    def __call__(self, x: NDArray) -> Union[complex, ComplexArray]:
        z = to_complex(x)
        value = self.c1 * z[..., 0] + self.c2 * z[..., 1]
        return complex(value) if np.ndim(value) == 0 else value

    def __neg__(self) -> "ComplexFunctional":
        return ComplexFunctional(-self.c1, -self.c2)

    def scale(self, x: NDArray) -> FloatArray:
        """The vector L(x) x, as a real (..., 4) array."""
        z = to_complex(x)
        value = self.c1 * z[..., 0] + self.c2 * z[..., 1]
        return from_complex(value[..., None] * z)

    @property
    def real_coefficients(self) -> ComplexArray:
        """Complex coefficients on the real coordinates: L(x) = sum_m l_m x_m."""
        return np.array([self.c1, 1j * self.c1, self.c2, 1j * self.c2])

    def as_real_map(self) -> RealLinearMapToH:
        """L viewed as a map to H taking values in the subalgebra span(1, i)."""
        row = self.real_coefficients
        return RealLinearMapToH(np.vstack([row.real, row.imag, np.zeros(DIM), np.zeros(DIM)]))

    def norm(self) -> float:
        return float(np.hypot(abs(self.c1), abs(self.c2)))


@dataclass(frozen=True, eq=False)
class QuaternionFunctionals:
    """Components of A(x) = a(x) + b(x) i + c(x) j + d(x) k.

    Attributes:
        a, b, c, d: Real functionals as coefficient rows of shape (4,)
        alpha: a + b i as complex coefficients on the real coordinates
        beta: d + c i as complex coefficients on the real coordinates
    """

    a: FloatArray
    b: FloatArray
    c: FloatArray
    d: FloatArray

    @property
    def alpha(self) -> ComplexArray:
        return self.a + 1j * self.b

    @property
    def beta(self) -> ComplexArray:
        return self.d + 1j * self.c

    def beta_norm(self) -> float:
        """Operator norm of beta on the Euclidean unit sphere."""
        return float(np.linalg.norm(np.vstack([self.d, self.c]), 2))


def decompose_A(A: RealLinearMapToH) -> QuaternionFunctionals:
    """Split A into its real component functionals and alpha, beta.

    A(x) = alpha(x) + k beta(x) with alpha = a + b i and beta = d + c i.
    """
    a, b, c, d = (A.matrix[r].copy() for r in range(DIM))
    return QuaternionFunctionals(a=a, b=b, c=c, d=d)


def quadratic_holomorphy_defect(
    Q: Callable[[FloatArray], FloatArray],
    step: float = 1.0,
) -> float:
    """Holomorphy defect of a real quadratic map Q: R^4 -> R^4.

    Sum of two maxima over the evaluation sample: the homogeneity defect
    |Q(Jx) + Q(x)| and the Cauchy-Riemann defect |dQ_x(Jh) - J dQ_x(h)| over
    basis directions h, with dQ by central differences. Central differences
    of a quadratic map are exact for any step; the step only sets the
    rounding floor.
    """
    xs = evaluation_sample()
    homogeneity = np.linalg.norm(Q(jmul(xs)) + Q(xs), axis=-1).max()

    cr = 0.0
    for h in np.eye(DIM):
        jh = jmul(h)
        d_h = (Q(xs + step * h) - Q(xs - step * h)) / (2.0 * step)
        d_jh = (Q(xs + step * jh) - Q(xs - step * jh)) / (2.0 * step)
        cr = max(cr, float(np.linalg.norm(d_jh - jmul(d_h), axis=-1).max()))
    return float(homogeneity) + cr


def holomorphy_defect_quadratic(A: RealLinearMapToH, step: float = 1.0) -> float:
    """Holomorphy defect of x -> A(x) x; zero iff the map is holomorphic."""
    return quadratic_holomorphy_defect(A.quadratic, step=step)


@dataclass(frozen=True)
class ComplexLinear:
    """classify_A outcome: A is the complex linear functional L."""

    L: ComplexFunctional
    defect: float


@dataclass(frozen=True)
class NotHolomorphic:
    """classify_A outcome: x -> A(x) x is not holomorphic."""

    defect: float


Classification = Union[ComplexLinear, NotHolomorphic]


def classify_A(A: RealLinearMapToH, tol: float = 1e-9) -> Classification:
    """Decide whether A is a complex linear functional.

    Args:
        A: The map to classify
        tol: Threshold on the holomorphy defect and on the beta coefficients

    Returns:
        ComplexLinear with c1 = alpha(e0), c2 = alpha(e2), or NotHolomorphic
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    defect = holomorphy_defect_quadratic(A)
    if defect > tol:
        return NotHolomorphic(defect=defect)
    parts = decompose_A(A)
    if np.abs(parts.beta).max() > tol:
        return NotHolomorphic(defect=defect)
    alpha = parts.alpha
    return ComplexLinear(L=ComplexFunctional(complex(alpha[0]), complex(alpha[2])), defect=defect)
