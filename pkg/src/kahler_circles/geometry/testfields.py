"""Built-in counterexample fields, addressable as "testfield:<id>"."""

from typing import Callable

import numpy as np

from kahler_circles.errors import UnknownIdentifierError
from kahler_circles.geometry.metrics import MetricField, everywhere, fubini_metric
from kahler_circles.numerics import DIM, FloatArray


def _constant(matrix: FloatArray, name: str) -> MetricField:
    def form(p: FloatArray) -> FloatArray:
        return np.broadcast_to(matrix, p.shape[:-1] + (DIM, DIM)).copy()

    def form_derivative(p: FloatArray) -> FloatArray:
        return np.zeros(p.shape[:-1] + (DIM, DIM, DIM))

    return MetricField(name=name, form=form, domain=everywhere, form_derivative=form_derivative)


def nonhermitian() -> MetricField:
    """g = diag(2, 1, 1, 1): flat, not invariant under J."""
    return _constant(np.diag([2.0, 1.0, 1.0, 1.0]), "testfield:nonhermitian")


def nonkahler() -> MetricField:
    """g = exp(x2) I: Hermitian, but d(omega) != 0."""

    def form(p: FloatArray) -> FloatArray:
        return np.exp(p[..., 2])[..., None, None] * np.eye(DIM)

    def form_derivative(p: FloatArray) -> FloatArray:
        out = np.zeros(p.shape[:-1] + (DIM, DIM, DIM))
        out[..., 2, :, :] = form(p)
        return out

    return MetricField(
        name="testfield:nonkahler", form=form, domain=everywhere, form_derivative=form_derivative
    )


def diagonal() -> MetricField:
    """g = diag(exp(x0), 1, 1, 1): Gamma(v, v) is not proportional to v."""

    def form(p: FloatArray) -> FloatArray:
        out = np.broadcast_to(np.eye(DIM), p.shape[:-1] + (DIM, DIM)).copy()
        out[..., 0, 0] = np.exp(p[..., 0])
        return out

    def form_derivative(p: FloatArray) -> FloatArray:
        out = np.zeros(p.shape[:-1] + (DIM, DIM, DIM))
        out[..., 0, 0, 0] = np.exp(p[..., 0])
        return out

    return MetricField(
        name="testfield:diagonal", form=form, domain=everywhere, form_derivative=form_derivative
    )


def _scaled_fubini(
    name: str,
    factor: Callable[[FloatArray], FloatArray],
    factor_dx0: Callable[[FloatArray], FloatArray],
) -> MetricField:
    """fubini(1) multiplied by a positive function of x0."""
    base = fubini_metric(1.0)
    base_derivative = base.form_derivative
    assert base_derivative is not None

    def form(p: FloatArray) -> FloatArray:
        return factor(p)[..., None, None] * base.form(p)

    def form_derivative(p: FloatArray) -> FloatArray:
        out = factor(p)[..., None, None, None] * base_derivative(p)
        out[..., 0, :, :] += factor_dx0(p)[..., None, None] * base.form(p)
        return out

    return MetricField(name=name, form=form, domain=everywhere, form_derivative=form_derivative)


def perturbed() -> MetricField:
    """fubini(1) scaled by 1 + 0.1 x0^2: Hermitian, curvature not constant."""
    return _scaled_fubini(
        "testfield:perturbed",
        lambda p: 1.0 + 0.1 * p[..., 0] ** 2,
        lambda p: 0.2 * p[..., 0],
    )


def conformal() -> MetricField:
    """fubini(1) scaled by exp(2 x0): Hermitian, complex lines not totally geodesic."""
    return _scaled_fubini(
        "testfield:conformal",
        lambda p: np.exp(2.0 * p[..., 0]),
        lambda p: 2.0 * np.exp(2.0 * p[..., 0]),
    )


TESTFIELDS: dict[str, Callable[[], MetricField]] = {
    "nonhermitian": nonhermitian,
    "nonkahler": nonkahler,
    "diagonal": diagonal,
    "perturbed": perturbed,
    "conformal": conformal,
}


def get_testfield(field_id: str) -> MetricField:
    if field_id not in TESTFIELDS:
        raise UnknownIdentifierError(
            f"Unknown test field: {field_id}. Available: {', '.join(TESTFIELDS)}"
        )
    return TESTFIELDS[field_id]()
