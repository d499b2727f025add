"""Metric fields, connections, curvature and the Gram-determinant machinery."""

import math

from kahler_circles.errors import UnknownIdentifierError
from kahler_circles.geometry.metrics import MetricField, ball_metric, euclidean, fubini_metric
from kahler_circles.geometry.testfields import TESTFIELDS, get_testfield

__all__ = [
    "MetricField",
    "METRIC_IDS",
    "get_metric",
]

# Documented identifier forms; "fubini:<alpha>" takes any real alpha
METRIC_IDS = ("euclidean", "fubini:<alpha>", "ball", "ball-exterior") + tuple(
    f"testfield:{name}" for name in TESTFIELDS
)


def get_metric(identifier: str) -> MetricField:
    """Build the metric field named by a CLI identifier."""
    ident = identifier.strip().lower()
    if ident == "euclidean":
        return euclidean()
    if ident == "ball":
        return ball_metric("interior")
    if ident == "ball-exterior":
        return ball_metric("exterior")
    if ident.startswith("fubini:"):
        try:
            alpha = float(ident.split(":", 1)[1])
        except ValueError:
            raise UnknownIdentifierError(f"Invalid Fubini parameter in {identifier!r}") from None
        if not math.isfinite(alpha):
            raise UnknownIdentifierError(f"Invalid Fubini parameter in {identifier!r}")
        return fubini_metric(alpha)
    if ident.startswith("testfield:"):
        return get_testfield(ident.split(":", 1)[1])
    raise UnknownIdentifierError(
        f"Unknown metric: {identifier}. Supported metrics: {', '.join(METRIC_IDS)}"
    )
