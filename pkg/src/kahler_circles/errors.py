"""Exception hierarchy for kahler-circles.

Every error raised by the library derives from :class:`KahlerCirclesError`,
so suites can record a failing case without swallowing programming errors.
"""

from typing import Any, Optional


class KahlerCirclesError(Exception):
    """Base class for all library errors."""

    pass


class DomainError(KahlerCirclesError):
    """A point (or a finite-difference stencil point) lies outside a domain."""

    pass


class SingularLocusError(DomainError):
    """A point lies on (or too close to) a singular locus."""

    pass


class DomainExitError(DomainError):
    """An integrated curve left the domain before the requested time.

    Attributes:
        partial: The trajectory computed up to the last accepted step
    """

    def __init__(self, message: str, partial: Optional[Any] = None) -> None:
        super().__init__(message)
        self.partial = partial


class DegenerateMetricError(KahlerCirclesError):
    """The bilinear form (or a 2-plane restriction) is degenerate."""

    pass


class DefinitenessError(KahlerCirclesError):
    """A Gram determinant that must be positive is not."""

    pass


class DependenceError(KahlerCirclesError):
    """Vectors that must be complex-linearly independent are not."""

    pass


class FitError(KahlerCirclesError):
    """A sample cannot be fitted (too few points or rank deficient)."""

    pass


class SamplingError(KahlerCirclesError):
    """A least-squares design built from samples is rank deficient."""

    pass


class PreconditionError(KahlerCirclesError):
    """A documented precondition of an operation does not hold."""

    pass


class UnknownIdentifierError(KahlerCirclesError, ValueError):
    """A metric, family or suite identifier is not recognised."""

    pass
