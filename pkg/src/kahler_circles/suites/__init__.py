"""Verification suites: configuration, registry and runner.

Only the models are re-exported here; import the runner and registry from
their modules.
"""

from kahler_circles.suites.models import (
    CaseResult,
    ReportSummary,
    SuiteConfig,
    VerificationReport,
)

__all__ = [
    "CaseResult",
    "ReportSummary",
    "SuiteConfig",
    "VerificationReport",
]
