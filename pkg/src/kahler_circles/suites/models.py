"""Data models for suite configuration and verification reports."""

import math
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from kahler_circles.circles.families import get_family
from kahler_circles.geometry import get_metric

REPORT_SCHEMA = "1"

EXTERIOR_FAMILY = "exterior-ball"


def _nulls_as_nan(value: Any) -> Any:
    """JSON reports store non-finite residuals as null."""
    if isinstance(value, dict):
        return {key: math.nan if item is None else item for key, item in value.items()}
    return value


class SuiteConfig(BaseModel):
    """Validated configuration of one suite run.

    Unset numeric fields fall back to the suite defaults and then to the
    environment-driven Settings.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    suite: str
    metric: Optional[str] = None
    family: Optional[str] = None
    samples: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=7, ge=0, lt=2**64)
    tol: Optional[float] = Field(default=None, gt=0)
    step: Optional[float] = Field(default=None, gt=0)
    steps: Optional[int] = Field(default=None, ge=16)
    time: Optional[float] = Field(default=None, gt=0)
    out: Optional[Path] = None
    format: Literal["json", "csv"] = "json"

    @field_validator("suite")
    @classmethod
    def known_suite(cls, value: str) -> str:
        # the registry imports the report models
        from kahler_circles.suites.registry import get_suite

        get_suite(value)
        return value

    @field_validator("metric")
    @classmethod
    def known_metric(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            get_metric(value)
        return value

    @field_validator("family")
    @classmethod
    def known_family(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value != EXTERIOR_FAMILY:
            get_family(value)
        return value

    @field_validator("tol", "step", "time")
    @classmethod
    def finite(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    def echo(self) -> dict[str, Any]:
        """JSON-ready copy of the configuration."""
        data = self.model_dump()
        data["out"] = str(self.out) if self.out is not None else None
        return data


class CaseResult(BaseModel):
    """Outcome of one verification case.

    A case passes iff it raised no error and every named residual is finite
    and within its tolerance.
    """

    id: str
    params: dict[str, Any] = Field(default_factory=dict)
    status: Literal["pass", "fail"]
    residuals: dict[str, float] = Field(default_factory=dict)
    tolerances: dict[str, float] = Field(default_factory=dict)
    error: Optional[str] = None

    @field_validator("residuals", mode="before")
    @classmethod
    def nulls_as_nan(cls, value: Any) -> Any:
        return _nulls_as_nan(value)

    @classmethod
    def judge(
        cls,
        case_id: str,
        residuals: dict[str, float],
        tolerances: dict[str, float],
        params: Optional[dict[str, Any]] = None,
    ) -> "CaseResult":
        passed = all(
            math.isfinite(residuals[name]) and residuals[name] <= tolerances[name]
            for name in tolerances
        )
        return cls(
            id=case_id,
            params=params or {},
            status="pass" if passed else "fail",
            residuals={name: float(value) for name, value in residuals.items()},
            tolerances=dict(tolerances),
        )

    @classmethod
    def failed(cls, case_id: str, error: str, params: Optional[dict[str, Any]] = None) -> "CaseResult":
        return cls(id=case_id, params=params or {}, status="fail", error=error)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class ReportSummary(BaseModel):
    """Case counts and the largest value of every residual."""

    total: int
    passed: int
    failed: int
    max_residuals: dict[str, float] = Field(default_factory=dict)

    @field_validator("max_residuals", mode="before")
    @classmethod
    def nulls_as_nan(cls, value: Any) -> Any:
        return _nulls_as_nan(value)

    @classmethod
    def from_cases(cls, cases: list[CaseResult]) -> "ReportSummary":
        maxima: dict[str, float] = {}
        for case in cases:
            for name, value in case.residuals.items():
                current = maxima.get(name)
                # a non-finite value sticks once recorded
                if current is None or (math.isfinite(current) and not value <= current):
                    maxima[name] = value
        passed = sum(case.passed for case in cases)
        return cls(total=len(cases), passed=passed, failed=len(cases) - passed, max_residuals=maxima)


class VerificationReport(BaseModel):
    """Machine-readable result of a suite run."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=REPORT_SCHEMA, alias="schema")
    suite: str
    config: dict[str, Any]
    cases: list[CaseResult]
    summary: ReportSummary
    version: str
    wall_time: float

    @property
    def passed(self) -> bool:
        return self.summary.failed == 0

    def to_payload(self) -> dict[str, Any]:
        return self.model_dump(by_alias=True)
