"""Pytest fixtures for kahler-circles tests."""

import os
from pathlib import Path

import numpy as np
import pytest

from kahler_circles import config
from kahler_circles.geometry.metrics import MetricField, euclidean, fubini_metric
from kahler_circles.suites.models import CaseResult, ReportSummary, VerificationReport


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Reset the cached global settings and ignore KAHLER_CIRCLES_* variables."""
    for name in [key for key in os.environ if key.startswith("KAHLER_CIRCLES_")]:
        monkeypatch.delenv(name)
    monkeypatch.setattr(config, "_settings", None)


@pytest.fixture
def fubini_study() -> MetricField:
    """Fubini metric with alpha = 1."""
    return fubini_metric(1.0)


@pytest.fixture
def hyperbolic() -> MetricField:
    """Fubini metric with alpha = -1 (the ball model)."""
    return fubini_metric(-1.0)


@pytest.fixture
def flat() -> MetricField:
    return euclidean()


@pytest.fixture
def gen() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def base_point() -> np.ndarray:
    """A generic point well inside every sampling region."""
    return np.array([0.12, -0.07, 0.05, 0.09])


@pytest.fixture
def circle_sample() -> dict:
    """60 points on a circle of radius 0.8 in a tilted plane of R^4."""
    u1 = np.array([1.0, 1.0, 0.0, 1.0]) / np.sqrt(3.0)
    u2 = np.array([1.0, -1.0, 2.0, 0.0]) / np.sqrt(6.0)
    center = np.array([0.3, -0.2, 1.0, 0.5])
    radius = 0.8
    theta = np.linspace(0.0, 2.0, 60)
    points = center + radius * (np.cos(theta)[:, None] * u1 + np.sin(theta)[:, None] * u2)
    return {"points": points, "center": center, "radius": radius}


@pytest.fixture
def sample_report() -> VerificationReport:
    """A small report with one passing and one failing case."""
    cases = [
        CaseResult.judge("point-0000", {"defect": 1e-9}, {"defect": 1e-6}, {"metric": "fubini:1"}),
        CaseResult.judge("point-0001", {"defect": float("nan")}, {"defect": 1e-6}, {"metric": "fubini:1"}),
    ]
    return VerificationReport(
        suite="kahler",
        config={"suite": "kahler", "metric": "fubini:1", "samples": 2},
        cases=cases,
        summary=ReportSummary.from_cases(cases),
        version="0.1.0",
        wall_time=0.25,
    )


@pytest.fixture
def tmp_report_path(tmp_path: Path) -> Path:
    """Get a temporary report path in a directory that does not exist yet."""
    return tmp_path / "reports" / "report.json"
