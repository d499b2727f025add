"""CSV writer for trajectories and case tables."""

import csv
import io
from typing import Any, Iterable

from kahler_circles.formats.base import ReportWriter
from kahler_circles.geometry.connection import Trajectory
from kahler_circles.suites.models import VerificationReport

TRAJECTORY_HEADER = ("t", "x0", "x1", "x2", "x3", "v0", "v1", "v2", "v3")


def format_float(value: Any) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(value), ".17g")


def _render(rows: Iterable[Iterable[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


class CSVWriter(ReportWriter):
    """Writer for CSV (.csv) output.

    Reports become one row per case: id, status, every residual that occurs
    in the report (sorted by name, empty when a case lacks it) and the error.
    """

    @property
    def supported_extensions(self) -> tuple[str, ...]:
        return (".csv",)

    def render_report(self, report: VerificationReport) -> str:
        names = sorted({name for case in report.cases for name in case.residuals})
        rows: list[list[str]] = [["id", "status", *names, "error"]]
        for case in report.cases:
            values = [
                format_float(case.residuals[name]) if name in case.residuals else ""
                for name in names
            ]
            rows.append([case.id, case.status, *values, case.error or ""])
        return _render(rows)

    def render_trajectory(self, traj: Trajectory) -> str:
        rows: list[list[str]] = [list(TRAJECTORY_HEADER)]
        for t, x, v in zip(traj.times, traj.points, traj.velocities):
            rows.append([format_float(t), *map(format_float, x), *map(format_float, v)])
        return _render(rows)
