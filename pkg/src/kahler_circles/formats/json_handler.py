"""JSON writer and the JSON forms of library results.

Non-finite floats are written as null, complex numbers as [re, im] pairs.
Key order follows the models, so output is byte-for-byte reproducible.
"""

import json
import math
from pathlib import Path
from typing import Any, Optional

import numpy as np

from kahler_circles.circles.fitting import CircleFit
from kahler_circles.circles.projective import ProjectiveMap
from kahler_circles.formats.base import ReportWriter
from kahler_circles.geometry.beltrami import MomentumFit
from kahler_circles.geometry.connection import Trajectory
from kahler_circles.geometry.curvature import CurvatureScan
from kahler_circles.suites.models import REPORT_SCHEMA, VerificationReport


def _float(value: Any) -> Optional[float]:
    value = float(value)
    return value if math.isfinite(value) else None


def to_jsonable(value: Any) -> Any:
    """Convert numpy values, complex numbers and paths to plain JSON data."""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_float(value.real), _float(value.imag)]
    if isinstance(value, (float, np.floating)):
        return _float(value)
    if isinstance(value, Path):
        return str(value)
    return value


def dumps(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2, allow_nan=False) + "\n"


def circle_fit_payload(fit: CircleFit) -> dict[str, Any]:
    return {
        "kind": fit.kind,
        "center": fit.center,
        "radius": fit.radius,
        "plane": fit.plane,
        "rms_residual": fit.rms_residual,
        "relative_residual": fit.relative_residual,
    }


def projective_map_payload(F: ProjectiveMap) -> list[Any]:
    """The 9 canonically scaled entries, row-major, as [re, im] pairs."""
    return to_jsonable(F.M.ravel())


def scan_payload(scan: CurvatureScan) -> dict[str, Any]:
    return {
        "metric": scan.metric,
        "n": scan.n,
        "mean": scan.mean,
        "std": scan.std,
        "max_dev": scan.max_dev,
        "seed": scan.seed,
    }


def momentum_payload(fit: MomentumFit) -> dict[str, Any]:
    return {
        "residual": fit.residual,
        "coefficients": fit.coefficients,
        "n_samples": fit.n_samples,
        "seed": fit.seed,
    }


def trajectory_payload(traj: Trajectory) -> dict[str, Any]:
    return {
        "metric": traj.metric,
        "complete": traj.complete,
        "times": traj.times,
        "points": traj.points,
        "velocities": traj.velocities,
    }


class JSONWriter(ReportWriter):
    """Writer for JSON (.json) output."""

    @property
    def supported_extensions(self) -> tuple[str, ...]:
        return (".json",)

    def render_report(self, report: VerificationReport) -> str:
        return dumps(report.to_payload())

    def render_trajectory(self, traj: Trajectory) -> str:
        return dumps(trajectory_payload(traj))


def load_report(path: Path) -> VerificationReport:
    """Read a JSON report.

    Raises:
        ValueError: If the file is not a report of the supported schema
    """
    data = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(data, dict) or data.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"{path}: not a schema {REPORT_SCHEMA} verification report")
    return VerificationReport.model_validate(data)
