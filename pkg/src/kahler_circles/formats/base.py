"""Abstract base class for report and trajectory writers."""

from abc import ABC, abstractmethod
from pathlib import Path

from kahler_circles.geometry.connection import Trajectory
from kahler_circles.suites.models import VerificationReport


class ReportWriter(ABC):
    """Abstract base class for output formats.

    Each writer renders verification reports and sampled trajectories to
    text. Rendering is deterministic: the same input gives the same bytes.
    """

    @property
    @abstractmethod
    def supported_extensions(self) -> tuple[str, ...]:
        """Return tuple of supported file extensions (e.g., ('.json',))."""
        ...

    @abstractmethod
    def render_report(self, report: VerificationReport) -> str:
        """Render a verification report.

        Args:
            report: The report to render

        Returns:
            The serialized report
        """
        ...

    @abstractmethod
    def render_trajectory(self, traj: Trajectory) -> str:
        """Render the samples of a trajectory."""
        ...

    def write_report(self, report: VerificationReport, path: Path) -> None:
        """Write a rendered report, creating parent directories."""
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render_report(report), encoding="utf-8")

    def write_trajectory(self, traj: Trajectory, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render_trajectory(traj), encoding="utf-8")
