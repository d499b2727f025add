"""Command-line interface for kahler-circles."""

import logging
from pathlib import Path
from typing import Any, Optional

import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from kahler_circles import __version__
from kahler_circles.circles.families import exterior_ball_curve, get_family
from kahler_circles.config import get_settings, load_config_file
from kahler_circles.errors import DomainExitError, KahlerCirclesError
from kahler_circles.formats import SUPPORTED_FORMATS, get_handler
from kahler_circles.formats.json_handler import load_report
from kahler_circles.geometry import get_metric
from kahler_circles.geometry.connection import Trajectory, geodesic
from kahler_circles.numerics import DIM
from kahler_circles.suites import sampling
from kahler_circles.suites.models import EXTERIOR_FAMILY, SuiteConfig, VerificationReport
from kahler_circles.suites.registry import SUITES
from kahler_circles.suites.runner import merge_reports, run_suite

app = typer.Typer(
    name="kahler-circles",
    help="Numerical verification of circle, Kaehler and rectifiability claims for Fubini metrics.",
    add_completion=False,
)
export_app = typer.Typer(help="Export sampled curves.", add_completion=False)
report_app = typer.Typer(help="Combine verification reports.", add_completion=False)
app.add_typer(export_app, name="export")
app.add_typer(report_app, name="report")

console = Console()
logger = logging.getLogger(__name__)

# Rows of the failed-case table before it is cut off
MAX_FAILED_ROWS = 10


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        console.print(f"kahler-circles v{__version__}")
        raise typer.Exit()


def setup_logging(verbose: bool) -> None:
    """Route library logging through rich when verbose."""
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(message)s",
            handlers=[RichHandler(console=console, show_path=False)],
            force=True,
        )


def parse_vector(text: str, name: str) -> np.ndarray:
    """Parse four comma-separated reals."""
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise typer.BadParameter(f"{name} must be {DIM} comma-separated numbers, got {text!r}") from None
    if len(values) != DIM or not all(np.isfinite(values)):
        raise typer.BadParameter(f"{name} must be {DIM} comma-separated finite numbers, got {text!r}")
    return np.array(values)


def build_config(suite: str, options: dict[str, Any], config_file: Optional[Path]) -> SuiteConfig:
    """Merge config file values and flags; flags win.

    Raises:
        typer.BadParameter: On unreadable files, unknown keys or invalid values
    """
    values: dict[str, Any] = {}
    if config_file is not None:
        try:
            values.update(load_config_file(config_file))
        except (FileNotFoundError, ValueError) as e:
            raise typer.BadParameter(str(e), param_hint="--config") from None
    values.update({key: value for key, value in options.items() if value is not None})
    values.setdefault("seed", get_settings().seed)
    try:
        return SuiteConfig(suite=suite, **values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(loc) for loc in error['loc']) or 'config'}: {error['msg']}"
            for error in e.errors()
        )
        raise typer.BadParameter(problems) from None


def default_output(config: SuiteConfig) -> Path:
    return get_settings().output_dir / f"{config.suite}.{config.format}"


def print_summary(report: VerificationReport) -> None:
    """Residual maxima and failed cases of a report."""
    tolerances: dict[str, float] = {}
    for case in report.cases:
        tolerances.update(case.tolerances)

    table = Table(title=f"{report.suite}: {report.summary.passed}/{report.summary.total} passed")
    table.add_column("Residual")
    table.add_column("Max", justify="right")
    table.add_column("Tolerance", justify="right")
    for name, value in report.summary.max_residuals.items():
        tol = tolerances.get(name)
        table.add_row(name, f"{value:.3e}", f"{tol:.1e}" if tol is not None else "-")
    console.print(table)

    failed = [case for case in report.cases if not case.passed]
    if failed:
        failures = Table(title="Failed cases")
        failures.add_column("Case")
        failures.add_column("Reason")
        for case in failed[:MAX_FAILED_ROWS]:
            reason = case.error or ", ".join(
                f"{name}={case.residuals[name]:.3e}"
                for name, tol in case.tolerances.items()
                if not case.residuals[name] <= tol
            )
            failures.add_row(case.id, reason)
        if len(failed) > MAX_FAILED_ROWS:
            failures.add_row("...", f"{len(failed) - MAX_FAILED_ROWS} more")
        console.print(failures)


@app.callback()
def main(
    version: bool = typer.Option(
        False,
        "--version",
        "-V",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
) -> None:
    """
    Verify that Fubini metrics have circular geodesics in complex lines,
    holomorphic exponential 2-jets and constant holomorphic sectional
    curvature, and that the exterior-ball and suspension families are
    rectifiable families of circles.
    """


@app.command()
def verify(
    suite: str = typer.Argument(..., help=f"Suite to run: {', '.join(SUITES)}"),
    metric: Optional[str] = typer.Option(
        None, "--metric", "-m", help="Metric id: euclidean, fubini:<alpha>, ball, ball-exterior, testfield:<id>"
    ),
    family: Optional[str] = typer.Option(
        None, "--family", help="Family id: suspension:poincare, suspension:lines, exterior-ball"
    ),
    samples: Optional[int] = typer.Option(None, "--samples", "-n", help="Number of samples"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Random seed (unsigned 64-bit)"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Override every tolerance of the suite"),
    step: Optional[float] = typer.Option(None, "--step", help="Finite-difference step"),
    steps: Optional[int] = typer.Option(None, "--steps", help="RK4 steps per curve"),
    time: Optional[float] = typer.Option(None, "--time", "-T", help="Integration horizon"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Report path"),
    output_format: Optional[str] = typer.Option(
        None, "--format", "-f", help=f"Report format: {', '.join(SUPPORTED_FORMATS)}"
    ),
    config_file: Optional[Path] = typer.Option(
        None, "--config", "-c", help="Flat key=value file with the same keys as the flags"
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable verbose output"),
) -> None:
    """
    Run a verification suite and write its report.

    Exit code 0 when every case passes, 1 when any case fails, 2 on
    configuration errors.

    Examples:

        kahler-circles verify geodesic-circles --metric fubini:1 --samples 50 --seed 7

        kahler-circles verify kahler --metric testfield:nonkahler

        kahler-circles verify curvature --metric fubini:-1 --out curvature.json
    """
    setup_logging(verbose)
    options = {
        "metric": metric,
        "family": family,
        "samples": samples,
        "seed": seed,
        "tol": tol,
        "step": step,
        "steps": steps,
        "time": time,
        "out": out,
        "format": output_format,
    }
    config = build_config(suite, options, config_file)
    out_path = config.out or default_output(config)

    if verbose:
        console.print(f"[blue]Suite:[/blue] {config.suite} ({SUITES[config.suite].claim})")
        console.print(f"[blue]Output:[/blue] {out_path}")

    try:
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
        ) as progress:
            task = progress.add_task(f"Running {config.suite}...", total=None)

            def advance(done: int, total: int) -> None:
                progress.update(task, completed=done, total=total, description=f"{config.suite}: case {done}/{total}")

            report = run_suite(config, progress=advance)
    except ValueError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(2)
    except KahlerCirclesError as e:
        console.print(f"[red]Error:[/red] {e}")
        if verbose:
            console.print_exception()
        raise typer.Exit(1)

    get_handler(config.format)().write_report(report, out_path)
    print_summary(report)
    if report.passed:
        console.print(f"[green]Success:[/green] {out_path}")
    else:
        console.print(f"[red]Failed:[/red] {report.summary.failed} case(s); report at {out_path}")
    raise typer.Exit(0 if report.passed else 1)


@app.command("suites")
def list_suites() -> None:
    """List the registered suites and the claims they check."""
    table = Table(title="Verification suites")
    table.add_column("Suite")
    table.add_column("Claim")
    table.add_column("Residuals")
    for suite in SUITES.values():
        table.add_row(suite.id, suite.claim, ", ".join(suite.tolerances))
    console.print(table)


def _trajectory(
    metric: Optional[str],
    family: Optional[str],
    point: np.ndarray,
    velocity: np.ndarray,
    time: Optional[float],
    steps: int,
    step: float,
) -> Trajectory:
    if family == EXTERIOR_FAMILY:
        return exterior_ball_curve(point, velocity, time or 0.5, steps)
    if family is not None:
        return get_family(family).curve(point, velocity, n=steps + 1)
    assert metric is not None
    g = get_metric(metric)
    return geodesic(g, point, velocity, time or sampling.default_time(g), steps, step)


@export_app.command("trajectory")
def export_trajectory(
    point: str = typer.Option(..., "--point", "-p", help="Start point, four comma-separated reals"),
    velocity: str = typer.Option(..., "--velocity", help="Initial velocity, four comma-separated reals"),
    metric: Optional[str] = typer.Option(None, "--metric", "-m", help="Metric id for a geodesic"),
    family: Optional[str] = typer.Option(
        None, "--family", help="Family id: exterior-ball or suspension:<name>"
    ),
    time: Optional[float] = typer.Option(None, "--time", "-T", min=0.0, help="Integration horizon"),
    steps: Optional[int] = typer.Option(None, "--steps", min=16, help="RK4 steps (samples - 1)"),
    step: Optional[float] = typer.Option(None, "--step", help="Finite-difference step"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output path (stdout if omitted)"),
    output_format: str = typer.Option("csv", "--format", "-f", help=f"Format: {', '.join(SUPPORTED_FORMATS)}"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable verbose output"),
) -> None:
    """
    Export one geodesic or family curve.

    Examples:

        kahler-circles export trajectory --metric fubini:1 --point 0.1,0,0,0 --velocity 0,0.5,0,0

        kahler-circles export trajectory --family exterior-ball --point 2,0,0,0 --velocity 0,1,0,0 --out ext.csv
    """
    setup_logging(verbose)
    if (metric is None) == (family is None):
        raise typer.BadParameter("give exactly one of --metric and --family")
    p = parse_vector(point, "--point")
    v = parse_vector(velocity, "--velocity")
    settings = get_settings()
    try:
        # validates the ids the same way suite configs do
        SuiteConfig(suite="geodesic-circles", metric=metric, family=family, time=time, step=step)
        writer = get_handler(output_format)()
    except (ValidationError, ValueError) as e:
        raise typer.BadParameter(str(e)) from None

    try:
        traj = _trajectory(
            metric, family, p, v, time, steps or settings.integration_steps, step or settings.fd_step
        )
    except DomainExitError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(1)
    except KahlerCirclesError as e:
        console.print(f"[red]Error:[/red] {e}")
        if verbose:
            console.print_exception()
        raise typer.Exit(1)
    except ValueError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(2)

    if out is None:
        typer.echo(writer.render_trajectory(traj), nl=False)
    else:
        writer.write_trajectory(traj, out)
        console.print(f"[green]Success:[/green] {out} ({len(traj)} samples)")


@report_app.command("merge")
def report_merge(
    reports: list[Path] = typer.Argument(..., exists=True, dir_okay=False, help="JSON reports to merge"),
    out: Path = typer.Option(..., "--out", "-o", help="Merged report path"),
) -> None:
    """Merge JSON reports into one; case ids are prefixed with their suite."""
    try:
        loaded = [load_report(path) for path in reports]
        writer = get_handler(out)()
    except (ValidationError, ValueError) as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(2)

    merged = merge_reports(loaded)
    writer.write_report(merged, out)
    print_summary(merged)
    console.print(f"[green]Success:[/green] {out}")
    raise typer.Exit(0 if merged.passed else 1)


if __name__ == "__main__":
    app()
