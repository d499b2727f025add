"""Suite execution and report assembly."""

import logging
import time
from typing import Callable, Optional

from kahler_circles import __version__
from kahler_circles.config import Settings, get_settings
from kahler_circles.errors import KahlerCirclesError
from kahler_circles.geometry import get_metric
from kahler_circles.suites import sampling
from kahler_circles.suites.models import CaseResult, ReportSummary, SuiteConfig, VerificationReport
from kahler_circles.suites.registry import KAHLER_THRESHOLD, Case, Suite, SuiteContext, get_suite

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int], None]

MERGED_SUITE = "merged"


def resolve(config: SuiteConfig, settings: Optional[Settings] = None) -> tuple[Suite, SuiteContext]:
    """Apply suite defaults, then settings, to the unset fields of a config."""
    settings = settings or get_settings()
    suite = get_suite(config.suite)
    metric_id = suite.metric if suite.fixed_metric else (config.metric or suite.metric)
    metric = get_metric(metric_id) if metric_id is not None else None
    context = SuiteContext(
        metric=metric,
        family=config.family or suite.family,
        samples=config.samples or suite.samples or settings.samples,
        seed=config.seed,
        step=config.step or settings.fd_step,
        steps=config.steps or settings.integration_steps,
        time=config.time or sampling.default_time(metric),
        threshold=config.tol or KAHLER_THRESHOLD,
    )
    return suite, context


def run_case(suite: Suite, case: Case, tolerances: dict[str, float]) -> CaseResult:
    """Evaluate one case; library errors fail the case instead of the run."""
    start = time.perf_counter()
    try:
        measurement = case.evaluate()
    except KahlerCirclesError as exc:
        logger.warning("%s/%s failed: %s", suite.id, case.id, exc)
        return CaseResult.failed(case.id, f"{type(exc).__name__}: {exc}", case.params)
    logger.debug("%s/%s finished in %.3fs", suite.id, case.id, time.perf_counter() - start)
    return CaseResult.judge(
        case.id,
        measurement.residuals,
        tolerances,
        {**case.params, **measurement.details},
    )


def run_suite(
    config: SuiteConfig,
    settings: Optional[Settings] = None,
    progress: Optional[ProgressCallback] = None,
) -> VerificationReport:
    """Run the suite named by a config.

    Args:
        config: Validated configuration
        settings: Defaults for unset fields (global settings if omitted)
        progress: Called with (done, total) after every case

    Returns:
        The report, cases ordered by id
    """
    start = time.perf_counter()
    suite, context = resolve(config, settings)
    tolerances = dict(suite.tolerances)
    if config.tol is not None:
        tolerances = {
            name: value if name in suite.fixed_tolerances else config.tol
            for name, value in tolerances.items()
        }

    cases = suite.build(context)
    logger.debug("%s: %d cases, seed %d", suite.id, len(cases), context.seed)
    results = []
    for done, case in enumerate(cases, start=1):
        results.append(run_case(suite, case, tolerances))
        if progress is not None:
            progress(done, len(cases))
    results.sort(key=lambda result: result.id)

    resolved = config.model_copy(
        update={
            "metric": context.metric.name if context.metric is not None else None,
            "family": context.family,
            "samples": context.samples,
            "step": context.step,
            "steps": context.steps,
            "time": context.time,
        }
    )
    return VerificationReport(
        suite=suite.id,
        config=resolved.echo(),
        cases=results,
        summary=ReportSummary.from_cases(results),
        version=__version__,
        wall_time=time.perf_counter() - start,
    )


def merge_reports(reports: list[VerificationReport]) -> VerificationReport:
    """Concatenate the cases of several reports under suite-prefixed ids."""
    if not reports:
        raise ValueError("at least one report is needed")
    cases = [
        case.model_copy(update={"id": f"{report.suite}:{case.id}"})
        for report in reports
        for case in report.cases
    ]
    return VerificationReport(
        suite=MERGED_SUITE,
        config={"sources": [report.suite for report in reports]},
        cases=cases,
        summary=ReportSummary.from_cases(cases),
        version=__version__,
        wall_time=sum(report.wall_time for report in reports),
    )
