"""Registry of verification suites.

Every suite checks one claim and is described by the residuals it measures
and their tolerances. A suite expands a resolved configuration into cases;
each case is evaluated lazily by the runner so that a failing case never
stops the others.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property, partial
from typing import Any, Callable, Optional, Union

import numpy as np
from numpy.typing import NDArray

from kahler_circles.circles.families import exterior_ball_curve, get_family, suspension_rectifier
from kahler_circles.circles.fitting import CircleFit, complex_line_defect, fit_circle, line_residual
from kahler_circles.circles.projective import image_of_line, jet2_of_map, rectifier
from kahler_circles.core.quaternion import ComplexLinear, classify_A, decompose_A
from kahler_circles.errors import DomainExitError, KahlerCirclesError
from kahler_circles.formats.json_handler import (
    circle_fit_payload,
    momentum_payload,
    projective_map_payload,
    scan_payload,
    to_jsonable,
)
from kahler_circles.geometry import get_metric
from kahler_circles.geometry.beltrami import (
    derivative_identity_defect,
    line_constancy_defect,
    momentum_polynomial_fit,
    normalized_h,
    recover_g,
)
from kahler_circles.geometry.connection import (
    Trajectory,
    christoffel,
    complex_bilinearity_defect,
    energy_drift,
    exp_jet2,
    extract_L,
    geodesic,
    geodesics,
)
from kahler_circles.geometry.curvature import hsc_constancy_scan
from kahler_circles.geometry.metrics import MetricField, kahler_defect
from kahler_circles.numerics import DIM, FloatArray, evaluation_sample, random_unit_vectors, rng
from kahler_circles.suites import sampling

# Defect level below which a field counts as Kaehler / complex-bilinear
KAHLER_THRESHOLD = 1e-6

# Fubini fields, the ball, the flat metric and three counterexamples
BILINEARITY_BATTERY = (
    "fubini:-1",
    "fubini:-0.5",
    "fubini:0.5",
    "fubini:1",
    "ball",
    "euclidean",
    "testfield:nonhermitian",
    "testfield:nonkahler",
    "testfield:conformal",
)

RECTIFIER_LINES = 20
IMAGE_SAMPLES = 64
CURVE_SAMPLES = 64
MIN_SCAN = 10
MIN_MOMENTUM_SAMPLES = 90


@dataclass(frozen=True)
class Measurement:
    """Named residuals of one case, plus details echoed into the report."""

    residuals: dict[str, float]
    details: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Case:
    id: str
    params: dict[str, Any]
    evaluate: Callable[[], Measurement]


@dataclass(frozen=True)
class SuiteContext:
    """Configuration of a run after defaults are applied.

    Attributes:
        metric: Metric field, None for suites that pick their own
        family: Family identifier for family suites
        samples: Number of cases (or sample size of single-case suites)
        seed: Seed of every random draw of the run
        step: Finite-difference step
        steps: RK4 steps per curve
        time: Integration horizon
        threshold: Tolerance handed to library calls that take one
    """

    metric: Optional[MetricField]
    family: Optional[str]
    samples: int
    seed: int
    step: float
    steps: int
    time: float
    threshold: float = KAHLER_THRESHOLD

    def generator(self) -> np.random.Generator:
        return rng(self.seed)

    def require_metric(self) -> MetricField:
        if self.metric is None:
            raise ValueError("this suite needs a metric")
        return self.metric


@dataclass(frozen=True)
class Suite:
    """A registered verification suite.

    Attributes:
        id: Suite identifier used on the command line
        claim: The statement the suite checks
        tolerances: Residual name -> tolerance
        build: Expands a context into cases
        metric: Default metric identifier
        family: Default family identifier
        samples: Default sample count (None: use the settings)
        fixed_metric: The suite always runs on its default metric
        fixed_tolerances: Tolerances that a --tol override leaves alone
    """

    id: str
    claim: str
    tolerances: dict[str, float]
    build: Callable[[SuiteContext], list[Case]]
    metric: Optional[str] = "fubini:1"
    family: Optional[str] = None
    samples: Optional[int] = None
    fixed_metric: bool = False
    fixed_tolerances: frozenset[str] = frozenset()


def _vector(x: NDArray) -> list[float]:
    return [float(c) for c in np.asarray(x).ravel()]


def _case_id(prefix: str, k: int) -> str:
    return f"{prefix}-{k:04d}"


def _match(first: CircleFit, second: CircleFit) -> tuple[float, float]:
    """Center distance and radius difference, both relative to the second radius."""
    if not first.is_circle or not second.is_circle:
        same = first.kind == second.kind
        return (0.0, 0.0) if same else (math.inf, math.inf)
    assert first.center is not None and second.center is not None
    assert first.radius is not None and second.radius is not None
    scale = second.radius
    return (
        float(np.linalg.norm(first.center - second.center)) / scale,
        abs(first.radius - second.radius) / scale,
    )


# ---------------------------------------------------------------------------
# Geodesic suites
# ---------------------------------------------------------------------------


class _GeodesicBatch:
    """Geodesics of one run, integrated together on first use.

    When the batch integration raises, each geodesic is integrated on its
    own and the error is kept for the geodesics that still fail.
    """

    def __init__(self, g: MetricField, P: FloatArray, V: FloatArray, ctx: SuiteContext) -> None:
        self.g = g
        self.P = P
        self.V = V
        self.ctx = ctx

    def _integrate(self, P: FloatArray, V: FloatArray) -> list[Trajectory]:
        return geodesics(self.g, P, V, self.ctx.time, self.ctx.steps, self.ctx.step)

    def _integrate_one(self, p: FloatArray, v: FloatArray) -> Union[Trajectory, KahlerCirclesError]:
        try:
            return self._integrate(p[None], v[None])[0]
        except KahlerCirclesError as exc:
            return exc

    @cached_property
    def outcomes(self) -> list[Union[Trajectory, KahlerCirclesError]]:
        try:
            return list(self._integrate(self.P, self.V))
        except KahlerCirclesError:
            return [self._integrate_one(p, v) for p, v in zip(self.P, self.V)]

    def __getitem__(self, k: int) -> Trajectory:
        traj = self.outcomes[k]
        if isinstance(traj, KahlerCirclesError):
            raise traj
        if not traj.complete:
            raise DomainExitError(
                f"{self.g.name}: geodesic left the domain at t={traj.times[-1]:.6g}",
                partial=traj,
            )
        return traj


def _geodesic_circle(batch: _GeodesicBatch, k: int) -> Measurement:
    traj = batch[k]
    fit = fit_circle(traj.points)
    return Measurement(
        residuals={
            "relative_residual": fit.relative_residual,
            "energy_drift": energy_drift(traj, batch.g),
        },
        details={"fit": to_jsonable(circle_fit_payload(fit))},
    )


def _geodesic_complex_line(batch: _GeodesicBatch, k: int) -> Measurement:
    return Measurement(residuals={"complex_line_defect": complex_line_defect(batch[k])})


def _geodesic_cases(
    evaluate: Callable[[_GeodesicBatch, int], Measurement], ctx: SuiteContext
) -> list[Case]:
    g = ctx.require_metric()
    P, V = sampling.initial_conditions(g, ctx.generator(), ctx.samples)
    batch = _GeodesicBatch(g, P, V, ctx)
    return [
        Case(
            id=_case_id("geodesic", k),
            params={"metric": g.name, "p": _vector(P[k]), "v": _vector(V[k])},
            evaluate=partial(evaluate, batch, k),
        )
        for k in range(len(P))
    ]


# ---------------------------------------------------------------------------
# Pointwise suites
# ---------------------------------------------------------------------------


def _point_cases(
    evaluate: Callable[[MetricField, FloatArray, SuiteContext], Measurement],
    ctx: SuiteContext,
) -> list[Case]:
    g = ctx.require_metric()
    points = sampling.point_region(g).sample(ctx.generator(), ctx.samples)
    return [
        Case(
            id=_case_id("point", k),
            params={"metric": g.name, "p": _vector(p)},
            evaluate=partial(evaluate, g, p, ctx),
        )
        for k, p in enumerate(points)
    ]


def _kahler(g: MetricField, p: FloatArray, ctx: SuiteContext) -> Measurement:
    return Measurement(
        residuals={
            "kahler_defect": kahler_defect(g, p, ctx.step),
            "complex_bilinearity_defect": complex_bilinearity_defect(christoffel(g, p, ctx.step)),
        }
    )


def _exp_jet(g: MetricField, p: FloatArray, ctx: SuiteContext) -> Measurement:
    jet = exp_jet2(g, p, ctx.step)
    result = classify_A(jet.A, ctx.threshold)
    return Measurement(
        residuals={
            "holomorphy_defect": jet.holomorphy_defect(),
            "beta_norm": decompose_A(jet.A).beta_norm(),
            "fit_residual": jet.residual,
        },
        details={
            "classification": "complex-linear" if isinstance(result, ComplexLinear) else "not-holomorphic"
        },
    )


def _proportionality(g: MetricField, p: FloatArray, ctx: SuiteContext) -> Measurement:
    fit = extract_L(christoffel(g, p, ctx.step), ctx.threshold)
    linearity = math.inf if fit.linearity_defect is None else fit.linearity_defect
    return Measurement(
        residuals={"residual": fit.residual, "linearity_defect": linearity},
        details={"L": to_jsonable(fit.coefficients)},
    )


def _bilinearity_cases(ctx: SuiteContext) -> list[Case]:
    """Kaehler and complex-bilinear must agree on every field of the battery."""
    fields = [ctx.metric] if ctx.metric is not None else [get_metric(m) for m in BILINEARITY_BATTERY]
    gen = ctx.generator()
    cases = []
    for g in fields:
        points = sampling.point_region(g).sample(gen, ctx.samples)
        for k, p in enumerate(points):
            cases.append(
                Case(
                    id=f"{g.name}/{k:04d}",
                    params={"metric": g.name, "p": _vector(p)},
                    evaluate=partial(_agreement, g, p, ctx),
                )
            )
    return cases


def _agreement(g: MetricField, p: FloatArray, ctx: SuiteContext) -> Measurement:
    defects = _kahler(g, p, ctx).residuals
    kahler = defects["kahler_defect"] <= ctx.threshold
    bilinear = defects["complex_bilinearity_defect"] <= ctx.threshold
    return Measurement(
        residuals={"disagreement": 0.0 if kahler == bilinear else 1.0, **defects},
        details={"kahler": kahler, "complex_bilinear": bilinear},
    )


# ---------------------------------------------------------------------------
# Rectifiers
# ---------------------------------------------------------------------------


def _rectifier_cases(ctx: SuiteContext) -> list[Case]:
    g = ctx.require_metric()
    gen = ctx.generator()
    P, V = sampling.initial_conditions(g, gen, ctx.samples)
    directions = random_unit_vectors(gen, ctx.samples * RECTIFIER_LINES).reshape(
        ctx.samples, RECTIFIER_LINES, DIM
    )
    return [
        Case(
            id=_case_id("point", k),
            params={"metric": g.name, "p": _vector(P[k]), "v": _vector(V[k])},
            evaluate=partial(_rectifier, g, P[k], V[k], directions[k], ctx),
        )
        for k in range(len(P))
    ]


def _rectifier(
    g: MetricField, p: FloatArray, v: FloatArray, directions: FloatArray, ctx: SuiteContext
) -> Measurement:
    """2-jet, line images and geodesic match of the rectifier at p.

    The rectifier uses A = -L with Gamma(v, v) = L(v) v, so its 2-jet is the
    exponential 2-jet of g.
    """
    functional = -extract_L(christoffel(g, p, ctx.step), ctx.threshold).functional
    F = rectifier(p, functional)
    origin = np.zeros(DIM)

    jet = jet2_of_map(F, origin)
    sample = evaluation_sample()
    jet_defect = max(
        float(np.abs(jet.linear - np.eye(DIM)).max()),
        float(np.linalg.norm(jet.quadratic(sample) - functional.scale(sample), axis=-1).max()),
    )
    image_residual = max(
        image_of_line(F, origin, d, T=0.5, n=IMAGE_SAMPLES).relative_residual for d in directions
    )

    geodesic_fit = fit_circle(geodesic(g, p, v, ctx.time, ctx.steps, ctx.step).points)
    image_fit = image_of_line(F, origin, v, T=ctx.time, n=IMAGE_SAMPLES)
    center_match, radius_match = _match(image_fit, geodesic_fit)
    return Measurement(
        residuals={
            "jet_defect": jet_defect,
            "image_residual": image_residual,
            "center_match": center_match,
            "radius_match": radius_match,
        },
        details={"rectifier": projective_map_payload(F)},
    )


# ---------------------------------------------------------------------------
# Curvature and Gram machinery
# ---------------------------------------------------------------------------


def _curvature_cases(ctx: SuiteContext) -> list[Case]:
    g = ctx.require_metric()
    n = max(ctx.samples, MIN_SCAN)
    return [Case(id="scan", params={"metric": g.name, "n": n}, evaluate=partial(_curvature, g, n, ctx))]


def _curvature(g: MetricField, n: int, ctx: SuiteContext) -> Measurement:
    scan = hsc_constancy_scan(g, sampling.scan_region(g), n, seed=ctx.seed, cross_check=True)
    disagreement = scan.gauss_disagreement if scan.gauss_disagreement is not None else math.inf
    return Measurement(
        residuals={
            "relative_spread": scan.relative_spread,
            "gauss_disagreement": disagreement / max(1.0, abs(scan.mean)),
        },
        details={"scan": to_jsonable(scan_payload(scan))},
    )


def _gram_cases(ctx: SuiteContext) -> list[Case]:
    g = ctx.require_metric()
    gen = ctx.generator()
    points = sampling.point_region(g).sample(gen, ctx.samples)
    directions = random_unit_vectors(gen, ctx.samples)
    return [
        Case(
            id=_case_id("point", k),
            params={"metric": g.name, "p": _vector(p), "direction": _vector(d)},
            evaluate=partial(_gram, g, p, d, ctx),
        )
        for k, (p, d) in enumerate(zip(points, directions))
    ]


def _recover_ratio(recovered: FloatArray, form: FloatArray) -> tuple[float, float]:
    """Best scalar c with recovered = c form, and the relative misfit."""
    c = float(np.sum(recovered * form) / np.sum(form * form))
    misfit = float(np.linalg.norm(recovered - c * form) / np.linalg.norm(recovered))
    return c, misfit


def _gram(g: MetricField, p: FloatArray, direction: FloatArray, ctx: SuiteContext) -> Measurement:
    hf = normalized_h(g)
    c, misfit = _recover_ratio(recover_g(hf, p), g.evaluate(p))
    c_base, _ = _recover_ratio(recover_g(hf, hf.base_point), g.evaluate(hf.base_point))
    return Measurement(
        residuals={
            "recover_spread": max(misfit, abs(c / c_base - 1.0)),
            "line_constancy": line_constancy_defect(hf, p, direction),
            "derivative_identity": derivative_identity_defect(
                g, p, ctx.step, ctx.threshold, require_proportional=False
            ),
        }
    )


def _momentum_cases(ctx: SuiteContext) -> list[Case]:
    g = ctx.require_metric()
    n = max(ctx.samples, MIN_MOMENTUM_SAMPLES)
    return [Case(id="fit", params={"metric": g.name, "n_samples": n}, evaluate=partial(_momentum, g, n, ctx))]


def _momentum(g: MetricField, n: int, ctx: SuiteContext) -> Measurement:
    fit = momentum_polynomial_fit(
        normalized_h(g), n_samples=n, seed=ctx.seed, region=sampling.momentum_region(g)
    )
    return Measurement(
        residuals={"relative_residual": fit.residual},
        details={"fit": to_jsonable(momentum_payload(fit))},
    )


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


def _suspension_cases(ctx: SuiteContext) -> list[Case]:
    family_id = ctx.family or "suspension:poincare"
    fam = get_family(family_id)
    gen = ctx.generator()
    points = sampling.suspension_points(gen, ctx.samples)
    directions = random_unit_vectors(gen, ctx.samples)
    return [
        Case(
            id=_case_id("curve", k),
            params={"family": fam.name, "a": _vector(a), "direction": _vector(d)},
            evaluate=partial(_suspension, family_id, a, d),
        )
        for k, (a, d) in enumerate(zip(points, directions))
    ]


def _suspension(family_id: str, a: FloatArray, direction: FloatArray) -> Measurement:
    fam = get_family(family_id)
    traj = fam.curve(a, direction, n=CURVE_SAMPLES)
    tangency = max(
        float(np.linalg.norm(traj.initial_point - a)),
        float(np.linalg.norm(traj.initial_velocity - direction) / np.linalg.norm(direction)),
    )
    fit = fit_circle(traj.points)
    F = suspension_rectifier(fam, a)
    return Measurement(
        residuals={
            "tangency": tangency,
            "relative_residual": fit.relative_residual,
            "complex_line_defect": complex_line_defect(traj),
            "rectified_line_residual": line_residual(F(traj.points)),
        },
        details={"kind": fit.kind},
    )


def _exterior_cases(ctx: SuiteContext) -> list[Case]:
    g = ctx.require_metric()
    P, V = sampling.initial_conditions(g, ctx.generator(), ctx.samples)
    return [
        Case(
            id=_case_id("curve", k),
            params={"family": "exterior-ball", "p": _vector(P[k]), "v": _vector(V[k])},
            evaluate=partial(_exterior, g, P[k], V[k], ctx),
        )
        for k in range(len(P))
    ]


def _exterior(g: MetricField, p: FloatArray, v: FloatArray, ctx: SuiteContext) -> Measurement:
    traj = exterior_ball_curve(p, v, ctx.time, ctx.steps)
    fit = fit_circle(traj.points)
    return Measurement(
        residuals={"relative_residual": fit.relative_residual, "energy_drift": energy_drift(traj, g)},
        details={"fit": to_jsonable(circle_fit_payload(fit))},
    )


SUITES: dict[str, Suite] = {
    suite.id: suite
    for suite in (
        Suite(
            id="geodesic-circles",
            claim="geodesics of Fubini metrics are circles or straight lines",
            tolerances={"relative_residual": 1e-6, "energy_drift": 1e-7},
            build=partial(_geodesic_cases, _geodesic_circle),
        ),
        Suite(
            id="complex-lines",
            claim="geodesics of Fubini metrics lie in complex lines",
            tolerances={"complex_line_defect": 1e-7},
            build=partial(_geodesic_cases, _geodesic_complex_line),
        ),
        Suite(
            id="kahler",
            claim="the Kaehler form is closed and the Christoffel form is complex bilinear",
            tolerances={"kahler_defect": 1e-6, "complex_bilinearity_defect": 1e-6},
            build=partial(_point_cases, _kahler),
        ),
        Suite(
            id="bilinearity",
            claim="a Hermitian metric is Kaehler iff its Christoffel form is complex bilinear",
            tolerances={"disagreement": 0.5},
            build=_bilinearity_cases,
            metric=None,
            fixed_tolerances=frozenset({"disagreement"}),
        ),
        Suite(
            id="exp-jet",
            claim="exponential 2-jets are holomorphic of the form A(x) x with A complex linear",
            tolerances={"holomorphy_defect": 1e-6, "beta_norm": 1e-6, "fit_residual": 1e-6},
            build=partial(_point_cases, _exp_jet),
        ),
        Suite(
            id="proportionality",
            claim="Gamma(v, v) = L(v) v with L complex linear",
            tolerances={"residual": 1e-6, "linearity_defect": 1e-6},
            build=partial(_point_cases, _proportionality),
        ),
        Suite(
            id="rectifier",
            claim="the projective rectifier has the exponential 2-jet and maps lines to geodesic circles",
            tolerances={
                "jet_defect": 1e-7,
                "image_residual": 1e-8,
                "center_match": 1e-5,
                "radius_match": 1e-5,
            },
            build=_rectifier_cases,
            samples=10,
        ),
        Suite(
            id="curvature",
            claim="holomorphic sectional curvature of Fubini metrics is constant",
            tolerances={"relative_spread": 1e-4, "gauss_disagreement": 1e-4},
            build=_curvature_cases,
            samples=50,
        ),
        Suite(
            id="gram",
            claim="h = g / G^(2/3) is constant along complex lines and g = h / H^2",
            tolerances={"recover_spread": 1e-8, "line_constancy": 1e-6, "derivative_identity": 1e-5},
            build=_gram_cases,
        ),
        Suite(
            id="momentum",
            claim="h is a Hermitian quadratic polynomial in complex momentum and angular momentum",
            tolerances={"relative_residual": 1e-6},
            build=_momentum_cases,
            samples=200,
        ),
        Suite(
            id="family-suspension",
            claim="the suspension of the Poincare family is a rectifiable family of circles in complex lines",
            tolerances={
                "tangency": 1e-8,
                "relative_residual": 1e-8,
                "complex_line_defect": 1e-8,
                "rectified_line_residual": 1e-6,
            },
            build=_suspension_cases,
            metric=None,
            family="suspension:poincare",
            samples=200,
            fixed_metric=True,
        ),
        Suite(
            id="family-exterior",
            claim="geodesics of the ball metric outside the unit ball are circles",
            tolerances={"relative_residual": 1e-5, "energy_drift": 1e-7},
            build=_exterior_cases,
            metric="ball-exterior",
            family="exterior-ball",
            samples=50,
            fixed_metric=True,
        ),
    )
}


def get_suite(suite_id: str) -> Suite:
    if suite_id not in SUITES:
        raise ValueError(f"Unknown suite: {suite_id}. Available: {', '.join(SUITES)}")
    return SUITES[suite_id]
