"""Grid verification of dispersive and star orders between extremes, and
hypothesis checking for the comparison results.

Directions are written for the pair (A, B): ``"A<=B"`` asks whether A is
smaller in the order, ``"A>=B"`` whether it is larger.

* dispersive, density criterion: with D(x) = g_B(G_B^{-1}(F_A(x))) - f_A(x),
  A <=disp B iff D <= 0 and A >=disp B iff D >= 0.
* dispersive, quantile criterion: spreads F_A^{-1}(v) - F_A^{-1}(u) versus
  the same spreads of B over grid pairs at fixed strides.
* star: A <=* B iff G_B^{-1}(F_A(x)) / x is increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from poextremes import extremes
from poextremes.baselines import classify_aging
from poextremes.extremes import ExtremeDistribution
from poextremes.generators import (
    check_cross_generator,
    check_log_shape,
    check_ratio_shape,
    generator_grid,
)
from poextremes.grids import Grid, as_points
from poextremes.verdicts import (
    ConditionReport,
    HypothesisResult,
    Status,
    Trend,
    Verdict,
    monotone_trend,
    one_sided,
    trend_verdict,
)

DEFAULT_TOL = 1e-8
DIRECTIONS = ("A<=B", "A>=B")
QUANTILE_STRIDES = (1, 4, 16, 64)


def _check_direction(direction):
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")


def _describe(grid) -> str:
    if isinstance(grid, Grid):
        return grid.describe()
    pts = as_points(grid)
    return f"points:{len(pts)}:[{pts.min():.6g},{pts.max():.6g}]"


@dataclass(frozen=True)
class OrderCheckReport:
    order: str
    criterion: str
    direction: str
    verdict: Verdict
    grid: str
    x: np.ndarray = field(repr=False, compare=False, default=None)
    values: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def status(self) -> Status:
        return self.verdict.status

    @property
    def holds(self) -> bool:
        return self.verdict.holds

    @property
    def witnesses(self):
        return self.verdict.witnesses

    @property
    def max_violation(self) -> float:
        return self.verdict.max_violation


# -- dispersive order ---------------------------------------------------------------

def _closed_form_applies(A: ExtremeDistribution, B: ExtremeDistribution) -> bool:
    return A.kind == B.kind and A.baseline == B.baseline and B.sample.homogeneous


def dispersive_difference(A: ExtremeDistribution, B: ExtremeDistribution, x):
    """(D(x), f_A(x)) with D = g_B(G_B^{-1}(F_A(x))) - f_A(x).

    Uses the closed-form composed density when B is a homogeneous sample of
    the same baseline and kind as A; otherwise inverts B numerically.
    """
    x = np.asarray(x, dtype=float)
    fa = np.asarray(A.pdf(x), dtype=float)
    if _closed_form_applies(A, B):
        gb = np.asarray(extremes.composed_density(A, B, x), dtype=float)
    else:
        if A.kind == "min":
            level = np.atleast_1d(A.sf(x))
            y = B.invert_level(level if B.kind == "min" else 1.0 - level)
        else:
            level = np.atleast_1d(A.cdf(x))
            y = B.invert_level(level if B.kind == "max" else 1.0 - level)
        gb = np.asarray(B.pdf(y), dtype=float)
    return gb - fa, fa


def check_dispersive(A, B, grid=None, tol: float = DEFAULT_TOL, direction: str = "A<=B"):
    """Density criterion for the dispersive order on a grid of A's support."""
    _check_direction(direction)
    x = as_points(grid if grid is not None else A.baseline.grid())
    diff, fa = dispersive_difference(A, B, x)
    signed = diff if direction == "A<=B" else -diff
    verdict = one_sided(signed, tol * (1.0 + np.abs(fa)), x)
    return OrderCheckReport("dispersive", "density", direction, verdict, _describe(grid if grid is not None else x), x, diff)


def compare_dispersive(A, B, grid=None, tol: float = DEFAULT_TOL):
    """Both directions of the density criterion from one evaluation."""
    x = as_points(grid if grid is not None else A.baseline.grid())
    diff, fa = dispersive_difference(A, B, x)
    tols = tol * (1.0 + np.abs(fa))
    desc = _describe(grid if grid is not None else x)
    return {
        d: OrderCheckReport("dispersive", "density", d,
                            one_sided(diff if d == "A<=B" else -diff, tols, x), desc, x, diff)
        for d in DIRECTIONS
    }


def _spread_values(A, B, u, strides):
    qa = np.asarray(A.quantile_numeric(u), dtype=float)
    qb = np.asarray(B.quantile_numeric(u), dtype=float)
    out = []
    for k in strides:
        if k >= len(u):
            continue
        da = qa[k:] - qa[:-k]
        db = qb[k:] - qb[:-k]
        out.append((k, da, db, np.column_stack([u[:-k], u[k:]])))
    if not out:
        raise ValueError("probability grid too small for the requested strides")
    return out


def _quantile_verdict(parts, tol, direction):
    verdicts = []
    for k, da, db, loc in parts:
        # A <=disp B: spreads of A never exceed spreads of B
        signed = da - db if direction == "A<=B" else db - da
        verdicts.append(one_sided(signed, tol * (1.0 + np.abs(da) + np.abs(db)), loc,
                                  note=f"stride {k}"))
    for status in (Status.VIOLATED, Status.INCONCLUSIVE):
        hit = [v for v in verdicts if v.status is status]
        if hit:
            wit = tuple(w for v in hit for w in v.witnesses)
            return Verdict(status, wit, max(v.max_violation for v in hit), False,
                           "; ".join(v.note for v in hit if v.note))
    return Verdict(Status.HOLDS, (), 0.0, all(v.tight for v in verdicts))


def check_dispersive_quantile(A, B, ugrid, tol: float = DEFAULT_TOL, direction: str = "A<=B",
                              strides=QUANTILE_STRIDES):
    """Quantile-spread criterion on probability pairs (u_i, u_{i+k}) for each stride k."""
    _check_direction(direction)
    u = np.sort(as_points(ugrid))
    if np.any(u <= 0) or np.any(u >= 1):
        raise ValueError("probability grid must lie strictly inside (0, 1)")
    parts = _spread_values(A, B, u, strides)
    return OrderCheckReport("dispersive", "quantile-spread", direction,
                            _quantile_verdict(parts, tol, direction), _describe(ugrid))


def compare_dispersive_quantile(A, B, ugrid, tol: float = DEFAULT_TOL, strides=QUANTILE_STRIDES):
    u = np.sort(as_points(ugrid))
    if np.any(u <= 0) or np.any(u >= 1):
        raise ValueError("probability grid must lie strictly inside (0, 1)")
    parts = _spread_values(A, B, u, strides)
    return {
        d: OrderCheckReport("dispersive", "quantile-spread", d,
                            _quantile_verdict(parts, tol, d), _describe(ugrid))
        for d in DIRECTIONS
    }


def probability_grid(A: ExtremeDistribution, grid=None):
    """Cdf levels of A on its support grid, restricted to the open unit interval."""
    x = as_points(grid if grid is not None else A.baseline.grid())
    u = np.unique(np.asarray(A.cdf(x), dtype=float))
    return u[(u > 0) & (u < 1)]


# -- star order ----------------------------------------------------------------------

def star_ratio(A, B, x):
    """G_B^{-1}(F_A(x)) / x."""
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise ValueError("the star ratio is undefined at x = 0; move the grid off zero")
    if _closed_form_applies(A, B):
        y, _ = extremes.compose_quantile_cdf(A, B, x)
    else:
        level = np.atleast_1d(A.sf(x) if A.kind == "min" else A.cdf(x))
        if A.kind != B.kind:
            level = 1.0 - level
        y = B.invert_level(level)
    return np.asarray(y, dtype=float) / x


def _star_report(x, ratio, tol, direction, desc):
    wanted = Trend.INCREASING if direction == "A<=B" else Trend.DECREASING
    verdict = trend_verdict(monotone_trend(x, ratio, tol), wanted)
    return OrderCheckReport("star", "ratio-monotonicity", direction, verdict, desc, x, ratio)


def check_star(A, B, grid=None, tol: float = DEFAULT_TOL, direction: str = "A<=B"):
    _check_direction(direction)
    x = as_points(grid if grid is not None else A.baseline.grid())
    return _star_report(x, star_ratio(A, B, x), tol, direction,
                        _describe(grid if grid is not None else x))


def compare_star(A, B, grid=None, tol: float = DEFAULT_TOL):
    x = as_points(grid if grid is not None else A.baseline.grid())
    ratio = star_ratio(A, B, x)
    desc = _describe(grid if grid is not None else x)
    return {d: _star_report(x, ratio, tol, d, desc) for d in DIRECTIONS}


def slope(x, y):
    """Central-difference derivative of y on a (possibly non-uniform) grid."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x)
    out = np.empty_like(x)
    out[order] = np.gradient(np.asarray(y, dtype=float)[order], x[order])
    return out


def outcome(reports: dict) -> str:
    """Summarise both directions: 'A<=B', 'A>=B', 'equal', 'neither' or 'inconclusive'."""
    up, down = reports["A<=B"], reports["A>=B"]
    if up.holds and down.holds:
        return "equal"
    if up.holds and down.status is Status.VIOLATED:
        return "A<=B"
    if down.holds and up.status is Status.VIOLATED:
        return "A>=B"
    if up.status is Status.VIOLATED and down.status is Status.VIOLATED:
        return "neither"
    return "inconclusive"


# -- hypotheses ----------------------------------------------------------------------

# per result: (extreme kind, order, conclusion direction, same generator?, hypotheses)
THEOREMS = {
    "3.1": ("min", "dispersive", "A<=B", True,
            ("alpha >= mean(alpha_i)", "DFR", "phi log-convex", "phi/phi' concave", "0 <= alpha <= 1")),
    "3.2": ("min", "dispersive", "A<=B", False,
            ("DFR", "cross-generator ratio increasing", "0 <= alpha <= 1")),
    "C3.1": ("min", "dispersive", "A<=B", False,
             ("alpha >= mean(alpha_i)", "DFR", "phi log-convex", "phi/phi' concave",
              "cross-generator ratio increasing", "0 <= alpha <= 1")),
    "3.3": ("min", "star", "A<=B", True,
            ("alpha >= mean(alpha_i)", "x r(x) decreasing", "phi log-convex", "phi/phi' concave",
             "0 <= alpha <= 1")),
    "3.4": ("min", "star", "A<=B", False,
            ("x r(x) decreasing", "cross-generator ratio increasing", "0 <= alpha <= 1")),
    "C3.2": ("min", "star", "A<=B", False,
             ("alpha >= mean(alpha_i)", "x r(x) decreasing", "phi log-convex", "phi/phi' concave",
              "cross-generator ratio increasing", "0 <= alpha <= 1")),
    "4.1": ("max", "dispersive", "A>=B", True,
            ("alpha >= mean(alpha_i)", "IRHR", "phi log-concave", "phi/phi' convex")),
    "4.2": ("max", "dispersive", "A>=B", False,
            ("IRHR", "cross-generator ratio increasing", "alpha >= 1")),
    "C4.1": ("max", "dispersive", "A>=B", False,
             ("alpha >= mean(alpha_i)", "IRHR", "phi log-concave", "phi/phi' convex",
              "cross-generator ratio increasing", "alpha >= 1")),
    "4.3": ("max", "star", "A>=B", True,
            ("alpha >= mean(alpha_i)", "x r~(x) increasing", "phi log-concave", "phi/phi' convex")),
    "4.4": ("max", "star", "A>=B", False,
            ("x r~(x) increasing", "cross-generator ratio increasing", "alpha >= 1")),
    "C4.2": ("max", "star", "A>=B", False,
             ("alpha >= mean(alpha_i)", "x r~(x) increasing", "phi log-concave", "phi/phi' convex",
              "cross-generator ratio increasing", "alpha >= 1")),
}


def theorem_ids():
    return list(THEOREMS)


def _flag(ok: bool, evidence: str, name: str) -> HypothesisResult:
    return HypothesisResult(name, Verdict(Status.HOLDS if ok else Status.VIOLATED), evidence)


def _structural(theorem, het, hom):
    kind, _, _, same_gen, _ = THEOREMS[theorem]
    out = [
        _flag(het.kind == kind and hom.kind == kind, f"extremes are {het.kind}/{hom.kind}",
              f"sample {kind}ima compared"),
        _flag(het.baseline == hom.baseline, f"{het.baseline.describe()} vs {hom.baseline.describe()}",
              "shared baseline"),
        _flag(het.sample.n == hom.sample.n, f"n = {het.sample.n} / {hom.sample.n}", "equal sample sizes"),
        _flag(hom.sample.homogeneous, f"alphas {hom.sample.alphas}", "second sample homogeneous"),
    ]
    if same_gen:
        out.append(_flag(het.generator == hom.generator,
                         f"{het.generator.describe()} vs {hom.generator.describe()}", "common generator"))
    else:
        ok = het.sample.homogeneous and het.sample.alphas[0] == hom.sample.alphas[0]
        out.append(_flag(ok, f"alphas {het.sample.alphas} vs {hom.sample.alphas[0]}",
                         "first sample homogeneous with the same alpha"))
    return out


def _hypothesis(name, het, hom, cache):
    alpha = hom.sample.alphas[0]
    gen1, gen2 = het.generator, hom.generator
    n = hom.sample.n

    def aging():
        if "aging" not in cache:
            cache["aging"] = classify_aging(het.baseline)
        return cache["aging"]

    if name == "alpha >= mean(alpha_i)":
        mean = het.sample.alpha_mean
        return _flag(alpha >= mean * (1.0 - 1e-12), f"alpha = {alpha:g}, mean = {mean:.6g}", name)
    if name == "0 <= alpha <= 1":
        return _flag(0.0 <= alpha <= 1.0, f"alpha = {alpha:g}", name)
    if name == "alpha >= 1":
        return _flag(alpha >= 1.0, f"alpha = {alpha:g}", name)

    trends = {
        "DFR": ("hazard", Trend.DECREASING),
        "IRHR": ("reversed_hazard", Trend.INCREASING),
        "x r(x) decreasing": ("x_hazard", Trend.DECREASING),
        "x r~(x) increasing": ("x_reversed_hazard", Trend.INCREASING),
    }
    if name in trends:
        curve, wanted = trends[name]
        report = aging().details[curve]
        return HypothesisResult(name, trend_verdict(report, wanted),
                                f"{curve} is {report.trend} ({report.rises} rises, {report.falls} falls)")

    shapes = {
        "phi log-convex": (check_log_shape, "convex"),
        "phi log-concave": (check_log_shape, "concave"),
        "phi/phi' concave": (check_ratio_shape, "concave"),
        "phi/phi' convex": (check_ratio_shape, "convex"),
    }
    if name in shapes:
        fn, shape = shapes[name]
        v = fn(gen1, generator_grid(gen1), shape=shape)
        note = " (equality case)" if v.tight else ""
        return HypothesisResult(name, v, f"{gen1.describe()}: {v.status}{note}")

    if name == "cross-generator ratio increasing":
        direction = "g2-over-g1" if het.kind == "min" else "g1-over-g2"
        v = check_cross_generator(gen1, gen2, n, direction=direction)
        return HypothesisResult(name, v, f"{direction} for {gen1.describe()} / {gen2.describe()}: {v.status}")
    raise KeyError(name)


def verify_hypotheses(theorem: str, scenario) -> ConditionReport:
    """Per-hypothesis verdicts of result ``theorem`` for the scenario's pair (X, Y).

    Besides the stated hypotheses, structural requirements (kind, shared
    baseline, sample sizes, homogeneity, generators) are reported first.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown result id {theorem!r}; known: {', '.join(THEOREMS)}")
    het, hom = scenario.het, scenario.hom
    cache: dict = {}
    results = _structural(theorem, het, hom)
    results += [_hypothesis(name, het, hom, cache) for name in THEOREMS[theorem][4]]
    return ConditionReport(theorem, tuple(results))


# -- scenarios -----------------------------------------------------------------------

@dataclass
class ScenarioReport:
    scenario_id: str
    theorem: str
    order: str
    hypotheses: ConditionReport
    checks: dict
    outcome: str
    expected: str
    conclusion_direction: str
    series: dict = field(repr=False, default_factory=dict)
    quantile_checks: dict | None = None

    @property
    def hypotheses_hold(self) -> bool:
        return self.hypotheses.all_pass

    @property
    def conclusion_holds(self) -> bool:
        return self.checks[self.conclusion_direction].holds

    @property
    def quadrant(self) -> str:
        h = "hypotheses hold" if self.hypotheses_hold else "hypotheses fail"
        c = "conclusion holds" if self.conclusion_holds else "conclusion fails"
        return f"{h} / {c}"

    @property
    def matches_expectation(self) -> bool:
        return self.expected in ("", None) or self.outcome == self.expected

    @property
    def criteria_agree(self) -> bool | None:
        if self.quantile_checks is None:
            return None
        return all(self.checks[d].status is self.quantile_checks[d].status for d in DIRECTIONS)


def run_scenario(scenario, grid=None, tol: float | None = None, quantile_check: bool = True) -> ScenarioReport:
    """Hypotheses plus both directions of the scenario's order check, with plot series."""
    tol = scenario.tol if tol is None else tol
    grid = grid if grid is not None else scenario.grid()
    het, hom = scenario.het, scenario.hom
    x = as_points(grid)
    series = {"x": x}
    if isinstance(grid, Grid):
        series["t"] = grid.t
    quantile_checks = None
    if scenario.order == "dispersive":
        checks = compare_dispersive(het, hom, grid, tol)
        diff, fa = dispersive_difference(het, hom, x)
        series.update(difference=diff, f_A=fa, g_B_composed=diff + fa)
        if quantile_check:
            quantile_checks = compare_dispersive_quantile(het, hom, probability_grid(het, grid), tol)
    elif scenario.order == "star":
        checks = compare_star(het, hom, grid, tol)
        ratio = checks["A<=B"].values
        series.update(ratio=ratio, slope=slope(x, ratio))
    else:
        raise ValueError(f"unknown order {scenario.order!r}")
    hyps = verify_hypotheses(scenario.theorem, scenario)
    return ScenarioReport(
        scenario_id=scenario.id,
        theorem=scenario.theorem,
        order=scenario.order,
        hypotheses=hyps,
        checks=checks,
        outcome=outcome(checks),
        expected=scenario.expected,
        conclusion_direction=THEOREMS[scenario.theorem][2],
        series=series,
        quantile_checks=quantile_checks,
    )
