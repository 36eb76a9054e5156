"""Scenario files: a heterogeneous sample X, a homogeneous sample Y and the
order comparison to run between their extremes.

Schema (TOML)::

    id = "ex5.1"
    figure = "fig3"                # optional alias
    description = "..."
    kind = "min"                   # min | max
    order = "dispersive"           # dispersive | star
    theorem = "3.1"                # result whose hypotheses are checked
    expected = "A<=B"              # A<=B | A>=B | equal | neither (optional)
    tol = 1e-8                     # optional
    notes = ["..."]                # optional

    [baseline]
    family = "weibull-survival"
    params = [1.0, 0.3]
    support = [0.0, "inf"]         # optional override

    [sample_x]
    alphas = [0.34, 0.65, 1.23]
    generator = { family = "nelsen-4-2-19", params = [5.0] }

    [sample_y]
    alpha = 0.88
    n = 3                          # optional, defaults to len(sample_x.alphas)
    generator = { ... }            # optional, defaults to sample_x's generator

    [grid]                         # optional
    reparam = "odds"
    points = 2000
    trim = 1e-3
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from poextremes.baselines import Baseline, make_baseline
from poextremes.errors import ScenarioError
from poextremes.extremes import ExtremeDistribution, POSampleSpec
from poextremes.generators import Generator, make_generator
from poextremes.grids import DEFAULT_POINTS, DEFAULT_TRIM, Grid, support_grid

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

KINDS = ("min", "max")
ORDERS = ("dispersive", "star")
EXPECTATIONS = ("", "A<=B", "A>=B", "equal", "neither")


@dataclass(frozen=True)
class Scenario:
    id: str
    kind: str
    order: str
    theorem: str
    baseline: Baseline
    alphas: tuple
    generator_x: Generator
    alpha: float
    n: int
    generator_y: Generator
    figure: str = ""
    description: str = ""
    expected: str = ""
    tol: float = 1e-8
    grid_reparam: str | None = None
    grid_points: int = DEFAULT_POINTS
    grid_trim: float = DEFAULT_TRIM
    notes: tuple = ()
    source: str = field(default="", compare=False)

    @property
    def sample_x(self) -> POSampleSpec:
        return POSampleSpec(self.baseline, self.alphas, self.generator_x)

    @property
    def sample_y(self) -> POSampleSpec:
        return POSampleSpec.homogeneous_sample(self.baseline, self.alpha, self.n, self.generator_y)

    @property
    def het(self) -> ExtremeDistribution:
        return ExtremeDistribution(self.kind, self.sample_x)

    @property
    def hom(self) -> ExtremeDistribution:
        return ExtremeDistribution(self.kind, self.sample_y)

    def grid(self, points: int | None = None) -> Grid:
        return support_grid(self.baseline.support, points or self.grid_points,
                            self.grid_trim, self.grid_reparam)


def _num(value, where):
    if isinstance(value, str):
        low = value.strip().lower()
        if low in ("inf", "+inf", "infinity"):
            return math.inf
        if low in ("-inf", "-infinity"):
            return -math.inf
        try:
            # plain fractions such as "281/4"
            if "/" in low:
                a, b = low.split("/")
                return float(a) / float(b)
            return float(low)
        except ValueError:
            raise ScenarioError(where, f"not a number: {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(where, f"not a number: {value!r}")
    return float(value)


def _nums(value, where):
    if not isinstance(value, list):
        raise ScenarioError(where, "expected a list of numbers")
    return tuple(_num(v, f"{where}[{i}]") for i, v in enumerate(value))


def _table(data, key, where, required=True):
    val = data.get(key)
    if val is None:
        if required:
            raise ScenarioError(f"{where}{key}", "missing table")
        return {}
    if not isinstance(val, dict):
        raise ScenarioError(f"{where}{key}", "expected a table")
    return val


def _generator(spec, where):
    if not isinstance(spec, dict) or "family" not in spec:
        raise ScenarioError(where, "expected a table with a 'family' key")
    try:
        return make_generator(spec["family"], _nums(spec.get("params", []), f"{where}.params"))
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(where, str(exc)) from None


def _choice(data, key, options, default=None):
    val = data.get(key, default)
    if val is None:
        raise ScenarioError(key, "missing field")
    if val not in options:
        raise ScenarioError(key, f"{val!r} is not one of {', '.join(o for o in options if o)}")
    return val


def scenario_from_dict(data: dict, source: str = "") -> Scenario:
    """Validate a parsed scenario document; errors name the offending field."""
    from poextremes.order_checks import THEOREMS

    if not isinstance(data.get("id"), str) or not data["id"]:
        raise ScenarioError("id", "missing or empty scenario id")
    kind = _choice(data, "kind", KINDS)
    order = _choice(data, "order", ORDERS)
    theorem = _choice(data, "theorem", tuple(THEOREMS))
    expected = _choice(data, "expected", EXPECTATIONS, "")

    base = _table(data, "baseline", "")
    if "family" not in base:
        raise ScenarioError("baseline.family", "missing field")
    support = None
    if "support" in base:
        support = _nums(base["support"], "baseline.support")
        if len(support) != 2:
            raise ScenarioError("baseline.support", "expected [lo, hi]")
    try:
        baseline = make_baseline(base["family"], _nums(base.get("params", []), "baseline.params"), support)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError("baseline", str(exc)) from None

    sx = _table(data, "sample_x", "")
    if "alphas" not in sx:
        raise ScenarioError("sample_x.alphas", "missing field")
    alphas = _nums(sx["alphas"], "sample_x.alphas")
    if len(alphas) < 2:
        raise ScenarioError("sample_x.alphas", "need at least two components")
    if not all(a > 0 and math.isfinite(a) for a in alphas):
        raise ScenarioError("sample_x.alphas", "odds ratios must be positive and finite")
    gen_x = _generator(sx.get("generator"), "sample_x.generator")

    sy = _table(data, "sample_y", "")
    if "alpha" not in sy:
        raise ScenarioError("sample_y.alpha", "missing field")
    alpha = _num(sy["alpha"], "sample_y.alpha")
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ScenarioError("sample_y.alpha", "odds ratio must be positive and finite")
    n = sy.get("n", len(alphas))
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ScenarioError("sample_y.n", "expected an integer >= 2")
    gen_y = _generator(sy["generator"], "sample_y.generator") if "generator" in sy else gen_x

    grid = _table(data, "grid", "", required=False)
    points = grid.get("points", DEFAULT_POINTS)
    if isinstance(points, bool) or not isinstance(points, int) or points < 10:
        raise ScenarioError("grid.points", "expected an integer >= 10")
    trim = _num(grid.get("trim", DEFAULT_TRIM), "grid.trim")
    if not 0 < trim < 0.5:
        raise ScenarioError("grid.trim", "expected 0 < trim < 0.5")
    reparam = grid.get("reparam")
    try:
        support_grid(baseline.support, 10, trim, reparam)
    except ValueError as exc:
        raise ScenarioError("grid.reparam", str(exc)) from None

    tol = _num(data.get("tol", 1e-8), "tol")
    if not tol > 0:
        raise ScenarioError("tol", "tolerance must be positive")
    notes = data.get("notes", [])
    if not isinstance(notes, list) or not all(isinstance(s, str) for s in notes):
        raise ScenarioError("notes", "expected a list of strings")

    return Scenario(
        id=data["id"], kind=kind, order=order, theorem=theorem, baseline=baseline,
        alphas=alphas, generator_x=gen_x, alpha=alpha, n=n, generator_y=gen_y,
        figure=str(data.get("figure", "")), description=str(data.get("description", "")),
        expected=expected, tol=tol, grid_reparam=reparam, grid_points=points,
        grid_trim=trim, notes=tuple(notes), source=source,
    )


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError("<file>", f"TOML syntax error: {exc}") from None
    return scenario_from_dict(data, source)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError("<file>", f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))


def _registry_files():
    root = resources.files("poextremes") / "scenarios"
    return sorted((p for p in root.iterdir() if p.name.endswith(".toml")), key=lambda p: p.name)


def registry() -> dict:
    """All packaged scenarios keyed by id."""
    out = {}
    for entry in _registry_files():
        sc = parse_scenario(entry.read_text(encoding="utf-8"), entry.name)
        out[sc.id] = sc
    return out


def figure_map() -> dict:
    return {sc.figure: sc.id for sc in registry().values() if sc.figure}


def get_scenario(key: str) -> Scenario:
    """Look up a packaged scenario by id or figure alias."""
    reg = registry()
    if key in reg:
        return reg[key]
    for sc in reg.values():
        if sc.figure == key:
            return sc
    known = sorted(list(reg) + [sc.figure for sc in reg.values() if sc.figure])
    raise KeyError(f"unknown scenario or figure {key!r}; known: {', '.join(known)}")
