"""Baseline lifetime distributions on explicit supports.

Every family provides survival, cdf, density, hazard ``r = f / sf`` and
reversed hazard ``r~ = f / cdf`` in closed form, plus quantiles on both the
cdf and the survival scale. Functions are vectorised; the public methods
check that ``x`` lies in the closed support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from poextremes.errors import DomainError, EndpointError, ScenarioError
from poextremes.grids import Grid, as_points, bisect_increasing, support_grid
from poextremes.verdicts import Trend, TrendReport, monotone_trend

AGING_TOL = 1e-9
BISECT_ITERS = 200
E = math.e


def _ratio(num, den, what: str):
    """num / den with x / 0 -> inf and 0 / 0 -> :class:`EndpointError`."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    if np.any((den == 0) & (num == 0)):
        raise EndpointError(f"{what} is 0/0 at a support endpoint")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    return np.where(den == 0, np.inf, out)


class Baseline:
    """Base class. Subclasses implement ``_sf``, ``_cdf``, ``_pdf`` and
    optionally closed-form ``_hazard``, ``_rhazard``, ``_isf``, ``_ppf``."""

    family = "custom"
    natural_support = (-math.inf, math.inf)

    def __init__(self, params=(), support=None):
        self.params = tuple(float(p) for p in params)
        self.support = self._resolve_support(support)

    # -- support -----------------------------------------------------------------
    def _resolve_support(self, support):
        if support is None:
            return tuple(self.natural_support)
        lo, hi = (float(s) for s in support)
        if not lo < hi:
            raise ScenarioError("support", f"empty support interval ({lo}, {hi})")
        nlo, nhi = self.natural_support
        if lo < nlo or hi > nhi:
            raise ScenarioError("support", f"({lo}, {hi}) leaves the natural support ({nlo}, {nhi})")
        # an override may only restate the support, never truncate mass away
        with np.errstate(all="ignore"):
            left = float(self._cdf(np.asarray(lo))) if math.isfinite(lo) else 0.0
            right = float(self._sf(np.asarray(hi))) if math.isfinite(hi) else 0.0
        if left > 1e-9 or right > 1e-9:
            raise ScenarioError("support", f"({lo}, {hi}) drops probability mass "
                                           f"(F(lo)={left:.3g}, 1-F(hi)={right:.3g})")
        return (lo, hi)

    def in_support(self, x):
        lo, hi = self.support
        x = np.asarray(x, dtype=float)
        return (x >= lo) & (x <= hi)

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(np.isnan(x)) or not np.all(self.in_support(x)):
            raise DomainError(f"x outside the support {self.support} of {self.describe()}")
        return x

    # -- closed forms (override) -------------------------------------------------
    def _sf(self, x):
        return 1.0 - self._cdf(x)

    def _cdf(self, x):
        return 1.0 - self._sf(x)

    def _pdf(self, x):
        raise NotImplementedError

    def _hazard(self, x):
        return _ratio(self._pdf(x), self._sf(x), "hazard")

    def _rhazard(self, x):
        return _ratio(self._pdf(x), self._cdf(x), "reversed hazard")

    def _isf(self, s):
        return bisect_increasing(lambda x: -self._sf(x), -np.asarray(s), self.support, BISECT_ITERS)

    def _ppf(self, v):
        return bisect_increasing(self._cdf, v, self.support, BISECT_ITERS)

    # -- public --------------------------------------------------------------------
    def sf(self, x):
        return self._eval(self._sf, x)

    def cdf(self, x):
        return self._eval(self._cdf, x)

    def pdf(self, x):
        return self._eval(self._pdf, x)

    def hazard(self, x):
        return self._eval(self._hazard, x)

    def rhazard(self, x):
        return self._eval(self._rhazard, x)

    def odds(self, x):
        """Survival odds sf / cdf (inf where cdf = 0)."""
        x = self._check(x)
        return _ratio(self._sf(x), self._cdf(x), "odds")[()]

    def _eval(self, fn, x):
        x = self._check(x)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.asarray(fn(x), dtype=float)[()]

    def isf(self, s):
        """Survival-scale quantile on [0, 1]; endpoints map to the support ends."""
        s = np.asarray(s, dtype=float)
        if np.any(np.isnan(s)) or np.any((s < 0) | (s > 1)):
            raise DomainError("survival level must lie in [0, 1]")
        lo, hi = self.support
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            x = np.asarray(self._isf(s), dtype=float)
        x = np.where(s >= 1, lo, np.where(s <= 0, hi, x))
        return np.clip(x, lo, hi)[()]

    def ppf(self, v):
        """Cdf-scale quantile on [0, 1]; endpoints map to the support ends."""
        v = np.asarray(v, dtype=float)
        if np.any(np.isnan(v)) or np.any((v < 0) | (v > 1)):
            raise DomainError("probability must lie in [0, 1]")
        lo, hi = self.support
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            x = np.asarray(self._ppf(v), dtype=float)
        x = np.where(v <= 0, lo, np.where(v >= 1, hi, x))
        return np.clip(x, lo, hi)[()]

    def quantile(self, u, scale: str = "cdf"):
        """F^{-1}(u) (``scale='cdf'``) or sf^{-1}(u) (``scale='survival'``), u in (0, 1)."""
        u = np.asarray(u, dtype=float)
        if np.any(np.isnan(u)) or np.any((u <= 0) | (u >= 1)):
            raise DomainError("quantile level must lie in (0, 1)")
        if scale == "cdf":
            return self.ppf(u)
        if scale == "survival":
            return self.isf(u)
        raise ValueError("scale must be 'cdf' or 'survival'")

    def grid(self, points: int = 2000, trim: float = 1e-3, reparam=None) -> Grid:
        return support_grid(self.support, points, trim, reparam)

    def describe(self) -> str:
        args = ", ".join(f"{p:g}" for p in self.params)
        return f"{self.family}({args})"

    def __repr__(self):
        return f"<{self.describe()} on {self.support}>"

    def __eq__(self, other):
        return (isinstance(other, Baseline) and type(self) is type(other)
                and self.family == other.family and self.params == other.params
                and self.support == other.support)

    def __hash__(self):
        return hash((self.family, self.params, self.support))


def _positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")


class WeibullSurvival(Baseline):
    """sf(x) = exp(-(c x)^k) on [0, inf)."""

    family = "weibull-survival"
    natural_support = (0.0, math.inf)

    def __init__(self, c, k, support=None):
        _positive("c", c)
        _positive("k", k)
        self.c, self.k = float(c), float(k)
        super().__init__((c, k), support)

    def _z(self, x):
        return (self.c * x) ** self.k

    def _sf(self, x):
        return np.exp(-self._z(x))

    def _cdf(self, x):
        return -np.expm1(-self._z(x))

    def _hazard(self, x):
        return self.k * self.c * (self.c * x) ** (self.k - 1.0)

    def _pdf(self, x):
        return self._hazard(x) * self._sf(x)

    def _rhazard(self, x):
        z = self._z(x)
        # f / F = h e^{-z} / (1 - e^{-z}) = h / expm1(z)
        return _ratio(self._hazard(x), np.expm1(z), "reversed hazard")

    def _isf(self, s):
        return (-np.log(s)) ** (1.0 / self.k) / self.c

    def _ppf(self, v):
        return (-np.log1p(-v)) ** (1.0 / self.k) / self.c


class ExpRoot(WeibullSurvival):
    """cdf(x) = 1 - exp(-(c x)^k); the same law as ``weibull-survival``, written on the cdf scale."""

    family = "exp-root"


class ParetoLomax(Baseline):
    """sf(x) = (1 + x / sigma)^(-theta) on [0, inf)."""

    family = "pareto-lomax"
    natural_support = (0.0, math.inf)

    def __init__(self, sigma, theta, support=None):
        _positive("sigma", sigma)
        _positive("theta", theta)
        self.sigma, self.theta = float(sigma), float(theta)
        super().__init__((sigma, theta), support)

    def _log1p(self, x):
        return np.log1p(x / self.sigma)

    def _sf(self, x):
        return np.exp(-self.theta * self._log1p(x))

    def _cdf(self, x):
        return -np.expm1(-self.theta * self._log1p(x))

    def _hazard(self, x):
        return self.theta / (self.sigma + x)

    def _pdf(self, x):
        return self._hazard(x) * self._sf(x)

    def _rhazard(self, x):
        return _ratio(self._hazard(x), np.expm1(self.theta * self._log1p(x)), "reversed hazard")

    def _isf(self, s):
        return self.sigma * np.expm1(-np.log(s) / self.theta)

    def _ppf(self, v):
        return self.sigma * np.expm1(-np.log1p(-v) / self.theta)


class PowerPareto(Baseline):
    """sf(x) = x^(-p) on [1, inf)."""

    family = "power-pareto"
    natural_support = (1.0, math.inf)

    def __init__(self, p, support=None):
        _positive("p", p)
        self.p = float(p)
        super().__init__((p,), support)

    def _sf(self, x):
        return x ** (-self.p)

    def _cdf(self, x):
        return -np.expm1(-self.p * np.log(x))

    def _hazard(self, x):
        return self.p / x

    def _pdf(self, x):
        return self.p * x ** (-self.p - 1.0)

    def _rhazard(self, x):
        return _ratio(self._hazard(x), np.expm1(self.p * np.log(x)), "reversed hazard")

    def _isf(self, s):
        return s ** (-1.0 / self.p)

    def _ppf(self, v):
        return np.exp(-np.log1p(-v) / self.p)


class NegativeWeibull(Baseline):
    """cdf(x) = exp(-(-c x)^k) on (-inf, 0]: a reversed Weibull with upper end 0."""

    family = "negative-weibull"
    natural_support = (-math.inf, 0.0)

    def __init__(self, c, k, support=None):
        _positive("c", c)
        _positive("k", k)
        self.c, self.k = float(c), float(k)
        super().__init__((c, k), support)

    def _z(self, x):
        return (-self.c * x) ** self.k

    def _cdf(self, x):
        return np.exp(-self._z(x))

    def _sf(self, x):
        return -np.expm1(-self._z(x))

    def _rhazard(self, x):
        return self.k * self.c * (-self.c * x) ** (self.k - 1.0)

    def _pdf(self, x):
        return self._rhazard(x) * self._cdf(x)

    def _hazard(self, x):
        return _ratio(self._rhazard(x), np.expm1(self._z(x)), "hazard")

    def _ppf(self, v):
        return -((-np.log(v)) ** (1.0 / self.k)) / self.c

    def _isf(self, s):
        return -((-np.log1p(-s)) ** (1.0 / self.k)) / self.c


class TruncatedExpGrowth(Baseline):
    """cdf(x) = (e^x - 1) / (e - 1) on [0, 1]."""

    family = "truncated-exp-growth"
    natural_support = (0.0, 1.0)

    def __init__(self, support=None):
        super().__init__((), support)

    def _cdf(self, x):
        return np.minimum(np.expm1(x) / (E - 1.0), 1.0)

    def _sf(self, x):
        # (e - e^x) / (e - 1) = e (1 - e^{x-1}) / (e - 1)
        return np.minimum(-E * np.expm1(x - 1.0) / (E - 1.0), 1.0)

    def _pdf(self, x):
        return np.exp(x) / (E - 1.0)

    def _rhazard(self, x):
        return _ratio(np.exp(x), np.expm1(x), "reversed hazard")

    def _hazard(self, x):
        return _ratio(np.exp(x), -E * np.expm1(x - 1.0), "hazard")

    def _ppf(self, v):
        return np.log1p(v * (E - 1.0))

    def _isf(self, s):
        return 1.0 + np.log1p(-s * (1.0 - 1.0 / E))


class CustomBaseline(Baseline):
    """Extension slot: a baseline from user callables for sf and pdf.

    ``cdf``, ``isf`` and ``ppf`` are optional; quantiles fall back to bisection.
    """

    def __init__(self, sf, pdf, support, cdf=None, isf=None, ppf=None,
                 name: str = "custom", params=()):
        self.family = name
        self.natural_support = tuple(float(s) for s in support)
        self._sf_fn, self._pdf_fn, self._cdf_fn = sf, pdf, cdf
        self._isf_fn, self._ppf_fn = isf, ppf
        super().__init__(params, support)

    def _sf(self, x):
        return np.asarray(self._sf_fn(x), dtype=float)

    def _cdf(self, x):
        if self._cdf_fn is not None:
            return np.asarray(self._cdf_fn(x), dtype=float)
        return 1.0 - self._sf(x)

    def _pdf(self, x):
        return np.asarray(self._pdf_fn(x), dtype=float)

    def _isf(self, s):
        if self._isf_fn is not None:
            return self._isf_fn(s)
        return super()._isf(s)

    def _ppf(self, v):
        if self._ppf_fn is not None:
            return self._ppf_fn(v)
        return super()._ppf(v)

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


_REGISTRY: dict[str, Callable[..., Baseline]] = {
    "weibull-survival": WeibullSurvival,
    "exp-root": ExpRoot,
    "pareto-lomax": ParetoLomax,
    "power-pareto": PowerPareto,
    "negative-weibull": NegativeWeibull,
    "truncated-exp-growth": TruncatedExpGrowth,
}


def register_baseline(name: str, factory: Callable[..., Baseline]) -> None:
    _REGISTRY[name] = factory


def baseline_families():
    return sorted(_REGISTRY)


def make_baseline(family: str, params=(), support=None) -> Baseline:
    try:
        factory = _REGISTRY[family]
    except KeyError:
        raise ValueError(
            f"unknown baseline family {family!r}; known: {', '.join(baseline_families())}"
        ) from None
    try:
        return factory(*params, support=support)
    except TypeError as exc:
        raise ValueError(f"wrong parameters for baseline {family!r}: {exc}") from None


@dataclass(frozen=True)
class EvalRecord:
    x: float
    cdf: float
    survival: float
    density: float
    hazard: float
    reversed_hazard: float
    odds: float


def evaluate(dist: Baseline, x: float) -> EvalRecord:
    """All pointwise quantities at a single ``x`` of the closed support."""
    x = float(dist._check(x))
    return EvalRecord(
        x=x,
        cdf=float(dist.cdf(x)),
        survival=float(dist.sf(x)),
        density=float(dist.pdf(x)),
        hazard=float(dist.hazard(x)),
        reversed_hazard=float(dist.rhazard(x)),
        odds=float(dist.odds(x)),
    )


def quantile(dist: Baseline, u, scale: str = "cdf"):
    return dist.quantile(u, scale)


@dataclass(frozen=True)
class AgingReport:
    """Monotonicity of r, r~, x r and x r~ on a grid."""

    hazard: Trend
    reversed_hazard: Trend
    x_hazard: Trend
    x_reversed_hazard: Trend
    details: dict = field(default_factory=dict, repr=False, compare=False)

    def classes(self) -> set:
        """Aging labels implied by the trends (a constant trend implies both directions)."""
        out = set()
        pairs = [
            (self.hazard, "IFR", "DFR"),
            (self.reversed_hazard, "IRHR", "DRHR"),
            (self.x_hazard, "x*r increasing", "x*r decreasing"),
            (self.x_reversed_hazard, "x*r~ increasing", "x*r~ decreasing"),
        ]
        for trend, up, down in pairs:
            if trend.satisfies(Trend.INCREASING):
                out.add(up)
            if trend.satisfies(Trend.DECREASING):
                out.add(down)
        return out


def aging_curves(dist: Baseline, x):
    x = dist._check(x)
    r = np.asarray(dist.hazard(x), dtype=float)
    rt = np.asarray(dist.rhazard(x), dtype=float)
    return {"hazard": r, "reversed_hazard": rt, "x_hazard": x * r, "x_reversed_hazard": x * rt}


def classify_aging(dist: Baseline, grid=None) -> AgingReport:
    """Trend of each aging curve; steps below 1e-9 (1 + |level|) count as flat."""
    x = as_points(grid if grid is not None else dist.grid())
    lo, hi = dist.support
    if np.any(x <= lo) or np.any(x >= hi):
        raise DomainError("aging grid must lie inside the open support")
    curves = aging_curves(dist, x)
    details: dict[str, TrendReport] = {
        name: monotone_trend(x, y, AGING_TOL) for name, y in curves.items()
    }
    return AgingReport(
        details["hazard"].trend,
        details["reversed_hazard"].trend,
        details["x_hazard"].trend,
        details["x_reversed_hazard"].trend,
        details,
    )
