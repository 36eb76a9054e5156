"""Archimedean generators: evaluation, inversion, derivatives and shape checks.

A generator ``phi`` maps [0, t_max) onto (0, 1] with ``phi(0) = 1``; it is
clamped to 0 from ``t_max`` on, so non-strict families (finite ``t_max``)
behave like their pseudo-inverse copulas. ``phi_inverse`` is the
right-continuous inverse on (0, 1].

Catalog families own a compiled kernel for the multivariate operations
(``combine`` and ``partials``); custom generators go through the generic
numpy path built from ``phi``, ``phi_inverse`` and ``derivative``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from poextremes import kernels
from poextremes.errors import DomainError, SingularityError
from poextremes.grids import Grid, as_points, bisect_increasing, support_grid, unit_grid
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

SHAPE_TOL = 1e-9
TINY = np.finfo(float).tiny


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)) or np.any(t < 0):
        raise DomainError("generator argument must be a non-negative number")
    return t


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if np.any(np.isnan(u)) or np.any(u <= 0) or np.any(u > 1):
        raise DomainError("generator inverse is defined on (0, 1]")
    return u


def _rows(u):
    u = np.asarray(u, dtype=float)
    return u[None, :] if u.ndim == 1 else u


class Generator:
    """Base class; subclasses provide the closed forms ``_phi``, ``_inv``, ``_d1``, ``_d2``."""

    family = "custom"
    kernel: int | None = None
    t_max = math.inf

    @property
    def params(self) -> tuple:
        return ()

    # -- closed forms, valid on [0, t_max) ------------------------------------
    def _phi(self, t):
        raise NotImplementedError

    def _inv(self, u):
        # bracketed root finding on [0, t_max]
        return bisect_increasing(lambda t: -self._phi(t), -u, (0.0, self.t_max))

    def _d1(self, t):
        h = 1e-5 * np.maximum(1.0, t)
        lo = np.maximum(t - h, 0.0)
        hi = t + h
        return (self._phi(hi) - self._phi(lo)) / (hi - lo)

    def _d2(self, t):
        h = 1e-4 * np.maximum(1.0, t)
        c = np.maximum(t, h)
        return (self._phi(c + h) - 2.0 * self._phi(c) + self._phi(c - h)) / (h * h)

    def _log_phi(self, t):
        return np.log(self._phi(t))

    def _ratio(self, t):
        return self._phi(t) / self._d1(t)

    # -- public evaluation ------------------------------------------------------
    def phi(self, t):
        t = _check_t(t)
        inside = t < self.t_max
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            val = self._phi(np.where(inside, t, 0.0))
        return np.where(inside, val, 0.0)[()]

    def phi_inverse(self, u):
        u = _check_u(u)
        with np.errstate(over="ignore"):
            return np.asarray(self._inv(u), dtype=float)[()]

    def derivative(self, t, order: int = 1):
        """phi'(t) or phi''(t); zero beyond ``t_max`` where phi is clamped."""
        if order not in (1, 2):
            raise ValueError("derivative order must be 1 or 2")
        t = _check_t(t)
        inside = t < self.t_max
        fn = self._d1 if order == 1 else self._d2
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            val = fn(np.where(inside, t, 0.0))
        return np.where(inside, val, 0.0)[()]

    def log_phi(self, t):
        t = _check_t(t)
        with np.errstate(divide="ignore"):
            return np.asarray(self._log_phi(t), dtype=float)[()]

    def phi_over_derivative(self, t):
        """phi(t) / phi'(t); raises :class:`SingularityError` where it is not finite.

        Families with a closed-form ratio stay finite where phi' underflows.
        """
        t = _check_t(t)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = np.asarray(self._ratio(t), dtype=float)
        bad = ~np.isfinite(np.atleast_1d(val))
        if bad.any():
            where = float(np.atleast_1d(t * np.ones_like(val))[bad][0])
            raise SingularityError(f"phi' vanishes at t={where!r}", where)
        return val[()]

    def phi_at_log(self, s):
        """phi(exp(s)); lets tail limits be probed far beyond float range of t."""
        with np.errstate(over="ignore"):
            return self.phi(np.exp(np.asarray(s, dtype=float)))

    # -- multivariate operations -----------------------------------------------
    def combine(self, u, weights=1.0):
        """phi(sum_j w_j phi^{-1}(u_j)) along the last axis of ``u``.

        With unit weights this is the copula C(u); with weights 1/n it is
        the generator mean that appears in the quantile compositions.
        """
        u = _rows(u)
        w = np.broadcast_to(np.asarray(weights, dtype=float), (u.shape[1],))
        if self.kernel is not None:
            return kernels.combine(self.kernel, self._kernel_param(), u, w)
        uc = np.clip(u, TINY, 1.0)
        with np.errstate(over="ignore"):
            total = np.sum(w * self.phi_inverse(uc).reshape(uc.shape), axis=1)
        return np.where(np.any(u <= 0, axis=1) & np.all(w > 0), 0.0, self.phi(total))

    def co_combine(self, c, weights=1.0):
        """1 - phi(sum_j w_j phi^{-1}(1 - c_j)) from the complements ``c``.

        Keeps relative precision when the combined level is close to 1,
        where forming ``1 - combine(1 - c)`` would cancel.
        """
        c = _rows(c)
        w = np.broadcast_to(np.asarray(weights, dtype=float), (c.shape[1],))
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = self._co_combine(np.clip(c, 0.0, 1.0), w)
        return np.clip(out, 0.0, 1.0)

    def _co_combine(self, c, w):
        return 1.0 - self.combine(1.0 - c, w)

    def partials(self, u):
        """dC/du_i = phi'(T) / phi'(phi^{-1}(u_i)), T = sum_j phi^{-1}(u_j)."""
        u = _rows(u)
        if self.kernel is not None:
            return kernels.partials(self.kernel, self._kernel_param(), u)
        uc = np.clip(u, TINY, 1.0)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            t = self.phi_inverse(uc).reshape(uc.shape)
            total = np.sum(t, axis=1, keepdims=True)
            out = self.derivative(np.broadcast_to(total, t.shape)) / self.derivative(t)
        return np.where(np.isfinite(out), out, 0.0)

    def diagonal_partial(self, p, n: int):
        """dC/du_1 of the n-variate copula on the diagonal (p, ..., p)."""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        return self.partials(np.repeat(p[:, None], n, axis=1))[:, 0]

    def _kernel_param(self) -> float:
        return float(self.params[0]) if self.params else 0.0

    def describe(self) -> str:
        if not self.params:
            return self.family
        return f"{self.family}({', '.join(f'{p:g}' for p in self.params)})"


@dataclass(frozen=True)
class Independence(Generator):
    """phi(t) = exp(-t): the product copula."""

    family = "independence"
    kernel = kernels.INDEPENDENCE

    def _phi(self, t):
        return np.exp(-t)

    def _inv(self, u):
        return -np.log(u)

    def _d1(self, t):
        return -np.exp(-t)

    def _d2(self, t):
        return np.exp(-t)

    def _log_phi(self, t):
        return -t

    def _ratio(self, t):
        return -np.ones_like(t)

    def phi_at_log(self, s):
        with np.errstate(over="ignore"):
            return np.exp(-np.exp(np.asarray(s, dtype=float)))

    def _co_combine(self, c, w):
        return -np.expm1(-np.sum(w * -np.log1p(-c), axis=1))


@dataclass(frozen=True)
class Nelsen4219(Generator):
    """phi(t) = a / log(t + e^a), a > 0 (Nelsen's family 4.2.19); strict."""

    a: float
    family = "nelsen-4-2-19"
    kernel = kernels.NELSEN_4_2_19

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise DomainError("nelsen-4-2-19 needs a > 0")

    @property
    def params(self):
        return (self.a,)

    def _log_shift(self, t):
        # log(t + e^a) without forming e^a
        return self.a + np.log1p(t * np.exp(-self.a))

    def _phi(self, t):
        return self.a / self._log_shift(t)

    def _inv(self, u):
        return np.exp(self.a) * np.expm1(self.a * (1.0 - u) / u)

    def _d1(self, t):
        lg = self._log_shift(t)
        return -self.a / ((t + np.exp(self.a)) * lg * lg)

    def _d2(self, t):
        lg = self._log_shift(t)
        s = t + np.exp(self.a)
        return self.a * (lg + 2.0) / (s * s * lg ** 3)

    def _log_phi(self, t):
        return math.log(self.a) - np.log(self._log_shift(t))

    def _ratio(self, t):
        return -(t + np.exp(self.a)) * self._log_shift(t)

    def phi_at_log(self, s):
        return self.a / np.logaddexp(np.asarray(s, dtype=float), self.a)

    def _co_combine(self, c, w):
        # in L = log(t + e^a): phi^{-1}(1 - c) maps to offset a c / (1 - c) and 1 - phi = (L - a) / L
        d = np.minimum(self.a * c / (1.0 - c), kernels.D_MAX)
        shift = kernels.log_shift(d, w)
        return shift / (self.a + shift)


@dataclass(frozen=True)
class Nelsen428(Generator):
    """phi(t) = (1 - t) / (1 + (lam - 1) t) on [0, 1], lam >= 1 (Nelsen's 4.2.8); non-strict."""

    lam: float
    family = "nelsen-4-2-8"
    kernel = kernels.NELSEN_4_2_8
    t_max = 1.0

    def __post_init__(self):
        if not (self.lam >= 1 and math.isfinite(self.lam)):
            raise DomainError("nelsen-4-2-8 needs lam >= 1")

    @property
    def params(self):
        return (self.lam,)

    def _phi(self, t):
        return (1.0 - t) / (1.0 + (self.lam - 1.0) * t)

    def _inv(self, u):
        # the map is an involution on [0, 1]
        return (1.0 - u) / (1.0 + (self.lam - 1.0) * u)

    def _d1(self, t):
        q = 1.0 + (self.lam - 1.0) * t
        return -self.lam / (q * q)

    def _d2(self, t):
        q = 1.0 + (self.lam - 1.0) * t
        return 2.0 * self.lam * (self.lam - 1.0) / q ** 3

    def _log_phi(self, t):
        return np.log1p(-t) - np.log1p((self.lam - 1.0) * t)

    def _ratio(self, t):
        return -(1.0 - t) * (1.0 + (self.lam - 1.0) * t) / self.lam

    def _co_combine(self, c, w):
        total = np.sum(w * c / (self.lam - (self.lam - 1.0) * c), axis=1)
        return np.where(total >= 1.0, 1.0, self.lam * total / (1.0 + (self.lam - 1.0) * total))


@dataclass(frozen=True, eq=False)
class CustomGenerator(Generator):
    """Extension slot: a generator from user callables.

    Missing inverse or derivatives fall back to bisection and central
    differences.
    """

    phi_fn: Callable
    t_max_value: float = math.inf
    inverse_fn: Callable | None = None
    d1_fn: Callable | None = None
    d2_fn: Callable | None = None
    name: str = "custom"
    kernel = None

    @property
    def family(self):
        return self.name

    @property
    def t_max(self):
        return self.t_max_value

    def _phi(self, t):
        return np.asarray(self.phi_fn(t), dtype=float)

    def _inv(self, u):
        if self.inverse_fn is not None:
            return np.asarray(self.inverse_fn(u), dtype=float)
        return super()._inv(u)

    def _d1(self, t):
        if self.d1_fn is not None:
            return np.asarray(self.d1_fn(t), dtype=float)
        return super()._d1(t)

    def _d2(self, t):
        if self.d2_fn is not None:
            return np.asarray(self.d2_fn(t), dtype=float)
        return super()._d2(t)


_REGISTRY: dict[str, Callable[..., Generator]] = {
    "independence": lambda: Independence(),
    "nelsen-4-2-19": lambda a: Nelsen4219(float(a)),
    "nelsen-4-2-8": lambda lam: Nelsen428(float(lam)),
}


def register_generator(name: str, factory: Callable[..., Generator]) -> None:
    _REGISTRY[name] = factory


def generator_families():
    return sorted(_REGISTRY)


def make_generator(family: str, params=()) -> Generator:
    try:
        factory = _REGISTRY[family]
    except KeyError:
        raise ValueError(
            f"unknown generator family {family!r}; known: {', '.join(generator_families())}"
        ) from None
    try:
        return factory(*params)
    except TypeError as exc:
        raise ValueError(f"wrong parameters for generator {family!r}: {exc}") from None


# -- shape checks ---------------------------------------------------------------

def generator_grid(gen: Generator, points: int = 400) -> Grid:
    """Interior grid of (0, t_max)."""
    if math.isfinite(gen.t_max):
        return support_grid((0.0, gen.t_max), points, reparam="linear")
    return support_grid((0.0, math.inf), points, reparam="odds")


def _midpoint(fn, pts, shape: str, stride: int) -> Verdict:
    if shape not in ("convex", "concave"):
        raise ValueError("shape must be 'convex' or 'concave'")
    pts = np.sort(pts)
    if len(pts) <= stride:
        raise ValueError("grid too small for the requested stride")
    s, t = pts[:-stride], pts[stride:]
    mid = 0.5 * (s + t)
    with np.errstate(divide="ignore", invalid="ignore"):
        fs, ft, fm = fn(s), fn(t), fn(mid)
    # convex: f(mid) <= (f(s) + f(t)) / 2
    excess = fm - 0.5 * (fs + ft)
    if shape == "concave":
        excess = -excess
    tol = SHAPE_TOL * (1.0 + np.abs(fm))
    return one_sided(excess, tol, np.column_stack([s, t]))


def check_log_shape(gen: Generator, grid=None, shape: str = "convex", stride: int = 4) -> Verdict:
    """Midpoint test of log-convexity / log-concavity on grid pairs ``stride`` apart."""
    pts = as_points(grid if grid is not None else generator_grid(gen))
    return _midpoint(gen.log_phi, pts, shape, stride)


def check_ratio_shape(gen: Generator, grid=None, shape: str = "concave", stride: int = 4) -> Verdict:
    """Midpoint test of the shape of t -> phi(t)/phi'(t)."""
    pts = as_points(grid if grid is not None else generator_grid(gen))
    gen.phi_over_derivative(pts)  # singularity check on the grid itself
    return _midpoint(gen.phi_over_derivative, pts, shape, stride)


def cross_ratio(gen1: Generator, gen2: Generator, n: int, t, direction: str = "g2-over-g1"):
    """phi2(phi2^{-1}(t)/n) / phi1(phi1^{-1}(t)/n), or its reciprocal."""
    t = np.asarray(t, dtype=float)
    r1 = gen1.combine(t[:, None], 1.0 / n)
    r2 = gen2.combine(t[:, None], 1.0 / n)
    if direction == "g2-over-g1":
        return r2 / r1
    if direction == "g1-over-g2":
        return r1 / r2
    raise ValueError("direction must be 'g2-over-g1' or 'g1-over-g2'")


def check_cross_generator(gen1: Generator, gen2: Generator, n: int, grid=None,
                          direction: str = "g2-over-g1") -> Verdict:
    """Is the cross-generator ratio increasing in t on (0, 1)?"""
    pts = as_points(grid if grid is not None else unit_grid(1000))
    if np.any(pts <= 0) or np.any(pts >= 1):
        raise ValueError("cross-generator grid must lie inside (0, 1)")
    ratio = cross_ratio(gen1, gen2, n, pts, direction)
    return trend_verdict(monotone_trend(pts, ratio, SHAPE_TOL), Trend.INCREASING)


def check_generator_validity(gen: Generator, n: int, grid=None) -> ConditionReport:
    """phi(0) = 1, phi >= 0, phi -> 0, strictly decreasing, convex, derivative signs.

    Derivative signs (-1)^k phi^(k) >= 0 are checked for k <= min(n - 2, 2).
    Checks are pointwise on the grid: a generator that reaches zero at a finite
    point (4.2.8) has a kink there, which is not examined, so passing is not a
    certificate of n-monotonicity.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    pts = np.sort(as_points(grid if grid is not None else generator_grid(gen)))
    if pts.size < 2:
        raise ValueError("grid must contain points")
    with np.errstate(all="ignore"):
        raw = np.asarray(gen._phi(pts), dtype=float)
    results = []

    at0 = float(gen.phi(0.0))
    ok = abs(at0 - 1.0) <= 1e-12
    results.append(HypothesisResult(
        "phi(0) = 1", Verdict(Status.HOLDS if ok else Status.VIOLATED,
                              () if ok else ((0.0, at0 - 1.0),), abs(at0 - 1.0)),
        f"phi(0) = {at0!r}"))

    neg = raw < -1e-12
    results.append(HypothesisResult(
        "0 <= phi <= 1",
        Verdict(Status.VIOLATED, tuple(zip(pts[neg].tolist(), raw[neg].tolist())),
                float(-raw[neg].min())) if neg.any() or np.any(raw > 1 + 1e-12)
        else Verdict(Status.HOLDS),
        f"min phi on grid = {raw.min():.3g}"))

    if math.isfinite(gen.t_max):
        with np.errstate(all="ignore"):
            end = float(gen._phi(np.asarray(gen.t_max)))
        ok = abs(end) <= 1e-12
        evidence = f"phi(t_max={gen.t_max:g}) = {end:.3g}"
    else:
        s = np.linspace(0.0, 1e12, 4001)
        tail = np.asarray(gen.phi_at_log(s))
        end = float(np.min(tail))
        ok = end < 1e-9
        evidence = f"min phi(e^s), s <= 1e12: {end:.3g}"
    results.append(HypothesisResult(
        "phi -> 0", Verdict(Status.HOLDS if ok else Status.VIOLATED,
                            () if ok else ((gen.t_max, end),), abs(end)), evidence))

    d = np.diff(raw)
    bad = ~(d < 0)
    results.append(HypothesisResult(
        "strictly decreasing",
        Verdict(Status.VIOLATED, tuple(zip(pts[1:][bad].tolist(), d[bad].tolist())),
                float(np.max(d[bad]))) if bad.any() else Verdict(Status.HOLDS),
        f"{int(bad.sum())} non-decreasing steps"))

    results.append(HypothesisResult(
        "convex", _midpoint(lambda t: np.asarray(gen._phi(t), dtype=float), pts, "convex", 1),
        "midpoint test, stride 1"))

    top = min(n - 2, 2)
    if top >= 1:
        bad_sign = []
        for k in range(1, top + 1):
            val = np.asarray(gen.derivative(pts, k)) * (-1) ** k
            wrong = val < -SHAPE_TOL * (1.0 + np.abs(val))
            bad_sign += list(zip(pts[wrong].tolist(), val[wrong].tolist()))
        results.append(HypothesisResult(
            f"(-1)^k phi^(k) >= 0, k <= {top}",
            Verdict(Status.VIOLATED, tuple(bad_sign)) if bad_sign else Verdict(Status.HOLDS),
            f"{len(bad_sign)} sign violations"))
    return ConditionReport(f"generator validity ({gen.describe()}, n={n})", tuple(results))
