"""Sample minima and maxima of PO marginals coupled by an Archimedean copula.

For a sample with marginal survival levels ``s_i(x)`` (cdf levels ``v_i(x)``)
the minimum has survival ``C(s_1, ..., s_n)`` and the maximum has cdf
``C(v_1, ..., v_n)``, where ``C(u) = phi(sum phi^{-1}(u_i))``. Densities use
the copula partials; quantile compositions between a heterogeneous and a
homogeneous sample go through a closed-form inner level (``gamma`` / ``eta``
on the survival scale for minima, ``beta`` / ``zeta`` on the cdf scale for
maxima).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from poextremes.baselines import Baseline
from poextremes.errors import DomainError
from poextremes.generators import Generator
from poextremes.grids import bisect_increasing
from poextremes.po_model import POMarginal, cdf_level_for, survival_level_for

KINDS = ("min", "max")


@dataclass(frozen=True)
class POSampleSpec:
    baseline: Baseline
    alphas: tuple
    generator: Generator

    def __post_init__(self):
        alphas = tuple(float(a) for a in np.atleast_1d(self.alphas))
        if len(alphas) < 2:
            raise ValueError("a sample needs n >= 2 components")
        if not all(a > 0 and math.isfinite(a) for a in alphas):
            raise DomainError("every proportional odds ratio must be positive and finite")
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def homogeneous_sample(cls, baseline, alpha, n, generator):
        return cls(baseline, (float(alpha),) * int(n), generator)

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def homogeneous(self) -> bool:
        return all(a == self.alphas[0] for a in self.alphas)

    @property
    def alpha_mean(self) -> float:
        return float(np.mean(self.alphas))

    def marginals(self):
        return [POMarginal(self.baseline, a) for a in self.alphas]


@dataclass(frozen=True)
class ExtremeDistribution:
    """Law of the sample minimum (``kind='min'``) or maximum (``kind='max'``)."""

    kind: str
    sample: POSampleSpec

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("kind must be 'min' or 'max'")

    @property
    def baseline(self) -> Baseline:
        return self.sample.baseline

    @property
    def generator(self) -> Generator:
        return self.sample.generator

    @property
    def support(self):
        return self.baseline.support

    # -- marginal levels -------------------------------------------------------------
    def _marginal_parts(self, x, complement: bool = False):
        """(levels, level densities) per component, shape (m, n).

        Levels are survival levels for minima and cdf levels for maxima;
        ``complement=True`` returns one minus those, computed directly.
        """
        x = np.atleast_1d(self.baseline._check(x))
        b = self.baseline
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            s = np.asarray(b.sf(x), dtype=float).reshape(-1, 1)
            v = np.asarray(b.cdf(x), dtype=float).reshape(-1, 1)
            f = np.asarray(b.pdf(x), dtype=float).reshape(-1, 1)
        a = np.asarray(self.sample.alphas)
        den = v + a * s
        survival_side = (self.kind == "min") != complement
        levels = a * s / den if survival_side else v / den
        dens = a * f / (den * den)
        return levels, dens

    def levels(self, x):
        return self._marginal_parts(x)[0]

    def _joint(self, x):
        """min: survival of the minimum; max: cdf of the maximum."""
        levels, _ = self._marginal_parts(x)
        return self.generator.combine(levels)

    def _co_joint(self, x):
        """One minus :meth:`_joint`, precise where that is small."""
        co, _ = self._marginal_parts(x, complement=True)
        return self.generator.co_combine(co)

    # -- distribution functions ----------------------------------------------------
    def _shape(self, x, out):
        return out.reshape(np.shape(x))[()] if np.ndim(x) else float(out[0])

    def sf(self, x):
        return self._shape(x, self._joint(x) if self.kind == "min" else self._co_joint(x))

    def cdf(self, x):
        return self._shape(x, self._co_joint(x) if self.kind == "min" else self._joint(x))

    def pdf(self, x):
        levels, dens = self._marginal_parts(x)
        part = self.generator.partials(levels)
        with np.errstate(invalid="ignore"):
            terms = np.where(dens == 0, 0.0, part * dens)
        return self._shape(x, np.sum(terms, axis=1))

    # -- quantiles -----------------------------------------------------------------
    def _closed_form(self, level):
        """Homogeneous inversion: component level p = phi(phi^{-1}(level)/n)."""
        a = self.sample.alphas[0]
        lv = np.atleast_1d(np.asarray(level, dtype=float))
        p = self.generator.combine(lv[:, None], 1.0 / self.sample.n)
        if self.kind == "min":
            return self.baseline.isf(np.clip(survival_level_for(p, a), 0.0, 1.0))
        return self.baseline.ppf(np.clip(cdf_level_for(p, a), 0.0, 1.0))

    def _closed_form_co(self, co_level):
        """As :meth:`_closed_form`, from one minus the joint level."""
        a = self.sample.alphas[0]
        c = np.atleast_1d(np.asarray(co_level, dtype=float))
        q = self.generator.co_combine(c[:, None], 1.0 / self.sample.n)  # 1 - p
        if self.kind == "min":
            # baseline cdf level 1 - p / (alpha + alpha_bar p)
            return self.baseline.ppf(np.clip(a * q / (a + (1.0 - a) * (1.0 - q)), 0.0, 1.0))
        # baseline survival level 1 - alpha p / (alpha p + 1 - p)
        return self.baseline.isf(np.clip(q / (a * (1.0 - q) + q), 0.0, 1.0))

    def invert_level(self, level):
        """Numeric inversion of the joint level by bisection over the support."""
        lv = np.atleast_1d(np.asarray(level, dtype=float))
        if self.kind == "min":
            return bisect_increasing(lambda y: -self._joint(y), -lv, self.support)
        return bisect_increasing(self._joint, lv, self.support)

    def invert_co_level(self, co_level):
        """Numeric inversion of one minus the joint level."""
        c = np.atleast_1d(np.asarray(co_level, dtype=float))
        if self.kind == "min":
            return bisect_increasing(self._co_joint, c, self.support)
        return bisect_increasing(lambda y: -self._co_joint(y), -c, self.support)

    def _check_u(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(np.isnan(u)) or np.any((u <= 0) | (u >= 1)):
            raise DomainError("quantile level must lie in (0, 1)")
        return u

    def _solve(self, cdf_u, sf_u, numeric: bool):
        """x with cdf(x) = cdf_u (equivalently sf(x) = sf_u), inverting on the smaller side."""
        cdf_u, sf_u = np.atleast_1d(cdf_u), np.atleast_1d(sf_u)
        joint, co = (sf_u, cdf_u) if self.kind == "min" else (cdf_u, sf_u)
        use_co = co < 0.5
        closed = self.sample.homogeneous and not numeric
        out = np.empty(joint.shape)
        if np.any(use_co):
            c = co[use_co]
            out[use_co] = np.ravel(self._closed_form_co(c) if closed else self.invert_co_level(c))
        if np.any(~use_co):
            j = joint[~use_co]
            out[~use_co] = np.ravel(self._closed_form(j) if closed else self.invert_level(j))
        return out

    def quantile(self, u):
        """Cdf-scale quantile: closed form when homogeneous, bisection otherwise."""
        u = self._check_u(u)
        return self._shape(u, self._solve(u, 1.0 - u, numeric=False))

    def quantile_numeric(self, u):
        u = self._check_u(u)
        return self._shape(u, self._solve(u, 1.0 - u, numeric=True))

    def isf(self, s):
        """Survival-scale quantile (precise for small survival levels)."""
        s = self._check_u(s)
        return self._shape(s, self._solve(1.0 - s, s, numeric=False))


def extreme_cdf(d: ExtremeDistribution, x):
    return d.cdf(x)


def extreme_density(d: ExtremeDistribution, x):
    return d.pdf(x)


def extreme_quantile(d: ExtremeDistribution, u):
    return d.quantile(u)


# -- quantile compositions -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TransformProfile:
    """Inner level of G^{-1}(F(x)); exactly one of the four fields is set."""

    x: np.ndarray
    gamma: np.ndarray | None = None
    beta: np.ndarray | None = None
    eta: np.ndarray | None = None
    zeta: np.ndarray | None = None
    component_level: np.ndarray | None = field(default=None, repr=False)

    @property
    def active(self) -> str:
        for name in ("gamma", "beta", "eta", "zeta"):
            if getattr(self, name) is not None:
                return name
        raise ValueError("empty transform profile")

    @property
    def inner(self) -> np.ndarray:
        return getattr(self, self.active)


def _check_pair(het: ExtremeDistribution, hom: ExtremeDistribution):
    if het.kind != hom.kind:
        raise ValueError("compositions need two extremes of the same kind")
    if het.baseline != hom.baseline:
        raise ValueError("compositions need a shared baseline distribution")
    if not hom.sample.homogeneous:
        raise ValueError("the target sample of a composition must be homogeneous")


def same_coupling(het: ExtremeDistribution, hom: ExtremeDistribution) -> bool:
    return het.generator == hom.generator and het.sample.n == hom.sample.n


def _component_level(het, hom, x):
    """Level p of each component of ``hom`` at y = G^{-1}(F(x))."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    n_b = hom.sample.n
    if same_coupling(het, hom):
        # phi(phi^{-1}(C(u)) / n) = phi(sum phi^{-1}(u_i) / n): skip the round trip
        levels, _ = het._marginal_parts(xs)
        return xs, het.generator.combine(levels, 1.0 / n_b)
    joint = np.atleast_1d(het._joint(xs))
    return xs, hom.generator.combine(joint[:, None], 1.0 / n_b)


def compose_quantile_cdf(het: ExtremeDistribution, hom: ExtremeDistribution, x):
    """y = G^{-1}(F(x)) for F the law of ``het`` and G that of ``hom``.

    Returns ``(y, profile)``. The inner level is gamma (minima) / beta
    (maxima) when both samples share generator and size, eta / zeta otherwise.
    """
    _check_pair(het, hom)
    xs, p = _component_level(het, hom, x)
    a = hom.sample.alphas[0]
    if het.kind == "min":
        inner = np.clip(survival_level_for(p, a), 0.0, 1.0)
        y = hom.baseline.isf(inner)
        name = "gamma" if same_coupling(het, hom) else "eta"
    else:
        inner = np.clip(cdf_level_for(p, a), 0.0, 1.0)
        y = hom.baseline.ppf(inner)
        name = "beta" if same_coupling(het, hom) else "zeta"
    profile = TransformProfile(xs, component_level=p, **{name: inner})
    y = np.atleast_1d(y)
    return (y if np.ndim(x) else float(y[0])), profile


def composed_density(het: ExtremeDistribution, hom: ExtremeDistribution, x):
    """g(G^{-1}(F(x))) in closed form.

    With p the component level of ``hom`` at y and D the first copula
    partial of ``hom``'s n-variate copula on the diagonal:

    * minima: n D(p) p (alpha + alpha_bar p) r(y) / alpha
    * maxima: n D(p) p (1 - alpha_bar p) r~(y)
    """
    _check_pair(het, hom)
    y, profile = compose_quantile_cdf(het, hom, x)
    y = np.atleast_1d(y)
    p = profile.component_level
    n = hom.sample.n
    a = hom.sample.alphas[0]
    ab = 1.0 - a
    live = p > 0
    out = np.zeros_like(p)
    if live.any():
        d = hom.generator.diagonal_partial(p[live], n)
        yl = y[live]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if het.kind == "min":
                rate = np.asarray(hom.baseline.hazard(yl), dtype=float)
                val = n * d * p[live] * (a + ab * p[live]) * rate / a
            else:
                rate = np.asarray(hom.baseline.rhazard(yl), dtype=float)
                val = n * d * p[live] * (1.0 - ab * p[live]) * rate
        out[live] = np.where(d == 0, 0.0, val)
    return out if np.ndim(x) else float(out[0])


def transport_numeric(het: ExtremeDistribution, hom: ExtremeDistribution, x):
    """G^{-1}(F(x)) by numeric inversion of ``hom``'s joint level (independent of the closed forms)."""
    _check_pair(het, hom)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.asarray(hom.invert_level(np.atleast_1d(het._joint(xs))), dtype=float)
    return y if np.ndim(x) else float(y[0])
