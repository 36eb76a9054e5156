"""Proportional-odds marginals: survival odds scaled by a constant ``alpha``.

With baseline survival ``s`` and ``alpha_bar = 1 - alpha``::

    survival = alpha s / (1 - alpha_bar s)
    cdf      = (1 - s) / (1 - alpha_bar s)

The shared denominator is evaluated as ``F + alpha s`` (``F = 1 - s`` taken
from the baseline cdf), which is positive for every ``alpha > 0`` and has
no cancellation near ``alpha = 1`` or in either tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from poextremes.baselines import Baseline
from poextremes.errors import DomainError


def po_survival_from(s, alpha):
    """PO survival from baseline survival level(s) ``s``."""
    s = np.asarray(s, dtype=float)
    return alpha * s / ((1.0 - s) + alpha * s)


def po_cdf_from(v, alpha):
    """PO cdf from baseline cdf level(s) ``v``."""
    v = np.asarray(v, dtype=float)
    return v / (v + alpha * (1.0 - v))


def survival_level_for(g, alpha):
    """Baseline survival ``s`` with PO survival ``g``: s = g / (alpha + alpha_bar g)."""
    g = np.asarray(g, dtype=float)
    return g / (alpha + (1.0 - alpha) * g)


def cdf_level_for(g, alpha):
    """Baseline cdf ``v`` with PO cdf ``g``: v = alpha g / (1 - alpha_bar g)."""
    g = np.asarray(g, dtype=float)
    return alpha * g / (alpha * g + (1.0 - g))


@dataclass(frozen=True)
class POMarginal:
    baseline: Baseline
    alpha: float
    alpha_bar: float = field(init=False)

    def __post_init__(self):
        a = float(self.alpha)
        if not (a > 0 and math.isfinite(a)):
            raise DomainError(f"proportional odds ratio must be positive and finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "alpha_bar", 1.0 - a)

    def _denominator(self, x):
        # 1 - alpha_bar sf = cdf + alpha sf
        d = self.baseline.cdf(x) + self.alpha * self.baseline.sf(x)
        if np.any(np.asarray(d) <= 0):
            raise ArithmeticError("proportional-odds denominator is not positive")
        return d

    def survival(self, x):
        return (self.alpha * self.baseline.sf(x) / self._denominator(x))[()]

    def cdf(self, x):
        return (self.baseline.cdf(x) / self._denominator(x))[()]

    def density(self, x):
        d = self._denominator(x)
        return (self.alpha * self.baseline.pdf(x) / (d * d))[()]

    def hazard_ratio(self, x):
        """PO hazard over baseline hazard: 1 / (1 - alpha_bar sf)."""
        return (1.0 / self._denominator(x))[()]

    def odds(self, x):
        """Survival odds; alpha times the baseline odds."""
        return (self.alpha * np.asarray(self.baseline.odds(x)))[()]

    def isf(self, g):
        return self.baseline.isf(survival_level_for(g, self.alpha))

    def ppf(self, g):
        return self.baseline.ppf(cdf_level_for(g, self.alpha))


def po_survival(m: POMarginal, x):
    return m.survival(x)


def po_cdf(m: POMarginal, x):
    return m.cdf(x)


def po_density(m: POMarginal, x):
    return m.density(x)


def po_hazard_ratio(m: POMarginal, x):
    return m.hazard_ratio(x)
