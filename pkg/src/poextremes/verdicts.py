"""Three-valued verdicts and the tolerance rules shared by every grid check."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Status(str, enum.Enum):
    HOLDS = "HOLDS"
    VIOLATED = "VIOLATED"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __str__(self):
        return self.value


class Trend(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"
    NEITHER = "neither"

    def __str__(self):
        return self.value

    def satisfies(self, wanted: "Trend") -> bool:
        """Weak monotonicity: a constant sequence is both increasing and decreasing."""
        return self is wanted or self is Trend.CONSTANT


@dataclass(frozen=True)
class Verdict:
    """Outcome of one grid check.

    ``witnesses`` holds ``(location, signed violation)`` pairs in grid order.
    ``tight`` marks a check whose slack stayed within tolerance at every
    point, e.g. log-convexity of an exponential generator.
    """

    status: Status
    witnesses: tuple = ()
    max_violation: float = 0.0
    tight: bool = False
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def __bool__(self):
        return self.holds


def sustained(mask: np.ndarray, run: int = 2) -> np.ndarray:
    """Points of ``mask`` that belong to a run of at least ``run`` consecutive Trues.

    A single grid point beyond tolerance is treated as float noise rather
    than evidence.
    """
    mask = np.asarray(mask, dtype=bool)
    if run <= 1 or mask.size == 0:
        return mask.copy()
    out = np.zeros_like(mask)
    # run-length encode
    padded = np.concatenate([[False], mask, [False]])
    edges = np.flatnonzero(padded[1:] != padded[:-1])
    for start, stop in zip(edges[::2], edges[1::2]):
        if stop - start >= run:
            out[start:stop] = True
    return out


def one_sided(values, tol, locations, run: int = 2, note: str = "") -> Verdict:
    """Verdict for ``values <= tol`` everywhere (``tol`` may be an array).

    Non-finite entries make the check inconclusive unless a sustained
    violation is already present.
    """
    values = np.asarray(values, dtype=float)
    tol = np.broadcast_to(np.asarray(tol, dtype=float), values.shape)
    locations = np.asarray(locations)
    finite = np.isfinite(values)
    over = finite & (values > tol)
    real = sustained(over, run)
    excess = np.where(finite, values - tol, -np.inf)
    max_violation = float(max(np.max(excess, initial=-np.inf), 0.0))
    tight = bool(np.all(np.abs(values[finite]) <= tol[finite]))
    if real.any():
        wit = tuple(zip(locations[real].tolist(), values[real].tolist()))
        return Verdict(Status.VIOLATED, wit, max_violation, False, note)
    if over.any() or not finite.all():
        wit = tuple(zip(locations[over].tolist(), values[over].tolist()))
        why = "isolated excursions beyond tolerance" if over.any() else "non-finite values on grid"
        return Verdict(Status.INCONCLUSIVE, wit, max_violation, False, why)
    return Verdict(Status.HOLDS, (), 0.0, tight, note)


@dataclass(frozen=True)
class TrendReport:
    trend: Trend
    rises: int
    falls: int
    witnesses_up: tuple = field(default=(), repr=False)
    witnesses_down: tuple = field(default=(), repr=False)


def monotone_trend(x, y, rel_tol: float, run: int = 2) -> TrendReport:
    """Classify ``y`` as a function of ``x`` from consecutive differences.

    A step counts only when its magnitude exceeds ``rel_tol * (1 + |level|)``
    and it belongs to a sustained run of same-sign steps.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    order = np.argsort(x, kind="stable")
    x, y = x[order], y[order]
    d = np.diff(y)
    level = np.maximum(np.abs(y[1:]), np.abs(y[:-1]))
    tol = rel_tol * (1.0 + level)
    ok = np.isfinite(d)
    up = sustained(ok & (d > tol), run)
    down = sustained(ok & (d < -tol), run)
    mids = 0.5 * (x[1:] + x[:-1])
    if up.any() and down.any():
        trend = Trend.NEITHER
    elif up.any():
        trend = Trend.INCREASING
    elif down.any():
        trend = Trend.DECREASING
    else:
        trend = Trend.CONSTANT
    return TrendReport(
        trend,
        int(up.sum()),
        int(down.sum()),
        tuple(zip(mids[up].tolist(), d[up].tolist())),
        tuple(zip(mids[down].tolist(), d[down].tolist())),
    )


def trend_verdict(report: TrendReport, wanted: Trend) -> Verdict:
    """Turn a trend classification into a verdict for 'is ``wanted``'."""
    if report.trend.satisfies(wanted):
        return Verdict(Status.HOLDS, tight=report.trend is Trend.CONSTANT)
    bad = report.witnesses_down if wanted is Trend.INCREASING else report.witnesses_up
    worst = max((abs(v) for _, v in bad), default=0.0)
    return Verdict(Status.VIOLATED, bad, worst, note=f"observed trend: {report.trend}")


@dataclass(frozen=True)
class HypothesisResult:
    name: str
    verdict: Verdict
    evidence: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict.holds


@dataclass(frozen=True)
class ConditionReport:
    """Per-hypothesis verdicts for one theorem (or one validity check)."""

    subject: str
    hypotheses: tuple

    @property
    def all_pass(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    def __getitem__(self, name) -> HypothesisResult:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def names(self):
        return [h.name for h in self.hypotheses]

    def failed(self):
        return [h.name for h in self.hypotheses if not h.holds]
