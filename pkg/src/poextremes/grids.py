"""Support-aware evaluation grids.

Unbounded supports are sampled through a bounded parameter ``t``:

=============  ==============  ================
support        reparam         x(t)
=============  ==============  ================
[0, inf)       ``odds``        t / (1 - t)
[1, inf)       ``inverse``     1 / t
(-inf, 0]      ``neg-odds``    t / (1 + t), t < 0
[a, b]         ``linear``      a + t (b - a)
[a, inf)       ``shifted-odds``  a + t / (1 - t)
(-inf, b]      ``shifted-neg-odds``  b + t / (1 + t)
=============  ==============  ================
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_POINTS = 2000
DEFAULT_TRIM = 1e-3


@dataclass(frozen=True, eq=False)
class Grid:
    reparam: str
    t: np.ndarray
    x: np.ndarray

    def __len__(self):
        return len(self.x)

    def describe(self) -> str:
        return f"{self.reparam}:{len(self.x)}:t=[{self.t[0]:.6g},{self.t[-1]:.6g}]"


_MAPS = {
    "odds": (lambda t: t / (1.0 - t), (0.0, 1.0)),
    "inverse": (lambda t: 1.0 / t, (0.0, 1.0)),
    "neg-odds": (lambda t: t / (1.0 + t), (-1.0, 0.0)),
}


def default_reparam(support) -> str:
    lo, hi = support
    if math.isfinite(lo) and math.isfinite(hi):
        return "linear"
    if lo == 0.0 and hi == math.inf:
        return "odds"
    if lo == 1.0 and hi == math.inf:
        return "inverse"
    if lo == -math.inf and hi == 0.0:
        return "neg-odds"
    if math.isfinite(lo):
        return "shifted-odds"
    if math.isfinite(hi):
        return "shifted-neg-odds"
    raise ValueError("doubly infinite supports have no default grid")


def support_grid(support, points: int = DEFAULT_POINTS, trim: float = DEFAULT_TRIM,
                 reparam: str | None = None) -> Grid:
    """Grid of ``points`` interior points, endpoints trimmed by ``trim`` in t."""
    if points < 2:
        raise ValueError("a grid needs at least two points")
    lo, hi = support
    reparam = reparam or default_reparam(support)
    if reparam in _MAPS:
        fn, (a, b) = _MAPS[reparam]
        t = np.linspace(a + trim, b - trim, points)
        return Grid(reparam, t, fn(t))
    if reparam == "linear":
        t = np.linspace(trim, 1.0 - trim, points)
        return Grid(reparam, t, lo + t * (hi - lo))
    if reparam == "shifted-odds":
        t = np.linspace(trim, 1.0 - trim, points)
        return Grid(reparam, t, lo + t / (1.0 - t))
    if reparam == "shifted-neg-odds":
        t = np.linspace(-1.0 + trim, -trim, points)
        return Grid(reparam, t, hi + t / (1.0 + t))
    raise ValueError(f"unknown grid reparameterization {reparam!r}")


def unit_grid(points: int = DEFAULT_POINTS, trim: float = DEFAULT_TRIM) -> Grid:
    """Probability grid strictly inside (0, 1)."""
    t = np.linspace(trim, 1.0 - trim, points)
    return Grid("unit", t, t.copy())


def as_points(grid) -> np.ndarray:
    if isinstance(grid, Grid):
        return grid.x
    pts = np.asarray(grid, dtype=float)
    if pts.ndim != 1 or pts.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence of points")
    return pts


def support_map(support):
    """Increasing bijection from a bounded t-interval onto the support.

    Returns ``(to_x, t_lo, t_hi)``; used by the bisection inverters so that
    unbounded supports are searched in a bounded coordinate.
    """
    lo, hi = support
    if math.isfinite(lo) and math.isfinite(hi):
        return (lambda t: lo + t * (hi - lo)), 0.0, 1.0
    if math.isfinite(lo):
        return (lambda t: lo + t / (1.0 - t)), 0.0, 1.0
    if math.isfinite(hi):
        return (lambda t: hi + t / (1.0 + t)), -1.0, 0.0
    return (lambda t: t / (1.0 - t * t)), -1.0, 1.0


def bisect_increasing(fn, target, support, iters: int = 200):
    """Vectorised bisection for ``fn(x) = target`` with ``fn`` nondecreasing on the support.

    Returns the smallest x (to float resolution in the mapped coordinate)
    with ``fn(x) >= target``.
    """
    target = np.asarray(target, dtype=float)
    to_x, t_lo, t_hi = support_map(support)
    lo = np.full(target.shape, t_lo)
    hi = np.full(target.shape, t_hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            val = fn(to_x(mid))
        below = val < target
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    with np.errstate(divide="ignore"):
        xlo, xhi = to_x(lo), to_x(hi)
    # the mapped coordinate cannot reach past ~1e16 on an unbounded end;
    # grow the bracket geometrically there
    xhi, xlo = _expand(fn, target, xlo, xhi, +1.0), _expand(fn, target, xhi, xlo, -1.0)
    # the mapped coordinate loses resolution near unbounded ends; finish in x
    for _ in range(iters):
        mid = 0.5 * (xlo + xhi)
        active = np.isfinite(xlo) & np.isfinite(xhi) & (mid > xlo) & (mid < xhi)
        if not active.any():
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            val = fn(np.where(active, mid, xhi))
        below = val < target
        xlo = np.where(active & below, mid, xlo)
        xhi = np.where(active & ~below, mid, xhi)
    return xhi


def _expand(fn, target, inner, outer, sign):
    # replace an infinite ``outer`` bracket end (sign +1: upper, -1: lower)
    # by the first power of two beyond ``inner`` that brackets the target
    shape = np.shape(outer)
    inner = np.atleast_1d(inner).ravel()
    outer = np.atleast_1d(outer).astype(float).ravel()
    target = np.broadcast_to(target, shape).ravel()
    todo = np.isfinite(inner) & np.isinf(outer)
    step = np.maximum(np.abs(np.where(todo, inner, 0.0)), 1.0)
    for _ in range(1100):
        if not todo.any():
            break
        idx = np.flatnonzero(todo)
        with np.errstate(over="ignore"):
            cand = inner.flat[idx] + sign * step.flat[idx]
        live = np.isfinite(cand)
        val = np.full(cand.shape, np.nan)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val[live] = np.ravel(fn(cand[live])) if live.any() else val[live]
        tgt = target[idx]
        hit = live & ((val >= tgt) if sign > 0 else (val < tgt))
        outer[idx[hit]] = cand[hit]
        todo[idx[hit | ~live]] = False
        with np.errstate(over="ignore"):
            step = step * 2.0
    return outer.reshape(shape)
