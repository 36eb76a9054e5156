"""Numpy implementation of the multivariate generator kernels.

This is the reference backend and the fallback when the compiled
``_kernels`` extension is unavailable. Both backends expose the same three
functions and take a family code plus a single shape parameter:

``combine(code, param, u, w)``
    phi(sum_j w_j * phi^{-1}(u[:, j])) for each row of ``u``.
``partials(code, param, u)``
    dC/du_i = phi'(T) / phi'(phi^{-1}(u_i)) with T = sum_j phi^{-1}(u_j).
``conditional_inverse(code, param, u1, w, iters)``
    The u2 solving dC(u1, u2)/du1 = w, by bisection on [0, 1].
"""

import numpy as np

INDEPENDENCE = 0
NELSEN_4_2_19 = 1
NELSEN_4_2_8 = 2

TINY = np.finfo(float).tiny
# cap for the 4.2.19 offset: keeps u -> 0 finite (phi^{-1}(0+) = inf) while
# leaving room to sum a few of them
D_MAX = 1e300
# expm1 overflows a little above 709
_EXP_SWITCH = 700.0


def _as_rows(u):
    u = np.asarray(u, dtype=float)
    if u.ndim != 2:
        raise ValueError("expected a 2-d array of probabilities (rows x components)")
    return u


def _offsets_4_2_19(param, u):
    # 4.2.19 in the coordinate L = log(t + e^a) = a/u; d = L - a.
    a = param
    uc = np.maximum(u, TINY)
    with np.errstate(over="ignore"):
        return np.minimum(a * (1.0 - uc) / uc, D_MAX)


def _log_shift(d, w):
    """log(sum_j w_j e^{d_j} + 1 - sum_j w_j), stable for small and huge d."""
    with np.errstate(over="ignore", invalid="ignore"):
        small = np.log1p(np.sum(w * np.expm1(d), axis=1))
        top = np.max(d, axis=1)
        inner = np.sum(w * np.exp(d - top[:, None]), axis=1) + (1.0 - np.sum(w)) * np.exp(-top)
        big = top + np.log(inner)
    return np.where(np.max(d, axis=1) < _EXP_SWITCH, small, big)


def _rest(c, w):
    # 1 - sum_j w_j (1 - c_j), accumulated left to right from 1 - sum(w) so
    # that a tiny positive remainder survives (matches the compiled loop)
    rest = np.full(c.shape[0], 1.0 - float(np.sum(w)))
    for j in range(c.shape[1]):
        rest = rest + w[j] * c[:, j]
    return rest


def combine(code, param, u, w):
    u = _as_rows(u)
    w = np.broadcast_to(np.asarray(w, dtype=float), (u.shape[1],))
    if code == INDEPENDENCE:
        with np.errstate(divide="ignore"):
            return np.exp(np.sum(w * np.log(u), axis=1))
    if code == NELSEN_4_2_19:
        d = _offsets_4_2_19(param, u)
        return param / (param + _log_shift(d, w))
    if code == NELSEN_4_2_8:
        lam = param
        # work with 1 - phi^{-1}(u) so small levels keep their relative precision
        c = lam * u / (1.0 + (lam - 1.0) * u)
        rest = _rest(c, w)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(rest > 0.0, rest / (lam - (lam - 1.0) * rest), 0.0)
    raise ValueError(f"unknown kernel family code {code}")


def partials(code, param, u):
    u = _as_rows(u)
    if code == INDEPENDENCE:
        # product of the other coordinates, without dividing by u_i
        ones = np.ones((u.shape[0], 1))
        left = np.cumprod(np.hstack([ones, u[:, :-1]]), axis=1)
        right = np.cumprod(np.hstack([ones, u[:, :0:-1]]), axis=1)[:, ::-1]
        return left * right
    if code == NELSEN_4_2_19:
        a = param
        d = _offsets_4_2_19(param, u)
        shift = _log_shift(d, np.ones(u.shape[1]))
        ratio = (a + d) / (a + shift)[:, None]
        return np.exp(d - shift[:, None]) * ratio * ratio
    if code == NELSEN_4_2_8:
        lam = param
        c = lam * u / (1.0 + (lam - 1.0) * u)
        rest = _rest(c, np.ones(u.shape[1]))[:, None]
        q = (lam - (lam - 1.0) * c) / (lam - (lam - 1.0) * rest)
        return np.where(rest > 0.0, q * q, 0.0)
    raise ValueError(f"unknown kernel family code {code}")


def conditional_inverse(code, param, u1, w, iters=64):
    u1 = np.asarray(u1, dtype=float)
    w = np.asarray(w, dtype=float)
    lo = np.zeros_like(u1)
    hi = np.ones_like(u1)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        h = partials(code, param, np.column_stack([u1, mid]))[:, 0]
        below = h < w
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)
