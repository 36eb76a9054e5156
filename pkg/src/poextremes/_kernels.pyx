# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled generator kernels; same contract as ``_kernels_py``."""

import numpy as np

from libc.math cimport exp, expm1, log, log1p, INFINITY

cdef int INDEPENDENCE = 0
cdef int NELSEN_4_2_19 = 1
cdef int NELSEN_4_2_8 = 2
cdef double TINY = 2.2250738585072014e-308
cdef double EXP_SWITCH = 700.0
cdef double D_MAX = 1e300


cdef inline double _offset(double a, double u) noexcept nogil:
    cdef double d
    if u < TINY:
        u = TINY
    d = a * (1.0 - u) / u
    return d if d < D_MAX else D_MAX


cdef double _log_shift(const double[:] d, const double[:] w) noexcept nogil:
    cdef Py_ssize_t j, k = d.shape[0]
    cdef double top = d[0], acc = 0.0, wsum = 0.0
    for j in range(1, k):
        if d[j] > top:
            top = d[j]
    if top < EXP_SWITCH:
        for j in range(k):
            acc += w[j] * expm1(d[j])
        return log1p(acc)
    for j in range(k):
        acc += w[j] * exp(d[j] - top)
        wsum += w[j]
    return top + log(acc + (1.0 - wsum) * exp(-top))


def combine(int code, double param, u, w):
    cdef const double[:, ::1] uv = np.ascontiguousarray(u, dtype=float)
    cdef Py_ssize_t m = uv.shape[0], k = uv.shape[1], i, j
    cdef const double[::1] wv = np.ascontiguousarray(np.broadcast_to(np.asarray(w, dtype=float), (k,)))
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr
    cdef double[::1] d = np.empty(k)
    cdef double acc, lam, c, wsum
    if code not in (INDEPENDENCE, NELSEN_4_2_19, NELSEN_4_2_8):
        raise ValueError(f"unknown kernel family code {code}")
    with nogil:
        for i in range(m):
            if code == INDEPENDENCE:
                acc = 0.0
                for j in range(k):
                    if uv[i, j] <= 0.0:
                        acc = -INFINITY
                        break
                    acc += wv[j] * log(uv[i, j])
                out[i] = exp(acc)
            elif code == NELSEN_4_2_19:
                for j in range(k):
                    d[j] = _offset(param, uv[i, j])
                out[i] = param / (param + _log_shift(d, wv))
            else:
                # work with 1 - phi^{-1}(u) so small levels keep their relative precision
                lam = param
                wsum = 0.0
                for j in range(k):
                    wsum += wv[j]
                acc = 1.0 - wsum
                for j in range(k):
                    c = lam * uv[i, j] / (1.0 + (lam - 1.0) * uv[i, j])
                    acc += wv[j] * c
                out[i] = acc / (lam - (lam - 1.0) * acc) if acc > 0.0 else 0.0
    return out_arr


cdef void _partials_row(int code, double param, const double[:, ::1] uv, Py_ssize_t i,
                        double[:, ::1] out, double[::1] d, double[::1] ones) noexcept nogil:
    cdef Py_ssize_t j, l, k = uv.shape[1]
    cdef double prod, shift, r, total, lam, q
    if code == INDEPENDENCE:
        for j in range(k):
            prod = 1.0
            for l in range(k):
                if l != j:
                    prod *= uv[i, l]
            out[i, j] = prod
    elif code == NELSEN_4_2_19:
        for j in range(k):
            d[j] = _offset(param, uv[i, j])
        shift = _log_shift(d, ones)
        for j in range(k):
            r = (param + d[j]) / (param + shift)
            out[i, j] = exp(d[j] - shift) * r * r
    else:
        lam = param
        total = 1.0 - k
        for j in range(k):
            d[j] = lam * uv[i, j] / (1.0 + (lam - 1.0) * uv[i, j])
            total += d[j]
        for j in range(k):
            if total > 0.0:
                q = (lam - (lam - 1.0) * d[j]) / (lam - (lam - 1.0) * total)
                out[i, j] = q * q
            else:
                out[i, j] = 0.0


def partials(int code, double param, u):
    cdef const double[:, ::1] uv = np.ascontiguousarray(u, dtype=float)
    cdef Py_ssize_t m = uv.shape[0], k = uv.shape[1], i
    out_arr = np.empty((m, k))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] d = np.empty(k)
    cdef double[::1] ones = np.ones(k)
    if code not in (INDEPENDENCE, NELSEN_4_2_19, NELSEN_4_2_8):
        raise ValueError(f"unknown kernel family code {code}")
    with nogil:
        for i in range(m):
            _partials_row(code, param, uv, i, out, d, ones)
    return out_arr


def conditional_inverse(int code, double param, u1, w, int iters=64):
    cdef const double[::1] u1v = np.ascontiguousarray(u1, dtype=float)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=float)
    cdef Py_ssize_t m = u1v.shape[0], i
    cdef int it
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr
    cdef double[:, ::1] pair = np.empty((1, 2))
    cdef double[:, ::1] grad = np.empty((1, 2))
    cdef double[::1] d = np.empty(2)
    cdef double[::1] ones = np.ones(2)
    cdef double lo, hi, mid
    if code not in (INDEPENDENCE, NELSEN_4_2_19, NELSEN_4_2_8):
        raise ValueError(f"unknown kernel family code {code}")
    with nogil:
        for i in range(m):
            lo = 0.0
            hi = 1.0
            pair[0, 0] = u1v[i]
            for it in range(iters):
                mid = 0.5 * (lo + hi)
                pair[0, 1] = mid
                _partials_row(code, param, pair, 0, grad, d, ones)
                if grad[0, 0] < wv[i]:
                    lo = mid
                else:
                    hi = mid
            out[i] = 0.5 * (lo + hi)
    return out_arr
