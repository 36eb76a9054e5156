"""Monte Carlo oracle for the analytic extreme distributions.

Uniform vectors come from the copula (independent, or any catalog generator
at n = 2 by conditional inversion); they are mapped to the PO marginals
through the survival quantile for minima and the cdf quantile for maxima,
matching the coupling used by :class:`~poextremes.extremes.ExtremeDistribution`.

Randomness is drawn in fixed blocks of rows, block ``b`` seeded with
``SeedSequence([seed, b])`` (PCG64), so a batch depends only on
``(seed, N)`` and not on how blocks are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from poextremes import kernels
from poextremes.errors import BracketError, UnsupportedSamplerError
from poextremes.extremes import KINDS, ExtremeDistribution, POSampleSpec
from poextremes.generators import Generator, Independence
from poextremes.po_model import POMarginal

BLOCK_ROWS = 8192
KS_COEFF = 1.63  # asymptotic KS critical value at level 0.01


@dataclass(frozen=True, eq=False)
class SampleBatch:
    draws: np.ndarray
    seed: int
    spec: POSampleSpec
    kind: str
    uniforms: np.ndarray

    @property
    def size(self) -> int:
        return self.draws.shape[0]

    def extremes(self, kind: str | None = None) -> np.ndarray:
        kind = kind or self.kind
        if kind == "min":
            return self.draws.min(axis=1)
        if kind == "max":
            return self.draws.max(axis=1)
        raise ValueError("kind must be 'min' or 'max'")


def _check_args(N, seed, kind):
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    if int(seed) != seed or seed < 0:
        raise ValueError("seed must be a non-negative integer")
    if kind not in KINDS:
        raise ValueError("kind must be 'min' or 'max'")


def _blocks(N: int, seed: int):
    for b, start in enumerate(range(0, N, BLOCK_ROWS)):
        rows = min(BLOCK_ROWS, N - start)
        yield rows, np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, b])))


def conditional_inverse(gen: Generator, u1, w, iters: int = 64):
    """u2 with dC(u1, u2)/du1 = w, by bisection on [0, 1]."""
    u1 = np.asarray(u1, dtype=float)
    w = np.asarray(w, dtype=float)
    lo_h = gen.partials(np.column_stack([u1, np.zeros_like(u1)]))[:, 0]
    hi_h = gen.partials(np.column_stack([u1, np.ones_like(u1)]))[:, 0]
    bad = (w < lo_h - 1e-12) | (w > hi_h + 1e-12)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise BracketError(
            "conditional copula inversion does not bracket the target",
            {"u1": float(u1[i]), "w": float(w[i]), "h(u1, 0)": float(lo_h[i]),
             "h(u1, 1)": float(hi_h[i]), "generator": gen.describe()},
        )
    if gen.kernel is not None:
        return kernels.conditional_inverse(gen.kernel, gen._kernel_param(), u1, w, iters)
    lo, hi = np.zeros_like(u1), np.ones_like(u1)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = gen.partials(np.column_stack([u1, mid]))[:, 0] < w
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def copula_uniforms(gen: Generator, n: int, N: int, seed: int) -> np.ndarray:
    """N draws from the n-variate copula of ``gen`` (independence, or n = 2)."""
    _check_args(N, seed, "min")
    independent = isinstance(gen, Independence)
    if not independent and n != 2:
        raise UnsupportedSamplerError(
            f"dependent sampling is implemented for n = 2 only (got n = {n} with {gen.describe()})"
        )
    parts = []
    for rows, rng in _blocks(N, seed):
        u = rng.random((rows, n))
        if not independent:
            u[:, 1] = conditional_inverse(gen, u[:, 0], u[:, 1])
        parts.append(u)
    return np.vstack(parts)


def _to_marginals(spec: POSampleSpec, u: np.ndarray, kind: str) -> np.ndarray:
    cols = []
    for j, a in enumerate(spec.alphas):
        m = POMarginal(spec.baseline, a)
        cols.append(m.isf(u[:, j]) if kind == "min" else m.ppf(u[:, j]))
    return np.column_stack(cols)


def sample_independent(spec: POSampleSpec, N: int, seed: int, kind: str = "min") -> SampleBatch:
    """Independent PO components by inverse transform."""
    _check_args(N, seed, kind)
    if not isinstance(spec.generator, Independence):
        raise UnsupportedSamplerError(
            "sample_independent needs the independence generator; use sample_bivariate_archimedean"
        )
    u = copula_uniforms(spec.generator, spec.n, N, seed)
    return SampleBatch(_to_marginals(spec, u, kind), int(seed), spec, kind, u)


def sample_bivariate_archimedean(spec: POSampleSpec, N: int, seed: int, kind: str = "min") -> SampleBatch:
    """Two dependent PO components coupled by the generator's copula.

    For minima the copula couples the survival levels, for maxima the cdf levels.
    """
    _check_args(N, seed, kind)
    if spec.n != 2:
        raise UnsupportedSamplerError(f"bivariate sampler needs n = 2, got n = {spec.n}")
    u = copula_uniforms(spec.generator, 2, N, seed)
    return SampleBatch(_to_marginals(spec, u, kind), int(seed), spec, kind, u)


def sample(spec: POSampleSpec, N: int, seed: int, kind: str = "min") -> SampleBatch:
    """Dispatch to the sampler that supports ``spec``."""
    if isinstance(spec.generator, Independence):
        return sample_independent(spec, N, seed, kind)
    if spec.n == 2:
        return sample_bivariate_archimedean(spec, N, seed, kind)
    raise UnsupportedSamplerError(
        f"no sampler for n = {spec.n} with dependent generator {spec.generator.describe()}; "
        "dependent sampling supports n = 2 only"
    )


def ks_critical(N: int) -> float:
    return KS_COEFF / np.sqrt(N)


def ks_distance(empirical, analytic: ExtremeDistribution) -> float:
    """Sup distance between the empirical cdf of the extremes and ``analytic``'s cdf.

    ``empirical`` is a :class:`SampleBatch` (row minima or maxima are taken
    per ``analytic.kind``) or a 1-d array of extreme values.
    """
    if isinstance(empirical, SampleBatch):
        values = empirical.extremes(analytic.kind)
    else:
        values = np.asarray(empirical, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("empty sample")
    return float(stats.kstest(values, lambda v: np.asarray(analytic.cdf(v))).statistic)


def empirical_cdf(values, x):
    v = np.sort(np.asarray(values, dtype=float))
    return np.searchsorted(v, np.asarray(x, dtype=float), side="right") / v.size
