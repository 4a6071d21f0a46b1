"""Goodness-of-fit statistics used by the experiment harness."""

from __future__ import annotations

import math

import numpy as np

# asymptotic Kolmogorov distribution quantiles, P(sqrt(R) D > c) = alpha
KS_CRIT = {1e-2: 1.628, 1e-3: 1.949}


def ks_statistic(samples, cdf) -> float:
    """sup_x |ECDF(x) - cdf(x)| for a continuous model CDF (ties handled)."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("ks_statistic needs at least one sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_lattice_corrected(samples, cdf, spacing: float) -> float:
    """KS distance between a lattice-valued sample and the model CDF evaluated
    half a lattice step above each atom (continuity correction)."""
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise ValueError("need at least one sample")
    atoms, counts = np.unique(x, return_counts=True)
    ecdf = np.cumsum(counts) / x.size
    model = np.asarray(cdf(atoms + 0.5 * spacing), dtype=float)
    return float(np.max(np.abs(ecdf - model)))


def ks_2samp(a, b) -> float:
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_2samp needs two non-empty samples")
    v = np.concatenate((a, b))
    fa = np.searchsorted(a, v, side="right") / a.size
    fb = np.searchsorted(b, v, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_critical(R: int, alpha: float = 1e-3) -> float:
    return KS_CRIT[alpha] / math.sqrt(R)


def ks2_critical(R1: int, R2: int, alpha: float = 1e-3) -> float:
    return KS_CRIT[alpha] * math.sqrt((R1 + R2) / (R1 * R2))


def total_variation(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return 0.5 * float(np.sum(np.abs(p - q)))
