"""Compiled inner loops. Everything here is pure array-in/array-out."""

import math

import numpy as np
from numba import njit

# exhaustion codes returned by coupled_path
OK = 0
G_EXHAUSTED = 1
S1_EXHAUSTED = 2
S2_EXHAUSTED = 3


@njit(cache=True, nogil=True)
def comb_path(u, x0, y0):
    n = u.shape[0]
    xs = np.empty(n + 1, np.int64)
    ys = np.empty(n + 1, np.int64)
    x = x0
    y = y0
    xs[0] = x
    ys[0] = y
    for i in range(n):
        v = u[i]
        if y == 0:
            if v < 0.25:
                x += 1
            elif v < 0.5:
                x -= 1
            elif v < 0.75:
                y = 1
            else:
                y = -1
        elif v < 0.5:
            y += 1
        else:
            y -= 1
        xs[i + 1] = x
        ys[i + 1] = y
    return xs, ys


@njit(cache=True, nogil=True)
def comb_endpoint(u):
    """Endpoint of the walk from the origin plus the number of times in 1..n on the axis."""
    x = 0
    y = 0
    on_axis = 0
    for i in range(u.shape[0]):
        v = u[i]
        if y == 0:
            if v < 0.25:
                x += 1
            elif v < 0.5:
                x -= 1
            elif v < 0.75:
                y = 1
            else:
                y = -1
        elif v < 0.5:
            y += 1
        else:
            y -= 1
        if y == 0:
            on_axis += 1
    return x, y, on_axis


@njit(cache=True, nogil=True)
def coupled_path(s1, s2, g, n):
    """Comb walk assembled from two simple-walk paths and geometric axis run lengths.

    Returns (xs, ys, kind, phase, status, reached). ``kind`` is 0 on axis
    steps and 1 on tooth steps; ``phase`` is the excursion counter N.
    On exhaustion ``status`` is non-zero and ``reached`` is the last filled index.
    """
    xs = np.zeros(n + 1, np.int64)
    ys = np.zeros(n + 1, np.int64)
    kind = np.zeros(n + 1, np.int8)
    phase = np.zeros(n + 1, np.int64)
    i = 0
    j1 = 0
    j2 = 0
    big_n = 0
    x = 0
    while i < n:
        if big_n >= g.shape[0]:
            return xs, ys, kind, phase, G_EXHAUSTED, i
        for _ in range(g[big_n]):
            if i >= n:
                break
            if j1 + 1 >= s1.shape[0]:
                return xs, ys, kind, phase, S1_EXHAUSTED, i
            j1 += 1
            i += 1
            x = s1[j1]
            xs[i] = x
            ys[i] = 0
            kind[i] = 0
            phase[i] = big_n
        while i < n:
            if j2 + 1 >= s2.shape[0]:
                return xs, ys, kind, phase, S2_EXHAUSTED, i
            j2 += 1
            i += 1
            xs[i] = x
            ys[i] = s2[j2]
            kind[i] = 1
            phase[i] = big_n
            if s2[j2] == 0:
                break
        big_n += 1
    return xs, ys, kind, phase, OK, i


@njit(cache=True, nogil=True)
def _beta(code, logn, loglogn):
    if code == 0:
        return 1.0 / logn
    if code == 1:
        return 1.0 / (logn * loglogn)
    if code == 2:
        return 1.0 / (logn * logn)
    return 1.0 / math.sqrt(logn)


@njit(cache=True, nogil=True)
def asymptotic_chunk(u, pos, n0, n_min, beta_codes, run, checkpoints, rows, cp):
    """Advance a comb walk over the draws ``u`` while tracking the normalised
    LIL, Chung and Hirsch functionals at every step ``n >= n_min``.

    pos   int64[6]: x, y, max C1, min C1, max C2, max |C2|
    run   float64[3 + 3*nb]: sup C1-LIL, sup C2-LIL, inf Chung, then per beta
          inf maxC1/(n^1/4 b), inf max|C1|/(n^1/4 b), inf maxC2/(n^1/2 b)
    rows  snapshot of ``run`` (plus raw state) taken at each checkpoint
    Returns the next checkpoint index.
    """
    nb = beta_codes.shape[0]
    x = pos[0]
    y = pos[1]
    max1 = pos[2]
    min1 = pos[3]
    max2 = pos[4]
    maxabs2 = pos[5]
    ncp = checkpoints.shape[0]
    for i in range(u.shape[0]):
        v = u[i]
        if y == 0:
            if v < 0.25:
                x += 1
            elif v < 0.5:
                x -= 1
            elif v < 0.75:
                y = 1
            else:
                y = -1
        elif v < 0.5:
            y += 1
        else:
            y -= 1
        if x > max1:
            max1 = x
        if x < min1:
            min1 = x
        if y > max2:
            max2 = y
        if abs(y) > maxabs2:
            maxabs2 = abs(y)
        n = n0 + i + 1
        if n >= n_min:
            fn = float(n)
            logn = math.log(fn)
            ll = math.log(max(logn, math.e))
            q = math.sqrt(math.sqrt(fn))
            r1 = x / (q * ll ** 0.75)
            if r1 > run[0]:
                run[0] = r1
            r2 = y / math.sqrt(2.0 * fn * ll)
            if r2 > run[1]:
                run[1] = r2
            ch = math.sqrt(8.0 * ll / (math.pi * math.pi * fn)) * maxabs2
            if ch < run[2]:
                run[2] = ch
            maxabs1 = max(max1, -min1)
            for b in range(nb):
                beta = _beta(beta_codes[b], logn, ll)
                h = max1 / (q * beta)
                if h < run[3 + b]:
                    run[3 + b] = h
                h = maxabs1 / (q * beta)
                if h < run[3 + nb + b]:
                    run[3 + nb + b] = h
                h = max2 / (math.sqrt(fn) * beta)
                if h < run[3 + 2 * nb + b]:
                    run[3 + 2 * nb + b] = h
        if cp < ncp and n == checkpoints[cp]:
            for k in range(run.shape[0]):
                rows[cp, k] = run[k]
            rows[cp, run.shape[0]] = x
            rows[cp, run.shape[0] + 1] = y
            cp += 1
    pos[0] = x
    pos[1] = y
    pos[2] = max1
    pos[3] = min1
    pos[4] = max2
    pos[5] = maxabs2
    return cp
