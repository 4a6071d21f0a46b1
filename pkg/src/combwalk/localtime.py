"""Local times, return times, running maxima and excursion signs for +-1 walks.

Local time counts visits at times 1..n; the starting point S(0) is not a
visit. With that convention the N-th return time carries local time exactly N.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from combwalk.rng import RngStream
from combwalk.walk import SimpleWalkPath


def _values(path) -> np.ndarray:
    if isinstance(path, SimpleWalkPath):
        return path.values
    return np.asarray(path, dtype=np.int64)


@dataclass(frozen=True)
class LocalTimeTable:
    counts: dict[int, int]
    horizon: int

    def __getitem__(self, level: int) -> int:
        return self.counts.get(level, 0)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["level", "count"])
        for k in sorted(self.counts):
            w.writerow([k, self.counts[k]])


def _check_horizon(s: np.ndarray, n: int) -> None:
    if not 0 <= n < s.size:
        raise ValueError(f"horizon {n} outside path of length {s.size}")


def local_time(path, k: int, n: int) -> int:
    """xi(k, n) = #{1 <= i <= n : S(i) = k}."""
    s = _values(path)
    _check_horizon(s, n)
    return int(np.count_nonzero(s[1 : n + 1] == k))


def local_time_table(path, n: int | None = None) -> LocalTimeTable:
    s = _values(path)
    n = s.size - 1 if n is None else n
    _check_horizon(s, n)
    if n == 0:
        return LocalTimeTable({}, 0)
    visits = s[1 : n + 1]
    lo = int(visits.min())
    counts = np.bincount(visits - lo)
    levels = np.flatnonzero(counts)
    return LocalTimeTable(dict(zip((levels + lo).tolist(), counts[levels].tolist())), n)


def return_times(path) -> np.ndarray:
    """rho(0) = 0 followed by every later zero of S within the horizon."""
    s = _values(path)
    zeros = np.flatnonzero(s[1:] == 0) + 1
    return np.concatenate(([0], zeros)).astype(np.int64)


def running_max(path) -> np.ndarray:
    return np.maximum.accumulate(_values(path))


@dataclass(frozen=True)
class ExcursionDecomposition:
    """Maximal zero-free stretches ``(u, v)``: r(u) = 0, r > 0 on (u, v), and
    r(v) = 0 unless the stretch is the unfinished last one."""

    intervals: list[tuple[int, int]]
    incomplete: bool


def _check_reflected(r: np.ndarray) -> None:
    if r.ndim != 1 or r.size == 0:
        raise ValueError("reflected path must be a non-empty sequence")
    if np.any(r < 0):
        raise ValueError("reflected path has negative entries")
    if r[0] != 0:
        raise ValueError("reflected path must start at 0")
    if r.size > 1 and not np.all(np.abs(np.diff(r)) == 1):
        raise ValueError("reflected path must move by exactly 1 each step")


def decompose_excursions(reflected) -> ExcursionDecomposition:
    r = np.asarray(reflected, dtype=np.int64)
    _check_reflected(r)
    zeros = np.flatnonzero(r == 0)
    # zeros are isolated, so consecutive zeros bound exactly one excursion
    intervals = list(zip(zeros[:-1].tolist(), zeros[1:].tolist()))
    incomplete = bool(zeros[-1] != r.size - 1)
    if incomplete:
        intervals.append((int(zeros[-1]), r.size - 1))
    return ExcursionDecomposition(intervals, incomplete)


def excursion_index(reflected: np.ndarray) -> np.ndarray:
    """Index of the excursion containing each time; -1 at zeros."""
    r = np.asarray(reflected)
    idx = np.cumsum(r == 0) - 1
    return np.where(r == 0, -1, idx)


def apply_excursion_signs(reflected, signs) -> SimpleWalkPath:
    r = np.asarray(reflected, dtype=np.int64)
    _check_reflected(r)
    signs = np.asarray(signs, dtype=np.int64)
    n_exc = int(np.count_nonzero(r[:-1] == 0))
    if signs.size < n_exc:
        raise ValueError(f"need {n_exc} signs, got {signs.size}")
    if n_exc == 0:
        return SimpleWalkPath(r)
    idx = excursion_index(r)
    out = np.where(idx < 0, 0, r * signs[np.maximum(idx, 0)])
    return SimpleWalkPath(out)


def sign_excursions(reflected, signs: RngStream) -> SimpleWalkPath:
    """Give every excursion of ``reflected`` (including an unfinished last one)
    an independent fair sign."""
    r = np.asarray(reflected, dtype=np.int64)
    _check_reflected(r)
    n_exc = int(np.count_nonzero(r[:-1] == 0))
    return apply_excursion_signs(r, signs.signs(n_exc))
