"""Comb walk built from two independent simple walks and geometric run lengths.

The walk alternates between axis phases and tooth phases. In axis phase N it
copies G_{N+1} further steps of S1; in tooth phase N it copies the next full
excursion of S2 away from zero. Intervals are half-open on the left, (a, b],
with the initial axis segment [0, T_1].
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from combwalk import _kernels
from combwalk.localtime import return_times
from combwalk.rng import RngStream
from combwalk.walk import CombPath, SimpleWalkPath, sample_comb_endpoint, sample_simple_walk

AXIS, TOOTH = 0, 1


class CouplingExhausted(ValueError):
    """Inputs ran out before the horizon was reached."""

    def __init__(self, which: str, step: int, phase: int):
        super().__init__(f"{which} exhausted at step {step} (phase N={phase})")
        self.which = which
        self.step = step
        self.phase = phase


def geometric_from_uniform(u):
    """Inverse CDF of P(G = k) = 2^-(k+1): G = floor(-log2(1 - u))."""
    u = np.asarray(u, dtype=float)
    return np.floor(-np.log2(1.0 - u)).astype(np.int64)


def sample_geometric(rng: RngStream, size: int | None = None):
    if size is None:
        return int(geometric_from_uniform(rng.uniform(1))[0])
    return geometric_from_uniform(rng.uniform(size))


@dataclass(frozen=True)
class CouplingSchedule:
    G: np.ndarray
    T: np.ndarray  # T[0] = 0, T[N] = G_1 + ... + G_N
    rho2: np.ndarray

    @classmethod
    def from_inputs(cls, G, S2) -> "CouplingSchedule":
        G = np.asarray(G, dtype=np.int64)
        T = np.concatenate(([0], np.cumsum(G)))
        return cls(G, T, return_times(S2))


@dataclass(frozen=True)
class CoupledCombPath:
    path: CombPath
    kind: np.ndarray  # AXIS / TOOTH per index
    phase: np.ndarray  # N per index

    @property
    def completed_excursions(self) -> int:
        """Number of tooth excursions finished by the horizon."""
        done = (self.kind == TOOTH) & (self.path.ys == 0)
        return int(np.count_nonzero(done))

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "x", "y", "phase", "N"])
        names = ("axis", "tooth")
        rows = zip(self.path.xs.tolist(), self.path.ys.tolist(), self.kind.tolist(), self.phase.tolist())
        for i, (x, y, k, big_n) in enumerate(rows):
            w.writerow([i, x, y, names[k], big_n])


def _as_values(s) -> np.ndarray:
    return s.values if isinstance(s, SimpleWalkPath) else np.asarray(s, dtype=np.int64)


def build_comb_from_pair(S1, S2, G, n: int) -> CoupledCombPath:
    if n < 0:
        raise ValueError("n must be non-negative")
    s1, s2 = _as_values(S1), _as_values(S2)
    g = np.asarray(G, dtype=np.int64)
    if np.any(g < 0):
        raise ValueError("geometric variables must be non-negative")
    xs, ys, kind, phase, status, reached = _kernels.coupled_path(s1, s2, g, n)
    if status != _kernels.OK:
        which = {_kernels.G_EXHAUSTED: "G", _kernels.S1_EXHAUSTED: "S1", _kernels.S2_EXHAUSTED: "S2"}[status]
        raise CouplingExhausted(which, int(reached), int(phase[reached]))
    return CoupledCombPath(CombPath(xs, ys), kind, phase)


def coupled_by_formula(S1, S2, G, n: int) -> CombPath:
    """Reference evaluation of the phase formulas, one time index at a time.

    Quadratic-ish and slow; used only to cross-check :func:`build_comb_from_pair`.
    """
    s1, s2 = _as_values(S1), _as_values(S2)
    sched = CouplingSchedule.from_inputs(G, s2)
    T, rho = sched.T, sched.rho2
    xs, ys = [0], [0]
    for m in range(1, n + 1):
        for big_n in range(len(T) - 1):
            if big_n >= len(rho):
                raise CouplingExhausted("S2", m, big_n)
            lo = T[big_n] + rho[big_n]
            mid = T[big_n + 1] + rho[big_n]
            if lo < m <= mid:
                xs.append(int(s1[m - rho[big_n]]))
                ys.append(0)
                break
            if big_n + 1 < len(rho):
                hi = T[big_n + 1] + rho[big_n + 1]
            else:
                # unfinished excursion: known to last at least to the end of S2
                hi = T[big_n + 1] + len(s2) - 1
                if m > hi:
                    raise CouplingExhausted("S2", m, big_n)
            if mid < m <= hi:
                xs.append(int(s1[T[big_n + 1]]))
                ys.append(int(s2[m - T[big_n + 1]]))
                break
        else:
            raise CouplingExhausted("G", m, len(T) - 1)
    return CombPath(xs, ys)


def _stream_parts(rng: RngStream) -> tuple[RngStream, RngStream, RngStream]:
    return rng.split(1), rng.split(2), rng.split(3)


def _sample_with_inputs(n: int, rng: RngStream) -> tuple[CoupledCombPath, SimpleWalkPath]:
    r1, r2, rg = _stream_parts(rng)
    s1 = sample_simple_walk(n, r1)
    s2 = sample_simple_walk(n, r2)
    g = sample_geometric(rg, 4 * math.isqrt(n) + 16)
    while True:
        try:
            return build_comb_from_pair(s1, s2, g, n), s2
        except CouplingExhausted as exc:
            if exc.which != "G":
                raise
            g = np.concatenate((g, sample_geometric(rg, g.size)))


def sample_coupled_path(n: int, rng: RngStream) -> CoupledCombPath:
    """Draw S1 and S2 of length n (always enough) and extend G on demand."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _sample_with_inputs(n, rng)[0]


def coupled_endpoint(n: int, rng: RngStream) -> tuple[int, int, int]:
    cp = sample_coupled_path(n, rng)
    on_axis = int(np.count_nonzero(cp.path.ys[1:] == 0))
    return int(cp.path.xs[-1]), int(cp.path.ys[-1]), on_axis


def direct_endpoint(n: int, rng: RngStream) -> tuple[int, int, int]:
    return sample_comb_endpoint(n, rng)


@dataclass(frozen=True)
class PhaseCountReport:
    n: int
    phase: int
    xi2: int
    gap: float

    def as_dict(self) -> dict:
        return {"n": self.n, "N": self.phase, "xi2_0_n": self.xi2, "normalized_gap": self.gap}


def lemma31_diagnostic(n: int, rng: RngStream) -> PhaseCountReport:
    """Compare the excursion counter N at time n with S2's own local time xi2(0, n)."""
    if n < 1000:
        raise ValueError("lemma31_diagnostic needs n >= 1000")
    cp, s2 = _sample_with_inputs(n, rng)
    big_n = cp.completed_excursions
    xi2 = int(np.count_nonzero(s2.values[1:] == 0))
    return PhaseCountReport(n, big_n, xi2, abs(xi2 - big_n) / n ** 0.25)
