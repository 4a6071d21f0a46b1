"""Comb-lattice geometry and the direct sampler.

The comb keeps every vertical edge of Z^2 but only the horizontal edges on
the x-axis, so axis sites have four neighbours and every other site two.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from combwalk import _kernels
from combwalk.rng import RngStream


class Site(NamedTuple):
    x: int
    y: int


def degree(s: Site) -> int:
    return 4 if s[1] == 0 else 2


def neighbors(s: Site) -> set[Site]:
    x, y = s
    out = {Site(x, y + 1), Site(x, y - 1)}
    if y == 0:
        out |= {Site(x + 1, 0), Site(x - 1, 0)}
    return out


def step_comb(s: Site, u: float) -> Site:
    """Map a uniform draw to the next site.

    On the axis the quartiles of ``u`` go, in order, to (+x, -x, +y, -y); off
    the axis ``u < 1/2`` moves up and anything else moves down.
    """
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must lie in [0, 1), got {u!r}")
    x, y = s
    if y == 0:
        if u < 0.25:
            return Site(x + 1, 0)
        if u < 0.5:
            return Site(x - 1, 0)
        if u < 0.75:
            return Site(x, 1)
        return Site(x, -1)
    return Site(x, y + 1) if u < 0.5 else Site(x, y - 1)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CombPath:
    """Trajectory ``(xs[i], ys[i])``, i = 0..n, stored column-wise."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xs", _frozen(self.xs))
        object.__setattr__(self, "ys", _frozen(self.ys))
        if self.xs.shape != self.ys.shape or self.xs.ndim != 1 or self.xs.size == 0:
            raise ValueError("xs and ys must be non-empty 1-d arrays of equal length")

    @property
    def n(self) -> int:
        return self.xs.size - 1

    @property
    def sites(self) -> list[Site]:
        return [Site(int(x), int(y)) for x, y in zip(self.xs, self.ys)]

    @property
    def endpoint(self) -> Site:
        return Site(int(self.xs[-1]), int(self.ys[-1]))

    def __eq__(self, other):
        if not isinstance(other, CombPath):
            return NotImplemented
        return np.array_equal(self.xs, other.xs) and np.array_equal(self.ys, other.ys)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SimpleWalkPath:
    """Path ``S(0..n)`` of a +-1 walk started at 0."""

    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        object.__setattr__(self, "values", v)
        if v.ndim != 1 or v.size == 0 or v[0] != 0:
            raise ValueError("a simple walk path starts at S(0) = 0")
        if v.size > 1 and not np.all(np.abs(np.diff(v)) == 1):
            raise ValueError("simple walk increments must be exactly +-1")

    @property
    def n(self) -> int:
        return self.values.size - 1

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, SimpleWalkPath):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None


def legal_steps(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Boolean per step: is (xs[i], ys[i]) -> (xs[i+1], ys[i+1]) a comb edge."""
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    dx = np.diff(xs)
    dy = np.diff(ys)
    vertical = (dx == 0) & (np.abs(dy) == 1)
    horizontal = (np.abs(dx) == 1) & (dy == 0) & (ys[:-1] == 0)
    return vertical | horizontal


def is_legal_path(path: CombPath, origin: bool = True) -> bool:
    if origin and (path.xs[0] != 0 or path.ys[0] != 0):
        return False
    return bool(np.all(legal_steps(path.xs, path.ys)))


def transition_counts(path: CombPath) -> tuple[np.ndarray, np.ndarray]:
    """Outcome counts of steps leaving the axis, ordered (+x, -x, +y, -y), and of
    steps leaving a tooth, ordered (up, down)."""
    dx = np.diff(path.xs)
    dy = np.diff(path.ys)
    on = path.ys[:-1] == 0
    axis = np.array([np.count_nonzero(on & (dx == 1)), np.count_nonzero(on & (dx == -1)),
                     np.count_nonzero(on & (dy == 1)), np.count_nonzero(on & (dy == -1))])
    tooth = np.array([np.count_nonzero(~on & (dy == 1)), np.count_nonzero(~on & (dy == -1))])
    return axis, tooth


def sample_comb_path(n: int, rng: RngStream) -> CombPath:
    if n < 0:
        raise ValueError("n must be non-negative")
    xs, ys = _kernels.comb_path(rng.uniform(n), 0, 0)
    return CombPath(xs, ys)


def sample_comb_endpoint(n: int, rng: RngStream) -> tuple[int, int, int]:
    """(C1(n), C2(n), #{1<=i<=n: C2(i)=0}) using the same draws as :func:`sample_comb_path`."""
    x, y, on_axis = _kernels.comb_endpoint(rng.uniform(n))
    return int(x), int(y), int(on_axis)


def sample_simple_walk(n: int, rng: RngStream) -> SimpleWalkPath:
    if n < 0:
        raise ValueError("n must be non-negative")
    values = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(rng.signs(n), out=values[1:])
    return SimpleWalkPath(values)


def write_path_csv(path: CombPath, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["step", "x", "y"])
    for i, (x, y) in enumerate(zip(path.xs.tolist(), path.ys.tolist())):
        w.writerow([i, x, y])
