"""The set of joint endpoint limit points (u, v) of the comb walk under LIL scaling.

    F(B, A, K) = 3 B^{4/3} / (2^{2/3} K^{1/3}) + A^2 / (1 - K)

and (u, v) is a limit point iff F(|u|, |v|, K) <= 1 for some K. Coordinates
here are those of the two-component Strassen class; multiply the first
coordinate by ``LIL_SCALE`` = 2^{3/4} to compare with C1 normalised by
n^{1/4} (log log n)^{3/4} alone.

K ranges over the closed interval [0, 1] with the continuous limits at the
ends: F(0, A, 0) = A^2 and F(B, 0, 1) = 3 B^{4/3} / 2^{2/3}. This makes the
extreme points (0, +-1) and (+-B_MAX, 0) members.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

B_MAX = 2 ** 0.5 * 3 ** -0.75
LIL_SCALE = 2 ** 0.75
LAST_BELOW_ONE = math.nextafter(1.0, 0.0)
ENERGY_K_FACTOR = 3 ** 0.75 * 2 ** -0.5  # slope multiplier inside |.|^{4/3}


@dataclass(frozen=True)
class DomainSpec:
    tol: float = 1e-12
    resolution: int = 10_000

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.resolution < 1000:
            raise ValueError("grid-oracle resolution must be at least 1000")


DEFAULT_DOMAIN = DomainSpec()


def _first_coeff(B: float) -> float:
    return 3.0 * B ** (4.0 / 3.0) / 2 ** (2.0 / 3.0)


def F_value(B: float, A: float, K: float) -> float:
    if B < 0 or A < 0:
        raise ValueError("F takes magnitudes; pass |u| and |v|")
    if not 0.0 <= K <= 1.0:
        raise ValueError("K must lie in [0, 1]")
    if K == 0.0:
        first = 0.0 if B == 0 else math.inf
    else:
        first = _first_coeff(B) / K ** (1.0 / 3.0)
    if K == 1.0:
        second = 0.0 if A == 0 else math.inf
    else:
        second = A * A / (1.0 - K)
    return first + second


def A_of_BK(B: float, K: float) -> float:
    """The A >= 0 with F(B, A, K) = 1, or 0 when the first term alone exceeds 1."""
    if B < 0 or not 0.0 <= K <= 1.0:
        raise ValueError("need B >= 0 and K in [0, 1]")
    if K == 0.0:
        return 1.0 if B == 0 else 0.0
    rest = 1.0 - _first_coeff(B) / K ** (1.0 / 3.0)
    if rest <= 0.0:
        return 0.0
    return math.sqrt((1.0 - K) * rest)


def bisect(f, lo: float, hi: float, tol: float = 0.0, max_iter: int = 200) -> float:
    """Root of ``f`` on [lo, hi] given f(lo) > 0 >= f(hi) or f(lo) < 0 <= f(hi)."""
    flo = f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= tol:
            break
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def K_of_B(B: float, spec: DomainSpec = DEFAULT_DOMAIN) -> float:
    """Maximiser over K of A(B, K).

    With a = 3 B^{4/3} / 2^{2/3}, setting d/dK [(1-K)(1 - a K^{-1/3})] = 0 gives
    g(K) = a + 2 a K - 3 K^{4/3} = 0, which is concave in K, positive at
    K = a^3 and negative at K = 1 whenever 0 < a < 1.
    """
    if not 0.0 <= B <= B_MAX * (1 + 1e-15):
        raise ValueError(f"B must lie in [0, {B_MAX}]")
    a = _first_coeff(B)
    if a == 0.0:
        return 0.0
    if a >= 1.0:
        return 1.0
    g = lambda K: a + 2.0 * a * K - 3.0 * K ** (4.0 / 3.0)
    return bisect(g, a ** 3, 1.0)


def inf_F(B: float, A: float) -> float:
    """min over closed K-range of F(B, A, K).

    F is convex in K: the first term falls and the second rises, so the
    minimiser is the unique zero of dF/dK = -(a/3) K^{-4/3} + A^2 / (1-K)^2.
    Multiplying by K^{4/3} (1-K)^2 gives h(K) = A^2 K^{4/3} - (a/3)(1-K)^2,
    increasing from -a/3 to A^2 on [0, 1] and free of overflow.
    """
    a = _first_coeff(B)
    if a == 0.0:
        return A * A
    if A * A == 0.0:
        return a
    A2 = A * A
    h = lambda K: A2 * K ** (4.0 / 3.0) - (a / 3.0) * (1.0 - K) ** 2
    lo, hi = 0.0, 1.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if h(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    # the root may sit closer to 0 or 1 than floats resolve; stay inside (0, 1)
    cands = [k for k in (lo, hi) if 0.0 < k < 1.0] or [min(max(lo, 5e-324), LAST_BELOW_ONE)]
    return min(F_value(B, A, k) for k in cands)


def d2_contains(u: float, v: float, spec: DomainSpec = DEFAULT_DOMAIN) -> bool:
    return inf_F(abs(u), abs(v)) <= 1.0 + spec.tol


def d2_contains_bruteforce(u: float, v: float, spec: DomainSpec = DEFAULT_DOMAIN) -> bool:
    """Same closure convention, minimum over K = i/resolution, i = 0..resolution."""
    B, A = abs(u), abs(v)
    ks = np.arange(spec.resolution + 1) / spec.resolution
    with np.errstate(divide="ignore", invalid="ignore"):
        first = np.where(ks > 0, _first_coeff(B) / np.cbrt(ks), 0.0 if B == 0 else np.inf)
        second = np.where(ks < 1, A * A / (1.0 - ks), 0.0 if A == 0 else np.inf)
    return bool(np.min(first + second) <= 1.0 + spec.tol)


@dataclass(frozen=True)
class BoundaryPolyline:
    """First-quadrant trace from (0, 1) to (B_MAX, 0)."""

    u: np.ndarray
    v: np.ndarray

    def four_quadrants(self) -> tuple[np.ndarray, np.ndarray]:
        """Closed loop: Q1 (0,1)->(B,0), Q4 ->(0,-1), Q3 ->(-B,0), Q2 ->(0,1)."""
        u, v = self.u, self.v
        us = np.concatenate((u, u[::-1][1:], -u[1:], -u[::-1][1:]))
        vs = np.concatenate((v, -v[::-1][1:], -v[1:], v[::-1][1:]))
        return us, vs

    def normals(self) -> tuple[np.ndarray, np.ndarray]:
        """Outward unit normals of the first-quadrant trace (axis directions at the ends)."""
        du = np.gradient(self.u)
        dv = np.gradient(self.v)
        # the Q1 trace runs left to right and downward, so (-dv, du) points away from the origin
        nu, nv = -dv, du
        norm = np.hypot(nu, nv)
        nu, nv = nu / norm, nv / norm
        nu[0], nv[0] = 0.0, 1.0
        nu[-1], nv[-1] = 1.0, 0.0
        return nu, nv

    def write_csv(self, fh, scale: float = 1.0) -> None:
        us, vs = self.four_quadrants()
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v"])
        for a, b in zip(us.tolist(), vs.tolist()):
            w.writerow([format(a * scale + 0.0, ".17g"), format(b + 0.0, ".17g")])


def trace_boundary(spec: DomainSpec = DEFAULT_DOMAIN, points: int = 256) -> BoundaryPolyline:
    if points < 16:
        raise ValueError("need at least 16 boundary points")
    Bs = np.linspace(0.0, B_MAX, points)
    Bs[-1] = B_MAX
    vs = np.array([A_of_BK(B, K_of_B(B, spec)) for B in Bs])
    vs = np.minimum.accumulate(vs)
    vs[-1] = 0.0
    return BoundaryPolyline(Bs, vs)


@dataclass(frozen=True)
class PiecewiseLinearPath:
    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        xs = [p[0] for p in pts]
        if len(pts) < 2 or xs[0] != 0.0 or xs[-1] != 1.0 or pts[0][1] != 0.0:
            raise ValueError("breakpoints must run from (0, 0) to x = 1")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoint x-coordinates must be strictly increasing")

    @property
    def xs(self) -> np.ndarray:
        return np.array([p[0] for p in self.breakpoints])

    def __call__(self, x):
        return np.interp(x, self.xs, [p[1] for p in self.breakpoints])


def strassen_energy(k: PiecewiseLinearPath, g: PiecewiseLinearPath) -> tuple[float, float]:
    """(int |c k'|^{4/3} + g'^2 dx, Lebesgue measure of {k' != 0, g != 0}).

    Both paths are linear between the merged breakpoints, so on each piece the
    integrand is constant and g vanishes on a set of positive length only if
    it vanishes at both ends.
    """
    xs = np.union1d(k.xs, g.xs)
    kv, gv = k(xs), g(xs)
    energy = 0.0
    violation = 0.0
    for i in range(xs.size - 1):
        h = xs[i + 1] - xs[i]
        dk = kv[i + 1] - kv[i]
        dg = gv[i + 1] - gv[i]
        if dk != 0.0:
            energy += (ENERGY_K_FACTOR * abs(dk)) ** (4.0 / 3.0) / h ** (1.0 / 3.0)
        if dg != 0.0:
            energy += dg * dg / h
        if dk != 0.0 and not (gv[i] == 0.0 and gv[i + 1] == 0.0):
            violation += h
    return energy, violation


def example_kg(B: float, A: float, K1: float, K2: float) -> tuple[PiecewiseLinearPath, PiecewiseLinearPath]:
    """k rises linearly to B on [0, K1] then stays; g is 0 on [0, K2] then rises linearly to A."""
    if not 0.0 <= K1 <= K2 <= 1.0:
        raise ValueError("need 0 <= K1 <= K2 <= 1")
    if K1 == 0.0:
        if B != 0.0:
            raise ValueError("K1 = 0 forces B = 0 (k would jump at 0)")
        k = ((0.0, 0.0), (1.0, 0.0))
    elif K1 == 1.0:
        k = ((0.0, 0.0), (1.0, B))
    else:
        k = ((0.0, 0.0), (K1, B), (1.0, B))
    if K2 == 1.0:
        if A != 0.0:
            raise ValueError("K2 = 1 forces A = 0 (g would jump at 1)")
        g = ((0.0, 0.0), (1.0, 0.0))
    elif K2 == 0.0:
        g = ((0.0, 0.0), (1.0, A))
    else:
        g = ((0.0, 0.0), (K2, 0.0), (1.0, A))
    return PiecewiseLinearPath(k), PiecewiseLinearPath(g)
