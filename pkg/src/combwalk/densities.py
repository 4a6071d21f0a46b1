"""Limit laws of the rescaled comb walk, evaluated by quadrature.

Models
------
dobrushin  density of U = X |Y|^(1/2), X, Y independent standard normals
joint-uz   joint density of (U, Z) where (|Y|, Z) is distributed like
           (Brownian local time at 0 up to time 1, W(1))
eta-abs-w  joint density of that pair (|Y|, Z) itself
normal     standard normal, used for the second coordinate

Semi-infinite integrals are cut at a radius where an explicit Gaussian-type
tail bound is below a tenth of the absolute tolerance; the finite piece goes
to adaptive Gauss-Kronrod (QUADPACK).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)
MILLS_SWITCH = 30.0
MODELS = ("dobrushin", "joint-uz", "eta-abs-w", "normal")


class QuadratureError(RuntimeError):
    def __init__(self, what: str, abserr: float):
        super().__init__(f"quadrature did not converge for {what} (error estimate {abserr:.3g})")
        self.abserr = abserr


@dataclass(frozen=True)
class QuadratureSpec:
    epsabs: float = 1e-13
    epsrel: float = 1e-11
    limit: int = 200

    def __post_init__(self):
        if self.epsabs <= 0 or self.epsrel <= 0 or self.limit < 1:
            raise ValueError("quadrature tolerances must be positive")

    def radius(self, tail_bound, start: float = 1.0) -> float:
        """Smallest R (doubling then bisecting from ``start``) with tail_bound(R) < epsabs/10."""
        target = self.epsabs / 10.0
        lo, hi = 0.0, start
        while tail_bound(hi) >= target:
            lo, hi = hi, 2.0 * hi
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if mid > 0 and tail_bound(mid) < target:
                hi = mid
            else:
                lo = mid
        return hi


DEFAULT_SPEC = QuadratureSpec()


def _quad(f, a, b, spec: QuadratureSpec, what: str, points=None) -> float:
    val, err, info = integrate.quad(
        f, a, b, epsabs=spec.epsabs, epsrel=spec.epsrel, limit=spec.limit, points=points, full_output=1
    )[:3]
    if err > max(spec.epsabs, spec.epsrel * abs(val)) * 100:
        raise QuadratureError(what, err)
    return val


def std_normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / SQRT2)


def std_normal_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) / SQRT2PI


def _tail_quartic(c: float):
    # for w >= R: (w^2+c) e^{-(w^2+c)^2/2} <= (1/2R) d/dw[-e^{-(w^2+c)^2/2}]
    return lambda r: math.exp(-0.5 * (r * r + c) ** 2) / (2.0 * r)


def dobrushin_density(u: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """(2/pi) * int_0^inf exp(-u^2/(2v^2) - v^4/2) dv."""
    u2 = float(u) * float(u)
    # tail of e^{-v^4/2} beyond R is at most e^{-R^4/2} / (2 R^3)
    scale = 2.0 / math.pi
    radius = spec.radius(lambda r: scale * math.exp(-0.5 * r ** 4) / (2.0 * r ** 3))
    if u2 == 0.0:
        f = lambda v: math.exp(-0.5 * v ** 4)
        points = None
    else:
        f = lambda v: math.exp(-u2 / (2.0 * v * v) - 0.5 * v ** 4) if v > 0 else 0.0
        peak = (u2 / 2.0) ** (1.0 / 6.0)
        points = [peak] if peak < radius else None
        radius = max(radius, 2.0 * peak)
    return scale * _quad(f, 0.0, radius, spec, f"dobrushin({u})", points)


def joint_density_uz(u: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """(1/2pi) int_0^inf (y+|z|) y^{-1/2} exp(-u^2/(2y) - (y+|z|)^2/2) dy, with y = w^2."""
    u2 = float(u) * float(u)
    c = abs(float(z))
    radius = spec.radius(lambda r: _tail_quartic(c)(r) / math.pi)
    if u2 == 0.0:
        f = lambda w: (w * w + c) * math.exp(-0.5 * (w * w + c) ** 2)
        points = None
    else:
        def f(w):
            if w <= 0.0:
                return 0.0
            y = w * w
            return (y + c) * math.exp(-u2 / (2.0 * y) - 0.5 * (y + c) ** 2)

        peak = (u2 / 2.0) ** (1.0 / 6.0)
        points = [peak] if peak < radius else None
        radius = max(radius, 2.0 * peak)
    return _quad(f, 0.0, radius, spec, f"joint_uz({u}, {z})", points) / math.pi


def eta_absw_density(y: float, z: float) -> float:
    if y < 0:
        raise ValueError("the local-time coordinate y must be non-negative")
    s = y + abs(z)
    return s * math.exp(-0.5 * s * s) / SQRT2PI


def local_time_laplace(theta: float, t: float) -> float:
    """E exp(-theta * eta(0, t)) = 2 exp(theta^2 t / 2) (1 - Phi(theta sqrt t)).

    The product form over/underflows early, so it is evaluated as
    erfcx(z / sqrt 2) with z = theta sqrt t, and beyond z = 30 by the Mills
    ratio series sqrt(2/pi)/z * sum_k (-1)^k (2k-1)!! / z^{2k}.
    """
    if theta <= 0 or t <= 0:
        raise ValueError("theta and t must be positive")
    z = theta * math.sqrt(t)
    if z <= MILLS_SWITCH:
        return float(special.erfcx(z / SQRT2))
    inv = 1.0 / (z * z)
    term, total = 1.0, 1.0
    for k in range(1, 8):
        term *= -(2 * k - 1) * inv
        total += term
    return math.sqrt(2.0 / math.pi) / z * total


def dobrushin_cdf_mixture(x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """P(U <= x) = int_0^inf 2 phi(y) Phi(x / sqrt y) dy, a route independent of the density."""
    if x == 0:
        return 0.5
    # integrate the deviation from 1/2 so the result keeps full relative accuracy
    dev = lambda y: 2.0 * std_normal_pdf(y) * (0.5 * math.erf(x / math.sqrt(2.0 * y))) if y > 0 else 0.0
    radius = spec.radius(lambda r: math.exp(-0.5 * r * r) / r)
    return 0.5 + _quad(dev, 0.0, radius, spec, f"dobrushin_cdf({x})")


def joint_cell_probability(u_lo: float, u_hi: float, z_lo: float, z_hi: float,
                           spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Mass of the joint-uz law on [u_lo, u_hi] x [z_lo, z_hi] (infinite ends allowed).

    Conditional on |Y| = y, U is N(0, y); the z-integral of the (|Y|, Z)
    density is elementary, leaving one quadrature over y.
    """

    def z_mass(y):
        # int over [z_lo, z_hi] of (y+|z|) e^{-(y+|z|)^2/2} / sqrt(2 pi)
        def upper(a, b):  # 0 <= a <= b
            return math.exp(-0.5 * (y + a) ** 2) - (math.exp(-0.5 * (y + b) ** 2) if b != math.inf else 0.0)

        total = 0.0
        if z_hi > 0:
            total += upper(max(z_lo, 0.0), z_hi)
        if z_lo < 0:
            total += upper(max(-z_hi, 0.0), -z_lo)
        return total / SQRT2PI

    def u_mass(y):
        if y <= 0:
            return 1.0 if u_lo < 0 <= u_hi else 0.0
        s = math.sqrt(y)
        hi = 1.0 if u_hi == math.inf else std_normal_cdf(u_hi / s)
        lo = 0.0 if u_lo == -math.inf else std_normal_cdf(u_lo / s)
        return hi - lo

    radius = spec.radius(lambda r: 2.0 * math.exp(-0.5 * r * r) / (SQRT2PI * r), start=4.0)
    return _quad(lambda y: z_mass(y) * u_mass(y), 0.0, radius, spec, "joint cell")


@dataclass
class CdfTable:
    points: np.ndarray
    density: np.ndarray
    cdf: np.ndarray

    def __call__(self, x):
        """Piecewise cubic Hermite interpolation, using the density as slope."""
        x = np.asarray(x, dtype=float)
        p, d, c = self.points, self.density, self.cdf
        i = np.clip(np.searchsorted(p, x, side="right") - 1, 0, p.size - 2)
        h = p[i + 1] - p[i]
        t = np.clip((x - p[i]) / h, 0.0, 1.0)
        h00 = 2 * t ** 3 - 3 * t ** 2 + 1
        h10 = t ** 3 - 2 * t ** 2 + t
        h01 = -2 * t ** 3 + 3 * t ** 2
        h11 = t ** 3 - t ** 2
        out = h00 * c[i] + h10 * h * d[i] + h01 * c[i + 1] + h11 * h * d[i + 1]
        out = np.where(x < p[0], c[0], np.where(x > p[-1], c[-1], out))
        return np.clip(out, 0.0, 1.0)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["point", "density", "cdf"])
        for row in zip(self.points.tolist(), self.density.tolist(), self.cdf.tolist()):
            w.writerow([format(v, ".17g") for v in row])


@dataclass
class DensityModel:
    """A named limit law. Two-dimensional laws are sliced at fixed ``z``
    and their table accumulates along the first coordinate."""

    identifier: str
    spec: QuadratureSpec = DEFAULT_SPEC
    z: float = 0.0
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.identifier not in MODELS:
            raise ValueError(f"unknown model {self.identifier!r}; choose from {MODELS}")

    @property
    def lower(self) -> float:
        return 0.0 if self.identifier == "eta-abs-w" else -math.inf

    def density(self, x: float) -> float:
        if self.identifier == "dobrushin":
            return dobrushin_density(x, self.spec)
        if self.identifier == "joint-uz":
            return joint_density_uz(x, self.z, self.spec)
        if self.identifier == "eta-abs-w":
            return eta_absw_density(x, self.z) if x >= 0 else 0.0
        return std_normal_pdf(x)

    def mass_below(self, x: float) -> float:
        """Integral of the (sliced) density from its lower end to ``x``."""
        if self.identifier == "normal":
            return std_normal_cdf(x)
        if self.identifier == "dobrushin":
            return dobrushin_cdf_mixture(x, self.spec)
        if self.identifier == "eta-abs-w":
            if x <= 0:
                return 0.0
            c = abs(self.z)
            return (math.exp(-0.5 * c * c) - math.exp(-0.5 * (x + c) ** 2)) / SQRT2PI
        # joint-uz slice: symmetric in u, total mass phi(z)
        half = std_normal_pdf(self.z) / 2.0
        if x == 0:
            return half
        piece = _quad(lambda s: self.density(s), 0.0, abs(x), self.spec, "joint-uz slice")
        return half + math.copysign(piece, x)


def cdf_table(model: DensityModel, grid) -> CdfTable:
    """Density and cumulative mass on a sorted grid.

    The first entry is the exact mass below ``grid[0]``; each later entry adds
    the quadrature of the density over one grid cell, so the column is the
    true CDF and reaches 1 only where the grid covers the tails.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be a strictly increasing sequence of at least 2 points")
    key = (grid.size, float(grid[0]), float(grid[-1]), hash(grid.tobytes()))
    if key in model._cache:
        return model._cache[key]
    dens = np.array([model.density(x) for x in grid])
    cdf = np.empty_like(grid)
    cdf[0] = model.mass_below(max(grid[0], model.lower))
    for i in range(1, grid.size):
        a, b = max(grid[i - 1], model.lower), grid[i]
        inc = _quad(model.density, a, b, model.spec, "cdf cell") if b > a else 0.0
        cdf[i] = cdf[i - 1] + inc
    tol = 10 * model.spec.epsabs * grid.size
    if np.any(np.diff(cdf) < -tol):
        raise QuadratureError("cdf table (non-monotone)", float(-np.min(np.diff(cdf))))
    table = CdfTable(grid, dens, cdf)
    model._cache[key] = table
    return table
