"""Radial base-station densities and the geometry reductions onto them.

Everything downstream (sampling, characteristic functions, simulation) sees a
1-D radial density lambda(r): the expected number of stations per unit of
distance from the receiver.  This module provides the three concrete density
kinds, the reductions that produce them from line/planar/volume geometries,
and the measure-level helpers (cumulative mass, inverse, eps-weighted tails)
the rest of the package is built on.

Conventions
-----------
* Indicator-style segment membership is half-open: a <= x < b.
* Tabulated densities interpolate piecewise-linearly, clamp to the first
  value below the grid, and are exactly zero beyond the last grid point.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SamplingError, StabilityError

__all__ = [
    "BALL_SURFACE",
    "RadialDensity",
    "PowerLawDensity",
    "TabulatedDensity",
    "ShiftedLineDensity",
    "SpatialDensity",
    "homogeneous_equivalent",
    "map_to_1d",
    "translate_density",
    "translate_spatial",
    "scale_density",
]

# Surface measure of the unit sphere boundary by dimension: a homogeneous
# field of intensity lambda0 in l dimensions has radial density
# lambda0 * BALL_SURFACE[l] * r^(l-1).
BALL_SURFACE = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}


class RadialDensity:
    """Base interface for radial densities lambda(r), r >= 0."""

    #: end of the support, math.inf when unbounded
    support_end: float = math.inf

    def __call__(self, r):
        raise NotImplementedError

    def cumulative(self, r):
        """Lambda(r) = integral of lambda over [0, r]."""
        raise NotImplementedError

    def inv_cumulative(self, q):
        """Smallest r with Lambda(r) >= q (q within [0, Lambda(support_end)))."""
        raise NotImplementedError

    def sup_on(self, r_max):
        """Upper envelope of lambda on [0, r_max] for rejection sampling."""
        raise NotImplementedError

    def tail_weighted(self, eps, r):
        """integral_r^inf lambda(s) * s^(-eps) ds (the far-field power mass)."""
        raise NotImplementedError

    def origin_exponent(self):
        """p0 such that lambda(r) ~ c * r^p0 as r -> 0 (drives far tails)."""
        raise NotImplementedError

    def check_stability(self, eps):
        """Raise StabilityError unless the density supports eps-path-loss."""
        raise NotImplementedError


@dataclass(frozen=True)
class PowerLawDensity(RadialDensity):
    """lambda(r) = c * r^p on r >= 0, the closed-form workhorse.

    Requires c > 0 and p > -1 (finite station count near the origin).
    Homogeneous l-dimensional fields are the special case p = l - 1.
    """

    c: float
    p: float

    def __post_init__(self):
        if not (self.c > 0.0):
            raise DomainError(f"power-law coefficient must be positive, got {self.c}")
        if not (self.p > -1.0):
            raise StabilityError(
                f"power-law exponent must exceed -1 for finite near mass, got {self.p}"
            )

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.p == 0.0:
            return np.full_like(r, self.c)
        with np.errstate(divide="ignore"):
            return self.c * np.power(r, self.p)

    def cumulative(self, r):
        r = np.asarray(r, dtype=float)
        return self.c * np.power(r, self.p + 1.0) / (self.p + 1.0)

    def inv_cumulative(self, q):
        q = np.asarray(q, dtype=float)
        return np.power(q * (self.p + 1.0) / self.c, 1.0 / (self.p + 1.0))

    def sup_on(self, r_max):
        if self.p >= 0.0:
            return float(self(r_max))
        return math.inf  # decreasing, unbounded at the origin: use inverse-CDF

    def tail_weighted(self, eps, r):
        if self.p - eps <= -1.0 + 1e-12 and self.p - eps >= -1.0 - 1e-12:
            raise DomainError("eps-weighted tail diverges logarithmically at p - eps = -1")
        if self.p - eps > -1.0:
            return math.inf
        expo = self.p - eps + 1.0
        return -self.c * r**expo / expo

    def origin_exponent(self):
        return self.p

    def check_stability(self, eps):
        if self.p - eps >= -1.0:
            raise StabilityError(
                f"far-field interference diverges: need p - eps < -1, got p={self.p}, eps={eps}"
            )

    def scaled(self, a):
        return PowerLawDensity(self.c * a ** (-self.p - 1.0), self.p)


class TabulatedDensity(RadialDensity):
    """Piecewise-linear density over a strictly increasing radius grid.

    Zero beyond the last grid point; clamped to the first value below the
    first grid point.  The cumulative measure is exact (trapezoid rule is
    exact for piecewise-linear integrands), and its inverse solves the
    per-segment quadratic in closed form.
    """

    def __init__(self, r_grid, values):
        r_grid = np.asarray(r_grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if r_grid.ndim != 1 or r_grid.size < 2:
            raise DomainError("tabulated density needs at least two grid points")
        if r_grid.shape != values.shape:
            raise DomainError("grid and value arrays must have matching shapes")
        if not np.all(np.diff(r_grid) > 0.0):
            raise DomainError("tabulated radius grid must be strictly increasing")
        if r_grid[0] < 0.0:
            raise DomainError("radii must be non-negative")
        if np.any(values < 0.0):
            raise DomainError("density values must be non-negative")
        self.r_grid = r_grid
        self.values = values
        self.support_end = float(r_grid[-1])
        # exact cumulative at the nodes; leading zero handles the clamp region
        seg = 0.5 * (values[1:] + values[:-1]) * np.diff(r_grid)
        self._cum = np.concatenate([[0.0], np.cumsum(seg)])
        self._head = r_grid[0] * values[0]  # clamped mass below the first node

    @classmethod
    def from_csv(cls, path):
        """Load from a two-column CSV with header row (r, lambda)."""
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise DomainError(f"{path}: empty density file")
        header = [h.strip().lower() for h in rows[0]]
        if len(header) < 2 or header[0] != "r" or header[1] != "lambda":
            raise DomainError(f"{path}: expected header 'r,lambda', got {rows[0]}")
        try:
            data = np.array([[float(x[0]), float(x[1])] for x in rows[1:]])
        except (ValueError, IndexError) as exc:
            raise DomainError(f"{path}: malformed density row: {exc}") from exc
        return cls(data[:, 0], data[:, 1])

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.interp(r, self.r_grid, self.values, left=self.values[0], right=0.0)

    def cumulative(self, r):
        r = np.asarray(r, dtype=float)
        below = np.clip(r, 0.0, self.r_grid[0]) * self.values[0]
        rc = np.clip(r, self.r_grid[0], self.r_grid[-1])
        idx = np.clip(np.searchsorted(self.r_grid, rc, side="right") - 1, 0, len(self.r_grid) - 2)
        r0 = self.r_grid[idx]
        dv = rc - r0
        lam0 = self.values[idx]
        slope = (self.values[idx + 1] - lam0) / (self.r_grid[idx + 1] - r0)
        inside = self._cum[idx] + lam0 * dv + 0.5 * slope * dv * dv
        return below + np.where(r <= self.r_grid[0], 0.0, inside - 0.0)

    def total_mass(self):
        return float(self._head + self._cum[-1])

    def inv_cumulative(self, q):
        q = np.atleast_1d(np.asarray(q, dtype=float))
        out = np.empty_like(q)
        total = self.total_mass()
        if np.any(q < 0.0) or np.any(q > total * (1 + 1e-12)):
            raise DomainError("cumulative mass query outside [0, total]")
        in_head = q <= self._head
        if self._head > 0:
            out[in_head] = q[in_head] / self.values[0]
        else:
            out[in_head] = self.r_grid[0]
        qq = q[~in_head] - self._head
        idx = np.clip(np.searchsorted(self._cum, qq, side="right") - 1, 0, len(self._cum) - 2)
        r0 = self.r_grid[idx]
        lam0 = self.values[idx]
        slope = (self.values[idx + 1] - lam0) / (self.r_grid[idx + 1] - r0)
        need = qq - self._cum[idx]
        # solve lam0*d + slope*d^2/2 = need for d on the segment
        with np.errstate(invalid="ignore", divide="ignore"):
            disc = np.sqrt(np.maximum(lam0 * lam0 + 2.0 * slope * need, 0.0))
            d = np.where(
                np.abs(slope) > 1e-300 * np.maximum(lam0, 1.0),
                (disc - lam0) / np.where(slope == 0.0, 1.0, slope),
                np.where(lam0 > 0.0, need / np.where(lam0 == 0.0, 1.0, lam0), 0.0),
            )
        out[~in_head] = r0 + d
        return out if out.size > 1 else float(out[0])

    def sup_on(self, r_max):
        if r_max >= self.r_grid[-1]:
            return float(self.values.max())
        mask = self.r_grid <= r_max
        cand = self.values[mask].max() if mask.any() else 0.0
        return float(max(cand, float(self(r_max)), self.values[0]))

    def tail_weighted(self, eps, r):
        if r >= self.r_grid[-1]:
            return 0.0
        lo = max(r, self.r_grid[0] if self.r_grid[0] > 0 else 0.0)
        # exact segment-wise integral of (linear) * s^(-eps)
        total = 0.0
        grid = self.r_grid
        for i in range(len(grid) - 1):
            a, b = grid[i], grid[i + 1]
            if b <= lo:
                continue
            a = max(a, lo)
            la = float(self(a))
            lb = self.values[i + 1]
            slope = (lb - la) / (b - a) if b > a else 0.0
            total += _segment_weighted(a, b, la, slope, eps)
        if r < self.r_grid[0]:  # clamped head piece
            a, b = r, self.r_grid[0]
            if a <= 0.0 and eps >= 1.0:
                raise DomainError("eps-weighted tail from r=0 diverges for clamped head")
            total += _segment_weighted(max(a, 1e-300), b, self.values[0], 0.0, eps)
        return total

    def origin_exponent(self):
        return 0.0 if self.values[0] > 0.0 else 1.0

    def check_stability(self, eps):
        return None  # bounded support: eps-weighted far tail is finite

    def scaled(self, a):
        return TabulatedDensity(self.r_grid * a, self.values / a)


def _segment_weighted(a, b, lam_a, slope, eps):
    """integral_a^b (lam_a + slope*(s-a)) * s^(-eps) ds, exact."""

    def power_int(expo):
        if abs(expo + 1.0) < 1e-12:
            if a == 0.0:
                raise DomainError("eps-weighted segment integral diverges at r=0")
            return math.log(b / a)
        if a == 0.0 and expo + 1.0 < 0.0:
            raise DomainError("eps-weighted segment integral diverges at r=0")
        return (b ** (expo + 1.0) - a ** (expo + 1.0)) / (expo + 1.0)

    const = lam_a - slope * a
    return const * power_int(-eps) + slope * power_int(1.0 - eps)


class ShiftedLineDensity(RadialDensity):
    """Distance density seen from a point at offset y inside a line field.

    For a station field on the real line with linear density d(x), the radial
    density of distances from the observation point y is
    lambda(r) = d(y - r) + d(y + r).  The line density is an arbitrary
    callable, so cumulative quantities are evaluated on a lazily grown
    internal grid.
    """

    def __init__(self, line_density, y, grid_step=None):
        if y < 0.0:
            raise DomainError("offset y must be non-negative")
        self.line_density = line_density
        self.y = float(y)
        self._step = grid_step if grid_step else max(self.y, 1.0) / 2048.0
        self._grid_end = 0.0
        self._grid = np.zeros(1)
        self._cum = np.zeros(1)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        d = self.line_density
        return np.asarray(d(self.y - r), dtype=float) + np.asarray(d(self.y + r), dtype=float)

    def _ensure_grid(self, r):
        end = float(np.max(r))
        if end <= self._grid_end:
            return
        end = max(end, 2.0 * self._step)
        n = int(math.ceil(end / self._step)) + 1
        grid = np.linspace(0.0, end, n)
        vals = self(grid)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(grid))])
        self._grid, self._cum, self._grid_end = grid, cum, end

    def cumulative(self, r):
        r = np.asarray(r, dtype=float)
        self._ensure_grid(r)
        return np.interp(r, self._grid, self._cum)

    def inv_cumulative(self, q):
        q = np.asarray(q, dtype=float)
        hi = max(2.0 * self.y, 1.0)
        while self.cumulative(hi) < np.max(q):
            hi *= 2.0
            if hi > 1e12:
                raise DomainError("cumulative mass never reaches requested level")
        return np.interp(q, self._cum, self._grid)

    def sup_on(self, r_max):
        self._ensure_grid(np.asarray(r_max))
        mask = self._grid <= r_max
        return float(self(self._grid[mask]).max()) if mask.any() else float(self(0.0))

    def tail_weighted(self, eps, r):
        if r <= 0.0:
            raise DomainError("eps-weighted tail needs r > 0 for a callable line density")
        # integrate on a doubling grid until the increment is negligible
        total, lo = 0.0, r
        for _ in range(60):
            hi = lo * 2.0
            s = np.linspace(lo, hi, 257)
            seg = np.trapezoid(self(s) * s ** (-eps), s)
            total += seg
            if seg < 1e-14 * max(total, 1e-300) or self(np.array([hi])).max() == 0.0:
                break
            lo = hi
        return total

    def origin_exponent(self):
        return 0.0 if float(self(np.array([1e-9]))[0]) > 0.0 else 1.0

    def check_stability(self, eps):
        return None  # integrability of the callable is the caller's contract

    def scaled(self, a):
        d, y = self.line_density, self.y
        return ShiftedLineDensity(lambda x: np.asarray(d(np.asarray(x) / a)) / a, a * y)


@dataclass(frozen=True)
class SpatialDensity:
    """A station density over the plane (dim=2) or space (dim=3).

    ``fn`` takes polar coordinates about the origin: (r, theta) for dim=2,
    (r, theta, phi) for dim=3 with theta the polar angle.  Only the angular
    reduction onto a radial density is supported here.
    """

    fn: object
    dim: int

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise DomainError("spatial densities are 2-D or 3-D")


def homogeneous_equivalent(lambda0, dim):
    """Radial density of a homogeneous intensity-lambda0 field in `dim` dims."""
    if dim not in BALL_SURFACE:
        raise DomainError(f"dimension must be 1, 2 or 3, got {dim}")
    if not (lambda0 > 0.0):
        raise DomainError(f"intensity must be positive, got {lambda0}")
    return PowerLawDensity(lambda0 * BALL_SURFACE[dim], dim - 1.0)


def map_to_1d(spatial, r_grid, n_theta=256, n_polar=64):
    """Collapse a spatial density to the radial density of distances.

    Integrates out the angular coordinates on each radius of ``r_grid``:
    lambda(r) = r * int s(r, th) dth in 2-D and
    lambda(r) = r^2 * int int s(r, th, ph) sin(th) dph dth in 3-D.
    Periodic angles use uniform (trapezoid-exact) grids; the polar angle uses
    Gauss-Legendre in cos(theta).
    """
    r_grid = np.asarray(r_grid, dtype=float)
    if spatial.dim == 2:
        theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
        vals = np.array(
            [r * np.mean([spatial.fn(r, t) for t in theta]) * 2.0 * math.pi for r in r_grid]
        )
    else:
        u, w = np.polynomial.legendre.leggauss(n_polar)  # u = cos(theta)
        theta = np.arccos(u)
        phi = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
        vals = np.empty_like(r_grid)
        for i, r in enumerate(r_grid):
            inner = np.array(
                [np.mean([spatial.fn(r, t, p) for p in phi]) * 2.0 * math.pi for t in theta]
            )
            vals[i] = r * r * np.dot(w, inner)
    return TabulatedDensity(r_grid, np.maximum(vals, 0.0))


def translate_density(line_density, y):
    """Distance density from offset y in a 1-D field with density d(x)."""
    return ShiftedLineDensity(line_density, y)


def translate_spatial(spatial, offset, r_grid, n_theta=256, n_polar=64):
    """Distance density from an off-origin point in a 2-D/3-D field.

    ``offset`` is the receiver location given as distance from the origin
    (placed on the x-axis without loss of generality for the supported
    axially-evaluated densities).
    """
    r_grid = np.asarray(r_grid, dtype=float)
    D = float(offset)
    if spatial.dim == 2:
        theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
        ct, st = np.cos(theta), np.sin(theta)
        vals = np.empty_like(r_grid)
        for i, r in enumerate(r_grid):
            x, yv = D + r * ct, r * st
            rho = np.hypot(x, yv)
            ang = np.arctan2(yv, x)
            vals[i] = r * np.mean([spatial.fn(rr, aa) for rr, aa in zip(rho, ang)]) * 2 * math.pi
        return TabulatedDensity(r_grid, np.maximum(vals, 0.0))
    u, w = np.polynomial.legendre.leggauss(n_polar)
    theta = np.arccos(u)
    phi = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    vals = np.empty_like(r_grid)
    for i, r in enumerate(r_grid):
        acc = 0.0
        for t, wt in zip(theta, w):
            pts_x = D + r * math.sin(t) * np.cos(phi)
            pts_y = r * math.sin(t) * np.sin(phi)
            pts_z = np.full_like(phi, r * math.cos(t))
            rho = np.sqrt(pts_x**2 + pts_y**2 + pts_z**2)
            pol = np.arccos(np.clip(pts_z / np.maximum(rho, 1e-300), -1.0, 1.0))
            azi = np.arctan2(pts_y, pts_x)
            acc += wt * np.mean([spatial.fn(rr, tt, pp) for rr, tt, pp in zip(rho, pol, azi)])
        vals[i] = r * r * acc * 2.0 * math.pi
    return TabulatedDensity(r_grid, np.maximum(vals, 0.0))


def scale_density(density, a):
    """The density of the field with all distances multiplied by a > 0.

    Mapping r -> a*r turns lambda into (1/a) * lambda(r/a); strongest-server
    power ratios are invariant under this map.
    """
    if not (a > 0.0):
        raise DomainError(f"scale factor must be positive, got {a}")
    return density.scaled(a)
