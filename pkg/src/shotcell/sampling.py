"""Draw station distance fields from a radial density and their order pdfs.

A radial density lambda induces a Poisson field of distances.  Power-law
densities are sampled exactly through the inverse of the cumulative measure;
tabulated and shifted densities are sampled by thinning a uniform proposal
against an envelope (grid supremum times a 1.001 safety factor -- a proposal
evaluating above the envelope is a hard error, not a silent clamp).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .densities import PowerLawDensity, RadialDensity
from .errors import DomainError, SamplingError

__all__ = [
    "OrderedDistances",
    "sample_distances",
    "pdf_r1",
    "pdf_rk_given_rk1",
]

ENVELOPE_SAFETY = 1.001
_THINNING_MAX_BATCHES = 10_000


@dataclass(frozen=True)
class OrderedDistances:
    """Sorted station distances observed within an annulus [r_min, r_max]."""

    r: np.ndarray
    r_max: float
    r_min: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.r.size and not np.all(np.diff(self.r) >= 0.0):
            raise DomainError("distances must be sorted ascending")

    def __len__(self):
        return int(self.r.size)


def _as_generator(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_distances(density, r_max, seed, r_min=0.0):
    """One field draw: count ~ Poisson(mass), positions from the density.

    ``seed`` may be an int or a numpy Generator (reused across calls for
    streams).  Returns an OrderedDistances with ascending radii in
    [r_min, r_max].
    """
    if not (r_max > r_min >= 0.0):
        raise DomainError(f"need 0 <= r_min < r_max, got [{r_min}, {r_max}]")
    rng = _as_generator(seed)
    lo_mass = float(density.cumulative(r_min)) if r_min > 0.0 else 0.0
    mass = float(density.cumulative(r_max)) - lo_mass
    if mass < 0.0:
        raise SamplingError("cumulative density mass decreased; invalid density")
    n = int(rng.poisson(mass)) if mass > 0.0 else 0
    if n == 0:
        return OrderedDistances(np.empty(0), float(r_max), float(r_min))
    if isinstance(density, PowerLawDensity):
        u = rng.uniform(lo_mass, lo_mass + mass, size=n)
        r = np.asarray(density.inv_cumulative(u), dtype=float)
    else:
        r = _thin(density, float(r_min), float(r_max), n, rng)
    r.sort()
    return OrderedDistances(r, float(r_max), float(r_min))


def _thin(density, r_min, r_max, n, rng):
    envelope = float(density.sup_on(r_max)) * ENVELOPE_SAFETY
    if not np.isfinite(envelope) or envelope <= 0.0:
        raise SamplingError(f"unusable thinning envelope {envelope}")
    out = np.empty(n)
    got = 0
    # expected acceptance rate = mass / (envelope * width)
    width = r_max - r_min
    batch = max(64, int(1.5 * n * envelope * width / max(density.cumulative(r_max), 1e-12)))
    batch = min(batch, 4 * n + 1024)
    for _ in range(_THINNING_MAX_BATCHES):
        x = rng.uniform(r_min, r_max, size=batch)
        y = rng.uniform(0.0, envelope, size=batch)
        lam = np.asarray(density(x), dtype=float)
        if np.any(lam > envelope):
            raise SamplingError(
                "density exceeded its envelope during thinning "
                f"(max {lam.max():.6g} > {envelope:.6g}); refine the tabulation grid"
            )
        acc = x[y < lam]
        take = min(acc.size, n - got)
        out[got : got + take] = acc[:take]
        got += take
        if got == n:
            return out
    raise SamplingError("thinning failed to place all points within the batch budget")


def pdf_r1(density, r):
    """Density of the nearest station distance: lambda(r) * exp(-Lambda(r))."""
    r = np.asarray(r, dtype=float)
    return density(r) * np.exp(-density.cumulative(r))


def pdf_rk_given_rk1(density, r_k, r_prev):
    """Density of the k-th distance given the (k-1)-th.

    Stations in disjoint annuli are independent, so conditionally on the
    previous distance the next one has density
    lambda(r_k) * exp(-(Lambda(r_k) - Lambda(r_prev))) for r_k >= r_prev.
    """
    r_k = np.asarray(r_k, dtype=float)
    gap = density.cumulative(r_k) - density.cumulative(r_prev)
    out = density(r_k) * np.exp(-np.maximum(gap, 0.0))
    return np.where(r_k >= r_prev, out, 0.0)
