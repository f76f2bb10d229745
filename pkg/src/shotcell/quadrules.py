"""Shared quadrature machinery: cached Gauss rules, panel maps, ray tails.

The oscillatory integrals in this package are all handled the same way:
finite ranges are split into oscillation-resolving panels integrated with a
fixed Gauss-Legendre rule, and semi-infinite power-times-phase tails
integral_X^inf u^q e^(+-iu) du are rotated onto the ray of steepest descent
where Gauss-Laguerre applies directly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["gauss_legendre", "gauss_laguerre", "panel_nodes", "power_osc_tail"]


@lru_cache(maxsize=32)
def gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@lru_cache(maxsize=8)
def gauss_laguerre(n):
    x, w = np.polynomial.laguerre.laggauss(n)
    return x, w


def panel_nodes(edges, order):
    """Gauss-Legendre nodes/weights for the panels defined by ``edges``.

    Returns (nodes, weights) as flat arrays covering every panel; summing
    f(nodes) * weights integrates f over [edges[0], edges[-1]].
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def power_osc_tail(q, X, sign, n=64):
    """integral_X^inf u^q * exp(sign * i * u) du for q < -1, X > 0.

    Rotating the contour onto u = X -+ i*s turns the phase into pure decay:
    the integral becomes -+ i e^(-+iX) integral_0^inf (X -+ is)^q e^-s ds,
    evaluated by Gauss-Laguerre.  Accuracy improves with X; intended for
    X >= ~3 (callers arrange that).
    """
    s, w = gauss_laguerre(n)
    if sign < 0:
        vals = (X - 1j * s) ** q
        return -1j * np.exp(-1j * X) * np.dot(w, vals)
    vals = (X + 1j * s) ** q
    return 1j * np.exp(1j * X) * np.dot(w, vals)
