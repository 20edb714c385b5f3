"""Graded-mesh composite quadrature for endpoint power-law singularities.

Every operator integral in this package is computed in subjective time,
where the kernel is a pure power law ``(x - u)^p`` with ``p in (-1, 0]``
singular at the moving endpoint ``u = x``.  One engine serves them all:

* the mesh ``s_j = X * (j/K)^g`` (s = x - u) clusters panels at the
  singularity with grading exponent ``g``,
* the panel touching the singularity uses Gauss-Jacobi nodes whose weight
  matches ``s^p`` exactly, so the singular factor is integrated analytically,
* the remaining panels use Gauss-Legendre on the full integrand,
* the panel count doubles until two successive levels agree to tolerance.

The convergence loop also tracks an absolute-value sum so it can recognize
the roundoff floor (e.g. the cancellation inside hypersingular difference
quotients) instead of doubling panels forever against noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

_EPS = float(np.finfo(float).eps)


class QuadratureError(ArithmeticError):
    """Panel budget exhausted before the requested tolerance was met."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budgets for the singular quadrature engine.

    ``tail_epsilon`` is the relative threshold used by callers to truncate
    the lower (history) limit of operator integrals; ``grading_exponent``
    overrides the per-operator default ``max(2, 2/alpha)`` when set.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-13
    tail_epsilon: float = 1e-12
    grading_exponent: float | None = None
    max_panels: int = 4096
    nodes_per_panel: int = 12

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0 or self.tail_epsilon <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.grading_exponent is not None and self.grading_exponent < 1.0:
            raise ValueError("grading_exponent must be >= 1")
        if self.max_panels < 16 or self.nodes_per_panel < 4:
            raise ValueError("max_panels >= 16 and nodes_per_panel >= 4 required")

    def tightened(self, factor: float = 1e-2) -> "QuadratureSpec":
        """Spec with tolerances scaled down, for inner (nested) integrals."""
        return replace(self, rel_tol=max(self.rel_tol * factor, 1e-13),
                       abs_tol=max(self.abs_tol * factor, 1e-16))


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=64)
def _legendre(n: int):
    x, w = roots_legendre(n)
    return x, w


@lru_cache(maxsize=256)
def _jacobi(n: int, a: float):
    # weight (1 - x)^a on [-1, 1]
    x, w = roots_jacobi(n, a, 0.0)
    return x, w


def _eval_graded(smooth, x, X, power, grading, K, n):
    """One mesh level.  Returns (integral, abs_sum, inv_weight_sum)."""
    j = np.arange(K + 1, dtype=float)
    sb = X * (j / K) ** grading
    zj, wj = _jacobi(n, power)
    h0 = sb[1]
    s0 = h0 * (1.0 - zj) / 2.0
    c0 = (h0 / 2.0) ** (power + 1.0)
    if K > 1:
        lo, hi = sb[1:-1], sb[2:]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        zl, wl = _legendre(n)
        sg = mid[:, None] + half[:, None] * zl[None, :]
        s_all = np.concatenate([s0, sg.ravel()])
    else:
        sg = half = None
        s_all = s0
    f_all = np.asarray(smooth(x - s_all, s_all), dtype=complex)
    f0 = f_all[:n]
    val = c0 * np.sum(wj * f0)
    asum = c0 * np.sum(wj * np.abs(f0))
    inv_w = c0 * np.sum(wj / s0)
    if K > 1:
        fg = f_all[n:].reshape(K - 1, n)
        kern = sg ** power
        wmat = half[:, None] * wl[None, :] * kern
        val += np.sum(wmat * fg)
        asum += np.sum(wmat * np.abs(fg))
        inv_w += np.sum(wmat / sg)
    return val, asum, inv_w


def singular_power_quad(smooth, x: float, u_start: float, power: float,
                        grading: float, spec: QuadratureSpec = DEFAULT_QUAD,
                        value_noise: float = _EPS,
                        noise_scale: float = 0.0) -> complex:
    """Adaptive ``int_{u_start}^{x} (x-u)^power smooth(u, x-u) du``.

    ``smooth`` must be vectorized over its arguments and bounded on the
    interval (any endpoint singularity beyond the explicit power must have
    been folded into ``power``).  ``noise_scale``/``value_noise`` describe
    the absolute scale and relative accuracy of ``smooth`` evaluations so
    the convergence loop can stop at the achievable floor.
    """
    if power <= -1.0:
        raise ValueError("power must exceed -1 for an integrable endpoint")
    X = x - u_start
    if X <= 0.0:
        return 0.0 + 0.0j
    K = 16
    val, asum, inv_w = _eval_graded(smooth, x, X, power, grading, K, spec.nodes_per_panel)
    delta = math.inf
    while 2 * K <= spec.max_panels:
        K *= 2
        new, asum, inv_w = _eval_graded(smooth, x, X, power, grading, K,
                                        spec.nodes_per_panel)
        delta = abs(new - val)
        tol = max(spec.abs_tol, spec.rel_tol * abs(new))
        floor = 30.0 * _EPS * asum + 10.0 * value_noise * noise_scale * inv_w
        if delta <= max(tol, floor):
            return new
        val = new
    raise QuadratureError(
        f"no convergence within {spec.max_panels} panels (last delta {delta:.3e})")


def _eval_uniform(fn, lo, hi, K, n):
    edges = np.linspace(lo, hi, K + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    z, w = _legendre(n)
    pts = mid[:, None] + half * z[None, :]
    vals = np.asarray(fn(pts.ravel()), dtype=complex).reshape(K, n)
    return half * np.sum(w[None, :] * vals), half * np.sum(w[None, :] * np.abs(vals))


def smooth_adaptive_quad(fn, lo: float, hi: float,
                         spec: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """Adaptive composite Gauss-Legendre for smooth integrands on [lo, hi]."""
    if hi <= lo:
        return 0.0 + 0.0j
    K = 8
    val, asum = _eval_uniform(fn, lo, hi, K, spec.nodes_per_panel)
    delta = math.inf
    while 2 * K <= spec.max_panels:
        K *= 2
        new, asum = _eval_uniform(fn, lo, hi, K, spec.nodes_per_panel)
        delta = abs(new - val)
        if delta <= max(spec.abs_tol, spec.rel_tol * abs(new), 30.0 * _EPS * asum):
            return new
        val = new
    raise QuadratureError(
        f"no convergence within {spec.max_panels} panels (last delta {delta:.3e})")
