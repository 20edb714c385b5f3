"""Gamma-family evaluation and the two-parameter Mittag-Leffler function.

``E(a, b; z) = sum_k z^k / Gamma(b + a*k)`` is the workhorse behind every
relaxation kernel in this package.  Its alternating Taylor series suffers
catastrophic cancellation for moderately negative arguments (the peak term
can exceed the sum by hundreds of orders of magnitude when ``a`` is small),
so the evaluator routes between three regimes:

* compensated (Kahan) double-precision summation where the predicted digit
  loss is harmless,
* the negative-axis algebraic expansion with an empirical monotone-tail
  truncation wherever it reaches the accuracy target,
* emulated extended-precision summation (mpmath) with working precision
  sized from the predicted number of cancelled digits otherwise.

Routing is accuracy-first: the policy radii mark the preferred regime
boundaries, but a regime is never used where the estimate says it cannot
deliver the target, and the evaluator falls through to the next one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special as _sp
from scipy.interpolate import PchipInterpolator


class GammaPoleError(ValueError):
    """Gamma requested exactly at a non-positive integer."""


class MLConvergenceError(ArithmeticError):
    """No evaluation regime reaches the accuracy target within budget."""


class DivergentTruncationError(ArithmeticError):
    """Asymptotic truncation requested past the point where terms grow."""


#: internal relative accuracy target for mittag_leffler
_REL_TARGET = 1e-13

#: maximum emulated working precision (decimal digits) before giving up
_MAX_DPS = 600


def gamma(x: float) -> float:
    """Gamma function on the real line, rejecting poles.

    Raises :class:`GammaPoleError` at non-positive integers; callers that
    need a total function should use :func:`reciprocal_gamma` instead.
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise GammaPoleError(f"gamma pole at x={x:g}; use reciprocal_gamma")
    return math.gamma(x)


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x) as a total function: exactly 0.0 at non-positive integers."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    return float(_sp.rgamma(x))


def _rgamma_vec(x):
    """Vectorized 1/Gamma with exact zeros at non-positive integers."""
    x = np.asarray(x, dtype=float)
    out = _sp.rgamma(x)
    pole = (x <= 0.0) & (x == np.floor(x))
    if np.any(pole):
        out = np.where(pole, 0.0, out)
    return out


@dataclass(frozen=True)
class MLRegimePolicy:
    """Term budgets and regime radii for Mittag-Leffler evaluation."""

    series_radius: float = 10.0
    asymptotic_radius: float = 50.0
    max_series_terms: int = 100_000
    asymptotic_terms: int = 48

    def __post_init__(self):
        if not self.series_radius <= self.asymptotic_radius:
            raise ValueError("series_radius must not exceed asymptotic_radius")
        if self.max_series_terms < 1:
            raise ValueError("max_series_terms must be >= 1")
        if self.asymptotic_terms < 2:
            raise ValueError("asymptotic_terms must be >= 2")


DEFAULT_ML_POLICY = MLRegimePolicy()


def _series_digits_lost(alpha: float, beta: float, r: float) -> float:
    """Estimated decimal digits cancelled by the alternating series at |z|=r.

    Uses the peak-term magnitude z^k/Gamma(beta+alpha k) at k ~ r^(1/alpha)/alpha
    against a conservative algebraic floor for |E| on the negative axis.
    """
    if r <= 1.0:
        return 0.0
    y = min(r ** (1.0 / alpha), 1e15)
    kp = max(1.0, (y - beta) / alpha)
    ln_peak = kp * math.log(r) - math.lgamma(beta + alpha * kp)
    ln_mag = -(2.0 * math.log(r) + 6.0)
    return max(0.0, (ln_peak - ln_mag) / math.log(10.0))


def _series_double(alpha: float, beta: float, z: complex, kmax: int) -> complex:
    """Kahan-compensated double-precision Taylor series."""
    s = 0.0 + 0.0j
    c = 0.0 + 0.0j
    zk = 1.0 + 0.0j
    quiet = 0
    for k in range(kmax):
        t = zk * reciprocal_gamma(beta + alpha * k)
        y = t - c
        u = s + y
        c = (u - s) - y
        s = u
        zk *= z
        if abs(zk) > 1e280:
            raise MLConvergenceError("double series overflow; argument too large")
        if abs(t) <= 1e-17 * abs(s) + 5e-308:
            quiet += 1
            if quiet >= 6:
                return s
        else:
            quiet = 0
    raise MLConvergenceError(f"series did not settle within {kmax} terms")


def _near_negative_axis(z: complex) -> bool:
    return z.real < 0.0 and abs(cmath.phase(z)) >= math.pi - 0.35


def _pole_snapped_rgamma(x: float) -> float:
    """1/Gamma with arguments within 1e-8 of a non-positive integer sent to 0.

    The asymptotic coefficients hit Gamma poles up to floating-point noise in
    ``beta - alpha*k``; the stray near-pole values are ~1e-13 and would break
    the monotone-tail bookkeeping if kept.
    """
    r = round(x)
    if r <= 0 and abs(x - r) < 1e-8:
        return 0.0
    return reciprocal_gamma(x)


def _asymptotic_negative(alpha: float, beta: float, z: complex, n_budget: int):
    """Algebraic large-argument expansion toward the negative axis.

    Returns ``(value, est_rel, n_used)`` where ``est_rel`` is the empirical
    monotone-tail error estimate (first omitted term over the partial sum).
    Terms are ``-z^{-k} / Gamma(beta - alpha k)``; when ``beta == alpha`` the
    k=1 coefficient is exactly zero.
    """
    zinv = 1.0 / z
    zk = 1.0 + 0.0j
    total = 0.0 + 0.0j
    last_nonzero = None
    n_used = 0
    omitted = None
    for k in range(1, n_budget + 1):
        zk *= zinv
        t = -zk * _pole_snapped_rgamma(beta - alpha * k)
        m = abs(t)
        if m > 0.0 and last_nonzero is not None and m > last_nonzero:
            omitted = m
            break
        total += t
        n_used = k
        if m > 0.0:
            last_nonzero = m
    if omitted is None:
        omitted = last_nonzero if last_nonzero is not None else math.inf
    denom = abs(total)
    est = math.inf if denom == 0.0 else omitted / denom
    return total, est, n_used


def _series_extended(alpha: float, beta: float, z: complex, digits_lost: float,
                     kmax: int) -> complex:
    dps = int(27 + 1.05 * digits_lost)
    if dps > _MAX_DPS:
        raise MLConvergenceError(
            f"cancellation needs ~{dps} digits (> {_MAX_DPS}); no regime converges")
    r = abs(z)
    k_peak = r ** (1.0 / alpha) / alpha if r > 1 else 8.0
    cap = min(kmax, int(3.0 * k_peak) + 400)
    with mpmath.workdps(dps):
        zm = mpmath.mpc(z) if z.imag != 0.0 else mpmath.mpf(z.real)
        a_ = mpmath.mpf(alpha)
        b_ = mpmath.mpf(beta)
        s = mpmath.mpf(0)
        zk = mpmath.mpf(1)
        stop = mpmath.mpf(10) ** (-24)
        quiet = 0
        for k in range(cap):
            t = zk * mpmath.rgamma(b_ + a_ * k)
            s += t
            zk *= zm
            if abs(t) <= abs(s) * stop and k > k_peak:
                quiet += 1
                if quiet >= 6:
                    return complex(s)
            else:
                quiet = 0
    raise MLConvergenceError(f"extended series did not settle within {cap} terms")


def mittag_leffler(alpha: float, beta: float, z: complex,
                   policy: MLRegimePolicy = DEFAULT_ML_POLICY) -> complex:
    """Two-parameter Mittag-Leffler function E(alpha, beta; z).

    Supported domain: ``0 < alpha <= 2``, ``beta > 0``, finite ``z``.  Large
    arguments are only handled on or near the negative real axis, which is
    the regime the relaxation kernels need.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha:g}")
    if beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta:g}")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("z must be finite")
    if z == 0:
        return complex(reciprocal_gamma(beta))
    if alpha == 1.0 and beta == 1.0:
        return cmath.exp(z)

    r = abs(z)
    # the terms' phases rotate by arg(z) each step, so any argument off the
    # positive real axis cancels; the estimate assumes the worst (negative
    # axis) magnitude, which errs on the safe side elsewhere
    loss = 0.0 if abs(cmath.phase(z)) <= 0.05 \
        else _series_digits_lost(alpha, beta, r)
    if r <= policy.series_radius and loss <= 3.0:
        try:
            return _series_double(alpha, beta, z, policy.max_series_terms)
        except MLConvergenceError:
            pass  # power iterate overflowed (small alpha); extended handles it
    if _near_negative_axis(z):
        val, est, _ = _asymptotic_negative(alpha, beta, z, policy.asymptotic_terms)
        if est <= _REL_TARGET:
            return val
    return _series_extended(alpha, beta, z, loss, policy.max_series_terms)


def ml_asymptotic_negative(alpha: float, beta: float, z_mod: float,
                           n_terms: int) -> float:
    """Truncated algebraic expansion of E(alpha, beta; -z_mod) for large z_mod.

    Returns ``-sum_{k=1..n_terms} z_mod^{-k} / Gamma(beta - alpha k)``.  The
    truncation is only trusted while the nonzero terms keep shrinking; if the
    last retained term is not smaller than the first retained one, the
    expansion has turned divergent at this argument and
    :class:`DivergentTruncationError` is raised.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha:g}")
    if z_mod <= 0.0:
        raise ValueError("z_mod must be positive")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    ks = np.arange(1, n_terms + 1)
    coefs = np.array([_pole_snapped_rgamma(beta - alpha * k) for k in ks])
    # (-z_mod)^{-k} = (-1)^k z_mod^{-k}: the odd-order terms alternate
    terms = -((-1.0) ** ks) * z_mod ** (-ks.astype(float)) * coefs
    mags = np.abs(terms)
    nonzero = mags[mags > 0.0]
    if nonzero.size >= 2 and nonzero[-1] >= nonzero[0]:
        raise DivergentTruncationError(
            f"monotone-tail check failed at z_mod={z_mod:g} with {n_terms} terms")
    return float(np.sum(terms))


class NegativeAxisML:
    """Vectorized E(alpha, beta; -x) for x >= 0.

    Kernel sweeps evaluate the function at thousands of abscissae per solve,
    so the cancellation-prone mid-range is precomputed once on a log grid and
    served through monotone (PCHIP) interpolation in log-log coordinates.
    Small arguments use the plain series, large ones the algebraic tail.
    """

    def __init__(self, alpha: float, beta: float, table_points: int = 500):
        self.alpha = float(alpha)
        self.beta = float(beta)
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("NegativeAxisML supports alpha in (0, 1]")
        self._exp_mode = (self.alpha == 1.0 and self.beta == 1.0)
        if self._exp_mode:
            return
        self._x_series = self._series_safe_radius()
        self._x_asym, self._n_asym = self._asymptotic_onset()
        self._series_coefs = self._small_series_coefs()
        if self._x_asym > self._x_series:
            xs = np.geomspace(0.8 * self._x_series, 1.25 * self._x_asym, table_points)
            vals = np.array([mittag_leffler(self.alpha, self.beta, -x).real for x in xs])
            if np.any(vals <= 0.0):
                raise MLConvergenceError("mid-range table values not positive")
            self._table = PchipInterpolator(np.log(xs), np.log(vals))
        else:
            self._table = None
        ks = np.arange(1, self._n_asym + 1)
        # coefficient of x^{-k} in E(a, b; -x): -(-1)^k / Gamma(b - a k)
        self._asym_coefs = np.array(
            [-((-1.0) ** k) * _pole_snapped_rgamma(self.beta - self.alpha * k)
             for k in ks])

    def _series_safe_radius(self) -> float:
        x = 10.0
        while x > 0.25 and _series_digits_lost(self.alpha, self.beta, x) > 3.0:
            x *= 0.9
        return x

    def _asymptotic_onset(self):
        for x in np.geomspace(max(self._x_series, 1.0), 400.0, 80):
            _, est, n = _asymptotic_negative(self.alpha, self.beta, complex(-x), 48)
            if est <= 5e-14:
                return float(x), max(n, 2)
        raise MLConvergenceError(
            f"no asymptotic onset found for alpha={self.alpha:g}, beta={self.beta:g}")

    def _small_series_coefs(self):
        coefs = []
        k = 0
        while True:
            c = reciprocal_gamma(self.beta + self.alpha * k)
            coefs.append(c)
            if k > 4 and abs(c) * self._x_series ** k < 1e-19:
                break
            k += 1
            if k > 400:
                break
        return np.asarray(coefs)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = (x.ndim == 0)
        x = np.atleast_1d(x)
        if np.any(x < 0.0):
            raise ValueError("NegativeAxisML expects x >= 0")
        if self._exp_mode:
            out = np.exp(-x)
            return float(out[0]) if scalar else out
        out = np.empty_like(x)
        small = x <= self._x_series
        large = x >= self._x_asym
        mid = ~(small | large)
        if np.any(small):
            xs = x[small]
            acc = np.zeros_like(xs)
            zk = np.ones_like(xs)
            for c in self._series_coefs:
                acc += c * zk
                zk *= -xs
            out[small] = acc
        if np.any(large):
            xl = x[large]
            inv = 1.0 / xl
            acc = np.zeros_like(xl)
            zk = np.ones_like(xl)
            for c in self._asym_coefs:
                zk *= inv
                acc += c * zk
            out[large] = acc
        if np.any(mid):
            out[mid] = np.exp(self._table(np.log(x[mid])))
        return float(out[0]) if scalar else out


@lru_cache(maxsize=16)
def neg_axis_ml(alpha: float, beta: float) -> NegativeAxisML:
    """Cached vectorized negative-axis evaluator (tables are reused per order)."""
    return NegativeAxisML(alpha, beta)
