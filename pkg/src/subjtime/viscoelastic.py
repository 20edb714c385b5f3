"""Aging fractional Kelvin-Voigt model: Green's function, solvers, decay fits.

The constitutive law D^a sigma + lam*sigma = f has the causal solution

    sigma(t) = (1/w(t)) int_{-inf}^t K(t,tau) f(tau) w(tau) psi'(tau) dtau,
    K(t,tau) = g(psi(t) - psi(tau)),   g(s) = s^{a-1} E(a, a; -lam s^a),

i.e. a convolution against the lag-space Green's kernel in subjective time.
The kernel is only ever evaluated at positive subjective lag, which encodes
causality without committing to a step-function convention at psi = 0.

Two independent solvers are provided (lag-kernel quadrature in the time
domain, resolvent multiplier in the frequency domain) plus a residual
checker that substitutes a solution back into the constitutive law.  The
memory-decay analysis fits the kernel tail on a time window: a log-log
slope for polynomial scales, a semilog rate for exponential ones.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .corpus import GaussianPacket
from .geometry import GridFunction, Profile
from .operators import _Conjugated, weyl_derivative_marchaud
from .quadrature import (DEFAULT_QUAD, QuadratureSpec, singular_power_quad,
                         smooth_adaptive_quad)
from .special import gamma, neg_axis_ml
from .spectral import apply_multiplier, resolvent_symbol


@dataclass(frozen=True)
class KVModel:
    """Fractional Kelvin-Voigt material: order, rate constant, time geometry."""

    alpha: float
    lam: float
    profile: Profile

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha:g}")
        if self.lam <= 0.0:
            raise ValueError(f"lam must be positive, got {self.lam:g}")


@dataclass(frozen=True)
class DecayFit:
    """Fitted tail decay of the effective kernel over a time window."""

    mode: str
    slope_or_rate: float
    intercept: float
    rms_residual: float
    fit_window: tuple

    def __post_init__(self):
        if self.mode not in ("loglog", "semilog"):
            raise ValueError(f"mode must be 'loglog' or 'semilog', got {self.mode!r}")
        if self.rms_residual < 0.0:
            raise ValueError("rms_residual must be nonnegative")
        if not self.fit_window[0] < self.fit_window[1]:
            raise ValueError("fit_window must be a nonempty interval")


def greens_lag_kernel(alpha: float, lam: float, s):
    """Impulse-response kernel g(s) = s^(a-1) E(a, a; -lam s^a) for lag s > 0."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0.0):
        raise ValueError("lag must be positive")
    out = s_arr ** (alpha - 1.0) * neg_axis_ml(alpha, alpha)(lam * s_arr ** alpha)
    return float(out) if np.isscalar(s) or s_arr.ndim == 0 else out


def effective_kernel(model: KVModel, t: float, tau: float) -> float:
    """Memory kernel K(t, tau): the Green's kernel at subjective lag."""
    if tau >= t:
        raise ValueError("effective kernel needs tau < t")
    lag = float(model.profile.psi(t)) - float(model.profile.psi(tau))
    return greens_lag_kernel(model.alpha, model.lam, lag)


def _max_workers() -> int:
    env = os.environ.get("SUBJTIME_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def solve_kv_timedomain(model: KVModel, f, lab_grid,
                        q: QuadratureSpec = DEFAULT_QUAD,
                        support=None) -> GridFunction:
    """Causal solution by lag-kernel quadrature at each output time.

    ``f`` is the forcing as a GridFunction or decaying callable (with
    subjective support).  The kernel's s^(a-1) endpoint singularity is
    resolved by the same graded singular quadrature as the operators.
    """
    a, lam, p = model.alpha, model.lam, model.profile
    conj = _Conjugated(f, p, support)
    ml = neg_axis_ml(a, a)
    u0 = conj.start()
    grid = np.asarray(lab_grid, dtype=float)

    def solve_one(t: float) -> complex:
        x = float(p.psi(t))
        if x <= u0:
            return 0.0 + 0.0j
        cut = conj.far_field_cut(x)
        if cut is not None:
            val = smooth_adaptive_quad(
                lambda u: greens_lag_kernel(a, lam, x - u) * conj.v(u),
                u0, cut, q)
        else:
            val = singular_power_quad(
                lambda u, s: ml(lam * s ** a) * conj.v(u), x, u0, a - 1.0, 2.0, q)
        return val / complex(p.omega(t))

    workers = _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(solve_one, [float(t) for t in grid]))
    else:
        vals = [solve_one(float(t)) for t in grid]
    return GridFunction(grid, np.asarray(vals, dtype=complex))


def solve_kv_spectral(model: KVModel, f, lab_grid, xi_grid) -> GridFunction:
    """Causal solution through the frequency domain: resolvent multiplier."""
    if not isinstance(f, GridFunction):
        raise TypeError("spectral solver needs the forcing as a GridFunction")
    sym = resolvent_symbol(model.alpha, model.lam)
    return apply_multiplier(sym, f, model.profile, xi_grid, lab_grid,
                            check_tail=False)


def kv_residual(sigma: GridFunction, f: GridFunction, model: KVModel,
                q: QuadratureSpec = DEFAULT_QUAD,
                n_check: int = 33, window=None) -> float:
    """sup |D^a sigma + lam sigma - f| / sup|f| on a subsample of the grid.

    The derivative of the gridded solution is evaluated in Marchaud form;
    interpolation of sigma between its nodes bounds the achievable floor, so
    the check subsamples interior nodes rather than sweeping every point.
    ``window`` restricts the checked times, e.g. to keep enough represented
    history left of every check point when sigma has a slow onset.
    """
    a, lam, p = model.alpha, model.lam, model.profile
    f_interp = f.interpolator()
    sup_f = float(np.max(np.abs(f.values)))
    idx = np.unique(np.linspace(2, sigma.grid.size - 3, n_check).astype(int))
    if window is not None:
        idx = np.array([i for i in idx
                        if window[0] <= sigma.grid[i] <= window[1]], dtype=int)
        if idx.size == 0:
            raise ValueError("no check points inside the residual window")
    worst = 0.0
    for i in idx:
        t = float(sigma.grid[i])
        d = weyl_derivative_marchaud(a, sigma, p, t, q, value_noise=1e-9)
        fv = complex(f_interp(t)) if f.grid[0] <= t <= f.grid[-1] else 0.0
        res = abs(d + lam * sigma.values[i] - fv)
        worst = max(worst, res)
    if sup_f == 0.0:
        return worst
    return worst / sup_f


def amnesia_fit(model: KVModel, t_samples, mode: str) -> DecayFit:
    """Least-squares tail fit of log K(t, 0) against log t or t.

    Requires at least 10 samples inside the kernel's monotone tail; refuses
    windows where the sampled kernel is non-monotone or has underflowed.
    """
    t = np.sort(np.asarray(t_samples, dtype=float))
    if t.size < 10:
        raise ValueError("need at least 10 samples in the fit window")
    k = np.array([effective_kernel(model, float(tk), 0.0) for tk in t])
    if np.any(k <= 1e-300):
        raise ValueError("kernel underflow inside the fit window")
    if np.any(np.diff(k) >= 0.0):
        raise ValueError("kernel not monotonically decaying in the fit window")
    y = np.log(np.abs(k))
    x = np.log(t) if mode == "loglog" else t
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((slope * x + intercept - y) ** 2)))
    return DecayFit(mode=mode, slope_or_rate=float(slope),
                    intercept=float(intercept), rms_residual=rms,
                    fit_window=(float(t[0]), float(t[-1])))


@dataclass(frozen=True)
class ForcingSpec:
    """Shared forcing pulse, specified in subjective units."""

    center: float = 1.0
    width: float = 0.1
    amplitude: float = 1.0

    def packet(self, profile: Profile) -> GaussianPacket:
        return GaussianPacket(profile, center=self.center, width=self.width,
                              amplitude=self.amplitude)


def relaxation_experiment(scenarios, forcing: ForcingSpec, lab_grid,
                          q: QuadratureSpec = DEFAULT_QUAD) -> dict:
    """Stress relaxation curves for a list of models under one shared pulse.

    Returns ``{label: GridFunction}`` keyed by each model's profile label;
    scenario order is preserved (labels must be unique).
    """
    grid = np.asarray(lab_grid, dtype=float)
    out: dict[str, GridFunction] = {}
    for model in scenarios:
        label = model.profile.label or f"scenario{len(out)}"
        if label in out:
            raise ValueError(f"duplicate scenario label {label!r}")
        pulse = forcing.packet(model.profile)
        out[label] = solve_kv_timedomain(model, pulse, grid, q)
    return out
