"""Weighted Fourier transform, spectral multipliers, weighted convolution.

The forward transform is the classical symmetric Fourier integral of the
conjugated state over subjective time,

    F(xi) = (1/sqrt(2 pi)) int v(s) exp(-i xi s) ds,   v(s) = w(t) f(t)|_{s=psi(t)},

evaluated by trapezoid-corrected direct summation (desk scale: no fast
transform).  For smooth states that decay inside the window the trapezoid
rule is spectrally accurate, so resolution is governed by the sampling
theorem: the forward path enforces ``ds * max|xi| < pi/4``.

The inverse carries the 1/omega(t) prefactor that cancels the weight
density of the forward measure.  Multipliers act pointwise between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import GridFunction, Profile, _interp_complex, _trap_weights

_SQRT2PI = math.sqrt(2.0 * math.pi)


class SpectralResolutionError(ValueError):
    """Subjective sampling too coarse for the requested frequencies."""


class SpectralWindowError(ValueError):
    """Spectrum has not decayed at the edge of its frequency window."""


class ConvolutionRangeError(ValueError):
    """Convolution lag leaves the scale's range with non-negligible mass."""


@dataclass(frozen=True)
class SpectralGrid:
    """Complex transform samples on a strictly increasing frequency grid."""

    xi: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if xi.ndim != 1 or values.ndim != 1 or xi.size != values.size:
            raise ValueError("xi and values must be 1-d arrays of equal length")
        if np.any(np.diff(xi) <= 0.0):
            raise ValueError("xi must be strictly increasing")
        if not (np.all(np.isfinite(xi)) and np.all(np.isfinite(values))):
            raise ValueError("xi and values must be finite")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class Symbol:
    """Pointwise frequency multiplier m(xi)."""

    eval: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def __call__(self, xi):
        return np.asarray(self.eval(np.asarray(xi, dtype=float)), dtype=complex)


def frac_power_symbol(alpha: float) -> Symbol:
    """(i xi)^alpha on the principal branch: |xi|^a exp(i a pi/2 sign(xi))."""
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha:g}")

    def m(xi, a=alpha):
        mag = np.abs(xi) ** a
        return mag * np.exp(1j * a * (math.pi / 2.0) * np.sign(xi))

    return Symbol(m, label=f"(i xi)^{alpha:g}")


def resolvent_symbol(alpha: float, lam: float) -> Symbol:
    """((i xi)^alpha + lam)^{-1}, the relaxation-equation resolvent."""
    base = frac_power_symbol(alpha)
    return Symbol(lambda xi: 1.0 / (base(xi) + lam),
                  label=f"((i xi)^{alpha:g} + {lam:g})^-1")


def _conjugated_samples(f: GridFunction, p: Profile):
    """Subjective abscissae and trapezoid-ready conjugated samples of f.

    If psi maps the grid to (numerically) uniform subjective nodes the
    samples are used directly; otherwise the state is resampled onto a
    uniform subjective grid of the same size by monotone interpolation.
    """
    s = np.asarray(p.psi(f.grid), dtype=float)
    ds = np.diff(s)
    if np.max(np.abs(ds - ds[0])) <= 1e-9 * abs(ds[0]):
        v = np.asarray(p.omega(f.grid), dtype=float) * f.values
        return s, v
    s_u = np.linspace(s[0], s[-1], s.size)
    interp = _interp_complex(s, np.asarray(p.omega(f.grid), float) * f.values)
    return s_u, interp(s_u)


def _phase_matvec(xi: np.ndarray, s: np.ndarray, weighted: np.ndarray,
                  sign: float) -> np.ndarray:
    """sum_k weighted_k exp(sign * i xi_j s_k), chunked to bound memory."""
    out = np.empty(xi.size, dtype=complex)
    chunk = max(1, int(4e6 // max(s.size, 1)))
    for lo in range(0, xi.size, chunk):
        hi = min(lo + chunk, xi.size)
        out[lo:hi] = np.exp(1j * sign * xi[lo:hi, None] * s[None, :]) @ weighted
    return out


def forward_transform(f: GridFunction, p: Profile, xi_grid) -> SpectralGrid:
    """Weighted Fourier transform of f on the given frequency grid."""
    xi = np.asarray(xi_grid, dtype=float)
    s, v = _conjugated_samples(f, p)
    ds = s[1] - s[0]
    xi_max = float(np.max(np.abs(xi))) if xi.size else 0.0
    if ds * xi_max >= math.pi / 4.0:
        raise SpectralResolutionError(
            f"ds*max|xi| = {ds * xi_max:.3f} >= pi/4; refine the time grid "
            "or shrink the frequency window")
    w = _trap_weights(s)
    vals = _phase_matvec(xi, s, w * v, sign=-1.0) / _SQRT2PI
    return SpectralGrid(xi, vals)


def inverse_transform(F: SpectralGrid, p: Profile, lab_grid,
                      check_tail: bool = True) -> GridFunction:
    """Inverse weighted transform onto a laboratory grid.

    Includes the 1/omega(t) prefactor that cancels the forward measure's
    weight density.  With ``check_tail`` the spectrum must have decayed at
    its window edges (relative to its peak), otherwise the window truncation
    would alias into the reconstruction.
    """
    t = np.asarray(lab_grid, dtype=float)
    peak = float(np.max(np.abs(F.values))) if F.values.size else 0.0
    if check_tail and peak > 0.0:
        edge = max(abs(F.values[0]), abs(F.values[-1]))
        if edge > 1e-3 * peak:
            raise SpectralWindowError(
                f"spectrum edge/peak = {edge / peak:.2e} > 1e-3; widen the "
                "frequency window")
    s = np.asarray(p.psi(t), dtype=float)
    w = _trap_weights(F.xi)
    vals = _phase_matvec(s, F.xi, w * F.values, sign=1.0) / _SQRT2PI
    vals = vals / np.asarray(p.omega(t), dtype=float)
    return GridFunction(t, vals)


def plancherel_check(f: GridFunction, g: GridFunction, p: Profile,
                     xi_grid) -> tuple[complex, complex]:
    """Weighted time-domain inner product and its frequency-domain twin.

    The transform is unitary from the weighted L2 space whose inner product
    carries the density omega^2 psi' (conjugation squares the amplitude
    weight); the single-omega density belongs to the L1 norm, not here.
    """
    w = _trap_weights(f.grid)
    dens = (np.asarray(p.omega(f.grid), float) ** 2
            * np.asarray(p.dpsi(f.grid), float))
    g_interp = _interp_complex(g.grid, g.values)
    g_vals = np.zeros(f.grid.shape, dtype=complex)
    inside = (f.grid >= g.grid[0]) & (f.grid <= g.grid[-1])
    g_vals[inside] = g_interp(f.grid[inside])
    time_ip = complex(np.sum(w * f.values * np.conj(g_vals) * dens))
    F = forward_transform(f, p, xi_grid)
    G = forward_transform(g, p, xi_grid)
    wxi = _trap_weights(F.xi)
    freq_ip = complex(np.sum(wxi * F.values * np.conj(G.values)))
    return time_ip, freq_ip


def apply_multiplier(sym: Symbol, f: GridFunction, p: Profile, xi_grid,
                     lab_grid, check_tail: bool = True) -> GridFunction:
    """inverse_transform(sym(xi) * forward_transform(f))."""
    F = forward_transform(f, p, xi_grid)
    return inverse_transform(SpectralGrid(F.xi, sym(F.xi) * F.values), p,
                             lab_grid, check_tail=check_tail)


def weighted_convolution(f: GridFunction, g: GridFunction, p: Profile,
                         lab_grid) -> GridFunction:
    """Weighted convolution of f and g evaluated on a laboratory grid.

    In subjective time this is the classical convolution of the conjugated
    states; f's state is taken as zero beyond its grid span, which is only
    legitimate if it has decayed there, and lags that leave the scale's
    range must carry negligible mass - both are checked.
    """
    t = np.asarray(lab_grid, dtype=float)
    s_f, v_f = _conjugated_samples(f, p)
    s_g, v_g = _conjugated_samples(g, p)
    f_interp = _interp_complex(s_f, v_f)
    peak_f = float(np.max(np.abs(v_f)))
    peak_g = float(np.max(np.abs(v_g)))
    edge_f = max(abs(v_f[0]), abs(v_f[-1]))
    if peak_f > 0.0 and edge_f > 1e-6 * peak_f:
        raise ConvolutionRangeError(
            "f has not decayed at its grid edge; zero extension invalid")
    w = _trap_weights(s_g) * v_g
    x = np.asarray(p.psi(t), dtype=float)
    lag = x[:, None] - s_g[None, :]
    L = p.range_inf
    if math.isfinite(L) and peak_g > 0.0:
        bad = (lag <= L) & (np.abs(v_g)[None, :] > 1e-12 * peak_g)
        if np.any(bad) and peak_f > 0.0:
            # mass that would need f at lags below the scale's range
            lo_edge = abs(f_interp(np.array([s_f[0]]))[0])
            if lo_edge > 1e-10 * peak_f:
                raise ConvolutionRangeError(
                    "subjective lag leaves the scale's range where the "
                    "integrand is non-negligible")
    inside = (lag >= s_f[0]) & (lag <= s_f[-1])
    vals_f = np.zeros(lag.shape, dtype=complex)
    if np.any(inside):
        vals_f[inside] = f_interp(lag[inside])
    conv = vals_f @ w
    out = conv / np.asarray(p.omega(t), dtype=float)
    return GridFunction(t, out)
