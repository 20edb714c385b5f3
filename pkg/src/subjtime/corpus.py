"""Smooth decaying test functions and matched grids.

The operators need inputs whose weighted state decays fast in subjective
time.  The concrete class used throughout the package is the Gaussian
packet: the conjugated state v(s) = A exp(-(s-c)^2/(2 w^2)) exp(i nu s) is
an exact Gaussian (times an optional phase) in subjective time, so every
envelope, window, and truncation point is available in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import GridFunction, Profile, make_scale, make_weight

#: packet support radius in widths: exp(-r^2/2) ~ 1e-15 at r ~ 8.1
_SUPPORT_RADIUS = 8.6


@dataclass(frozen=True)
class GaussianPacket:
    """Lab-time function whose conjugated state is a Gaussian packet.

    f(t) = (amplitude / omega(t)) * exp(-(psi(t)-center)^2 / (2 width^2))
                                  * exp(i freq psi(t))
    """

    profile: Profile
    center: float
    width: float
    amplitude: complex = 1.0
    freq: float = 0.0

    def conjugated(self, s):
        s = np.asarray(s, dtype=float)
        bump = np.exp(-((s - self.center) ** 2) / (2.0 * self.width ** 2))
        out = self.amplitude * bump
        if self.freq != 0.0:
            out = out * np.exp(1j * self.freq * s)
        return np.asarray(out, dtype=complex)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s = np.asarray(self.profile.psi(t), dtype=float)
        return self.conjugated(s) / np.asarray(self.profile.omega(t), dtype=float)

    @property
    def subjective_support(self):
        r = _SUPPORT_RADIUS * self.width
        lo = self.center - r
        if math.isfinite(self.profile.range_inf):
            lo = max(lo, self.profile.range_inf + 1e-9 * self.width)
        return (lo, self.center + r)


@dataclass(frozen=True)
class DampedExponential:
    """f(t) = exp(lam * psi(t)) / omega(t) with Re(lam) > 0.

    Eigenfunction of the weighted operators: J^a f = lam^-a f and
    D^a f = lam^a f, up to an exponentially small truncation once the
    history window spans several decay lengths of Re(lam).
    """

    profile: Profile
    lam: complex

    def __post_init__(self):
        if complex(self.lam).real <= 0.0:
            raise ValueError("DampedExponential needs Re(lam) > 0")

    def conjugated(self, s):
        return np.exp(complex(self.lam) * np.asarray(s, dtype=float))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s = np.asarray(self.profile.psi(t), dtype=float)
        return self.conjugated(s) / np.asarray(self.profile.omega(t), dtype=float)

    def support_for(self, x: float, tail_eps: float = 1e-14):
        """History window (u_cut, x) whose omitted tail is below tail_eps."""
        lo = x + math.log(tail_eps) / complex(self.lam).real
        if math.isfinite(self.profile.range_inf):
            lo = max(lo, self.profile.range_inf)
        return (lo, x)


def subjective_window(profile: Profile, s_lo: float, s_hi: float, n: int):
    """Lab grid mapping to a uniform subjective grid over [s_lo, s_hi]."""
    s = np.linspace(s_lo, s_hi, n)
    t = np.asarray(profile.psi_inv(s), dtype=float)
    return t, s


def packet_grid(packet: GaussianPacket, n: int = 1025, pad: float = 8.5):
    """Uniform-in-subjective-time lab grid covering a packet's support."""
    lo = packet.center - pad * packet.width
    hi = packet.center + pad * packet.width
    L = packet.profile.range_inf
    if math.isfinite(L):
        lo = max(lo, L + 1e-9 * packet.width)
    t, _ = subjective_window(packet.profile, lo, hi, n)
    return t


def packet_gridfunction(packet: GaussianPacket, n: int = 1025) -> GridFunction:
    grid = packet_grid(packet, n)
    return GridFunction.from_callable(packet, grid)


def frequency_grid(xi_max: float, n_uniform: int = 257,
                   refine_levels: int = 0) -> np.ndarray:
    """Symmetric frequency grid, optionally refined geometrically at xi = 0.

    Plain uniform spacing keeps the trapezoid rule spectrally accurate for
    smooth decayed spectra (Euler-Maclaurin end corrections cancel), so it
    is the default.  Fractional-power multipliers |xi|^a have unbounded
    curvature at the origin; when such a symbol will be applied, pass
    ``refine_levels > 0`` to shrink the cells around the kink - this trades
    the spectral accuracy of the uniform rule for control of the kink error,
    which is the right trade only in that case.
    """
    base = np.linspace(0.0, xi_max, n_uniform)[1:]
    if refine_levels <= 0:
        pos = base
    else:
        dxi = base[0]
        fine = dxi * 0.5 ** np.arange(1, refine_levels + 1)
        pos = np.sort(np.concatenate([fine, base]))
    return np.concatenate([-pos[::-1], [0.0], pos])


def standard_profiles() -> dict[str, Profile]:
    """The three reference profiles used across the verification suite."""
    return {
        "linear_unit": Profile(make_scale("linear", a=1.0, b=0.0),
                               make_weight("constant", c=1.0), label="linear_unit"),
        "exp_scale": Profile(make_scale("exponential", gamma=0.8),
                             make_weight("constant", c=1.0), label="exp_scale"),
        "exp_weight": Profile(make_scale("linear", a=1.0, b=0.0),
                              make_weight("exponential", rho=0.5), label="exp_weight"),
    }


def standard_packet(profile: Profile, width: float = 0.5,
                    freq: float = 0.0) -> GaussianPacket:
    """A packet whose support fits the profile's subjective range."""
    if math.isfinite(profile.range_inf):
        center = profile.range_inf + (_SUPPORT_RADIUS + 1.5) * width
    else:
        center = 0.0
    return GaussianPacket(profile, center=center, width=width, freq=freq)
