"""Time geometry: scale functions, weight functions, profiles, grid carriers.

A scale function ``psi`` is a strictly increasing reparameterization of
laboratory time ("subjective time"); a weight ``omega`` is a positive
density modulating how strongly past states persist.  Every operator in the
package is the conjugation of a classical one by the map

    (T u)(s) = omega(psi^{-1}(s)) * u(psi^{-1}(s)),

so this module also provides that map, its inverse, and the weighted L1
norm it preserves.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq


class MonotonicityError(ValueError):
    """Candidate scale function is not strictly increasing."""


class RangeError(ValueError):
    """Requested point lies outside the represented range."""


def _trap_weights(x: np.ndarray) -> np.ndarray:
    """Trapezoid quadrature weights for a (possibly nonuniform) grid."""
    dx = np.diff(x)
    w = np.empty_like(x)
    w[0] = dx[0] / 2.0
    w[-1] = dx[-1] / 2.0
    w[1:-1] = (dx[:-1] + dx[1:]) / 2.0
    return w


@dataclass(frozen=True)
class ScaleFunction:
    """Strictly increasing subjective-time map with derivative and inverse.

    ``range_inf`` is the limit of ``eval`` at t -> -inf: ``-inf`` for scales
    covering the whole line, finite (e.g. 0) for exponential-type scales.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    range_inf: float
    kind: str = "custom"

    def __call__(self, t):
        return self.eval(t)


@dataclass(frozen=True)
class WeightFunction:
    """Positive memory density omega(t)."""

    eval: Callable[[np.ndarray], np.ndarray]
    kind: str = "custom"

    def __call__(self, t):
        return self.eval(t)


@dataclass(frozen=True)
class Profile:
    """A (scale, weight) pair parameterizing every weighted operator."""

    scale: ScaleFunction
    weight: WeightFunction
    label: str = ""

    def psi(self, t):
        return self.scale.eval(t)

    def dpsi(self, t):
        return self.scale.deriv(t)

    def psi_inv(self, s):
        return self.scale.inverse(s)

    def omega(self, t):
        return self.weight.eval(t)

    @property
    def range_inf(self) -> float:
        return self.scale.range_inf


def make_scale(kind: str, **params) -> ScaleFunction:
    """Build a scale function.

    Kinds:
      * ``linear``     -- psi(t) = a*t + b with a > 0 (defaults a=1, b=0)
      * ``exponential``-- psi(t) = exp(gamma*t) with gamma > 0
      * ``power``      -- psi(t) = t**p + t with odd p >= 3 (the bare
        monomial has zero slope at the origin and is rejected by validation)
      * ``tabulated``  -- monotone samples (t_i, psi_i), at least 8 of them;
        evaluated by shape-preserving (PCHIP) interpolation, inverted by
        bisection to 1e-12 in t, linearly extrapolated beyond the samples
    """
    if kind == "linear":
        a = float(params.get("a", 1.0))
        b = float(params.get("b", 0.0))
        if a <= 0.0:
            raise MonotonicityError(f"linear scale needs a > 0, got a={a:g}")
        return ScaleFunction(
            eval=lambda t, a=a, b=b: a * np.asarray(t, float) + b,
            deriv=lambda t, a=a: np.full_like(np.asarray(t, float), a),
            inverse=lambda s, a=a, b=b: (np.asarray(s, float) - b) / a,
            range_inf=-math.inf,
            kind=f"linear({a:g},{b:g})",
        )
    if kind == "exponential":
        g = float(params.get("gamma", params.get("rate", 1.0)))
        if g <= 0.0:
            raise MonotonicityError(f"exponential scale needs gamma > 0, got {g:g}")
        return ScaleFunction(
            eval=lambda t, g=g: np.exp(g * np.asarray(t, float)),
            deriv=lambda t, g=g: g * np.exp(g * np.asarray(t, float)),
            inverse=lambda s, g=g: np.log(np.asarray(s, float)) / g,
            range_inf=0.0,
            kind=f"exponential({g:g})",
        )
    if kind == "power":
        p = int(params.get("p", 3))
        if p < 3 or p % 2 == 0:
            raise MonotonicityError(f"power scale needs odd p >= 3, got {p}")

        def _eval(t, p=p):
            t = np.asarray(t, float)
            return t ** p + t

        def _deriv(t, p=p):
            t = np.asarray(t, float)
            return p * t ** (p - 1) + 1.0

        def _inverse(s, p=p):
            s = np.asarray(s, float)

            def solve_one(si):
                lo = -max(1.0, abs(si))
                hi = max(1.0, abs(si))
                while lo ** p + lo > si:
                    lo *= 2.0
                while hi ** p + hi < si:
                    hi *= 2.0
                return brentq(lambda t: t ** p + t - si, lo, hi, xtol=1e-14)

            if s.ndim == 0:
                return np.float64(solve_one(float(s)))
            return np.array([solve_one(si) for si in s.ravel()]).reshape(s.shape)

        return ScaleFunction(_eval, _deriv, _inverse, -math.inf, kind=f"power({p})")
    if kind == "tabulated":
        samples = params["samples"]
        t_s = np.asarray(samples[0], float)
        psi_s = np.asarray(samples[1], float)
        if t_s.size < 8:
            raise ValueError("tabulated scale needs at least 8 samples")
        if np.any(np.diff(t_s) <= 0) or np.any(np.diff(psi_s) <= 0):
            raise MonotonicityError("tabulated samples must be strictly increasing")
        interp = PchipInterpolator(t_s, psi_s)
        dinterp = interp.derivative()
        lo_slope = float(dinterp(t_s[0]))
        hi_slope = float(dinterp(t_s[-1]))

        def _eval(t):
            t = np.asarray(t, float)
            out = interp(np.clip(t, t_s[0], t_s[-1]))
            out = np.where(t < t_s[0], psi_s[0] + lo_slope * (t - t_s[0]), out)
            out = np.where(t > t_s[-1], psi_s[-1] + hi_slope * (t - t_s[-1]), out)
            return out

        def _deriv(t):
            t = np.asarray(t, float)
            out = dinterp(np.clip(t, t_s[0], t_s[-1]))
            out = np.where(t < t_s[0], lo_slope, out)
            out = np.where(t > t_s[-1], hi_slope, out)
            return out

        def _inv_one(si):
            if si <= psi_s[0]:
                if lo_slope <= 0.0:
                    raise RangeError("cannot invert below tabulated range")
                return t_s[0] + (si - psi_s[0]) / lo_slope
            if si >= psi_s[-1]:
                if hi_slope <= 0.0:
                    raise RangeError("cannot invert above tabulated range")
                return t_s[-1] + (si - psi_s[-1]) / hi_slope
            return brentq(lambda t: float(interp(t)) - si, t_s[0], t_s[-1],
                          xtol=1e-12)

        def _inverse(s):
            s = np.asarray(s, float)
            if s.ndim == 0:
                return np.float64(_inv_one(float(s)))
            return np.array([_inv_one(si) for si in s.ravel()]).reshape(s.shape)

        range_inf = -math.inf if lo_slope > 0.0 else float(psi_s[0])
        return ScaleFunction(_eval, _deriv, _inverse, range_inf, kind="tabulated")
    raise ValueError(f"unknown scale kind {kind!r}")


def make_weight(kind: str, **params) -> WeightFunction:
    """Build a weight function.

    Kinds: ``constant`` (c > 0), ``exponential`` (omega = exp(rho*t), any
    real rho), ``power_positive`` (omega = (1 + t^2)^q).
    """
    if kind == "constant":
        c = float(params.get("c", 1.0))
        if c <= 0.0:
            raise ValueError(f"constant weight must be positive, got {c:g}")
        return WeightFunction(
            eval=lambda t, c=c: np.full_like(np.asarray(t, float), c),
            kind=f"constant({c:g})",
        )
    if kind == "exponential":
        rho = float(params.get("rho", 0.0))
        return WeightFunction(
            eval=lambda t, rho=rho: np.exp(rho * np.asarray(t, float)),
            kind=f"exponential({rho:g})",
        )
    if kind == "power_positive":
        q = float(params.get("q", 1.0))
        return WeightFunction(
            eval=lambda t, q=q: (1.0 + np.asarray(t, float) ** 2) ** q,
            kind=f"power_positive({q:g})",
        )
    raise ValueError(f"unknown weight kind {kind!r}")


def load_scale_csv(path) -> ScaleFunction:
    """Load a tabulated scale from a two-column CSV with header ``t,psi``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["t", "psi"]:
            raise ValueError(f"expected header 't,psi', got {header!r}")
        rows = [(float(r[0]), float(r[1])) for r in reader if r]
    t = np.array([r[0] for r in rows])
    psi = np.array([r[1] for r in rows])
    return make_scale("tabulated", samples=(t, psi))


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on a strictly increasing laboratory-time grid."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or values.ndim != 1 or grid.size != values.size:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if grid.size < 2:
            raise ValueError("need at least two samples")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            raise ValueError("grid and values must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, f, grid) -> "GridFunction":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.asarray(f(grid), dtype=complex))

    def interpolator(self):
        """Shape-preserving complex interpolant over the grid."""
        return _interp_complex(self.grid, self.values)


def _interp_complex(x: np.ndarray, y: np.ndarray):
    # scipy's PCHIP warns while forming harmonic-mean slopes over stretches
    # of exact zeros; the resulting (zero) derivatives are what we want
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        re = PchipInterpolator(x, np.real(y))
        im = PchipInterpolator(x, np.imag(y))
    return lambda q: re(q) + 1j * im(q)


def conjugate(u: GridFunction, p: Profile, subjective_grid) -> GridFunction:
    """Map u to subjective time: v(s) = omega(psi^{-1}(s)) u(psi^{-1}(s)).

    Every s must lie inside [psi(t_first), psi(t_last)] of u's grid; u is
    resampled by monotone cubic interpolation.
    """
    s = np.asarray(subjective_grid, dtype=float)
    span_lo = float(p.psi(u.grid[0]))
    span_hi = float(p.psi(u.grid[-1]))
    if np.any(s < span_lo - 1e-12) or np.any(s > span_hi + 1e-12):
        raise RangeError(
            f"subjective grid exceeds [psi(t0), psi(tN)] = [{span_lo:g}, {span_hi:g}]")
    t_back = np.asarray(p.psi_inv(np.clip(s, span_lo, span_hi)), dtype=float)
    u_interp = _interp_complex(u.grid, u.values)
    vals = np.asarray(p.omega(t_back), dtype=float) * u_interp(t_back)
    return GridFunction(s, vals)


def conjugate_inverse(v: GridFunction, p: Profile, lab_grid) -> GridFunction:
    """Inverse of :func:`conjugate`: u(t) = v(psi(t)) / omega(t)."""
    t = np.asarray(lab_grid, dtype=float)
    s = np.asarray(p.psi(t), dtype=float)
    if np.any(s < v.grid[0] - 1e-12) or np.any(s > v.grid[-1] + 1e-12):
        raise RangeError("psi(lab_grid) exceeds the subjective grid span")
    v_interp = _interp_complex(v.grid, v.values)
    vals = v_interp(np.clip(s, v.grid[0], v.grid[-1])) / np.asarray(p.omega(t), float)
    return GridFunction(t, vals)


def weighted_norm_l1(u: GridFunction, p: Profile) -> float:
    """Trapezoid approximation of ``int |u| omega psi' dt`` over the grid span."""
    w = _trap_weights(u.grid)
    dens = np.asarray(p.omega(u.grid), float) * np.asarray(p.dpsi(u.grid), float)
    return float(np.sum(w * np.abs(u.values) * dens))


@dataclass(frozen=True)
class ProfileReport:
    """Validation summary for a profile over a probe grid (never mutates it)."""

    min_deriv: float
    min_weight: float
    max_inverse_weight: float
    monotone: bool
    inverse_max_error: float
    range_inf: float
    range_inf_finite: bool
    flags: tuple = field(default_factory=tuple)

    @property
    def hypotheses_ok(self) -> bool:
        """Strict-monotonicity and weight-boundedness checks all pass.

        A finite lower range limit is reported via ``range_inf_finite`` but
        does not fail the profile: the operators integrate in subjective time
        over (range_inf, psi(t)), which is well-defined either way.
        """
        return (self.monotone and self.min_deriv > 0.0 and self.min_weight > 0.0
                and math.isfinite(self.max_inverse_weight)
                and self.inverse_max_error < 1e-10)


def validate_profile(p: Profile, probe_grid) -> ProfileReport:
    """Probe a profile's hypotheses on a grid and report the evidence."""
    t = np.asarray(probe_grid, dtype=float)
    if t.size == 0:
        raise ValueError("probe grid must be nonempty")
    psi = np.asarray(p.psi(t), float)
    dpsi = np.asarray(p.dpsi(t), float)
    omega = np.asarray(p.omega(t), float)
    monotone = bool(np.all(np.diff(psi) > 0.0)) if t.size > 1 else True
    with np.errstate(divide="ignore"):
        inv_w = np.where(omega > 0.0, 1.0 / omega, np.inf)
    back = np.asarray(p.psi_inv(psi), float)
    inv_err = float(np.max(np.abs(back - t))) if t.size else math.inf
    flags = []
    if not monotone:
        flags.append("scale not strictly increasing on probe grid")
    if np.any(dpsi <= 0.0):
        flags.append("scale derivative not positive everywhere on probe grid")
    if np.any(omega <= 0.0):
        flags.append("weight not positive on probe grid")
    finite_inf = math.isfinite(p.range_inf)
    if finite_inf:
        flags.append(
            f"scale range bounded below at {p.range_inf:g}; operator history "
            "starts there instead of -inf")
    return ProfileReport(
        min_deriv=float(np.min(dpsi)),
        min_weight=float(np.min(omega)),
        max_inverse_weight=float(np.max(inv_w)),
        monotone=monotone,
        inverse_max_error=inv_err,
        range_inf=float(p.range_inf),
        range_inf_finite=finite_inf,
        flags=tuple(flags),
    )
