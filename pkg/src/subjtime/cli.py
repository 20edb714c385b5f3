"""Command-line interface: operator evaluation, solving, decay analysis.

CSV interchange formats (exact headers):

* tabulated scale:  ``t,psi``
* time-domain function (transform input): ``t,re,im``
* spectra:          ``xi,re,im``
* solution curves:  ``t,sigma_re,sigma_im,scenario``
* decay-fit report: ``scenario,mode,slope_or_rate,rms_residual,t_min,t_max``

All numeric output is printed with 12 significant digits in scientific
notation; identical inputs produce byte-identical files.  Exit codes:
0 success, 2 argument/configuration errors, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import GaussianPacket, frequency_grid
from .geometry import (GridFunction, MonotonicityError, Profile, RangeError,
                       load_scale_csv, make_scale, make_weight)
from .operators import (TailEnvelopeError, weyl_derivative_marchaud,
                        weyl_derivative_rl, weyl_integral)
from .quadrature import QuadratureError, QuadratureSpec
from .special import (DivergentTruncationError, GammaPoleError,
                      MLConvergenceError, mittag_leffler)
from .spectral import (SpectralResolutionError, SpectralWindowError,
                       forward_transform)
from .viscoelastic import (DecayFit, ForcingSpec, KVModel, amnesia_fit,
                           kv_residual, relaxation_experiment,
                           solve_kv_spectral, solve_kv_timedomain)

_NUMERIC_ERRORS = (QuadratureError, MLConvergenceError, DivergentTruncationError,
                   SpectralResolutionError, SpectralWindowError)
_USAGE_ERRORS = (ValueError, GammaPoleError, TailEnvelopeError,
                 MonotonicityError, RangeError, OSError)


def _fmt(x: float) -> str:
    return f"{x:.11e}"


def parse_scale_spec(spec: str):
    """Scale from a compact spec: linear:a,b | exp:gamma | power:p | tabulated:path."""
    kind, _, arg = spec.partition(":")
    if kind == "linear":
        a, b = ([float(v) for v in arg.split(",")] + [0.0])[:2] if arg else (1.0, 0.0)
        return make_scale("linear", a=a, b=b)
    if kind == "exp":
        return make_scale("exponential", gamma=float(arg or 1.0))
    if kind == "power":
        return make_scale("power", p=int(arg or 3))
    if kind == "tabulated":
        return load_scale_csv(arg)
    raise ValueError(f"unknown scale spec {spec!r}")


def parse_weight_spec(spec: str):
    """Weight from a compact spec: const:c | exp:rho | powpos:q."""
    kind, _, arg = spec.partition(":")
    if kind == "const":
        return make_weight("constant", c=float(arg or 1.0))
    if kind == "exp":
        return make_weight("exponential", rho=float(arg or 0.0))
    if kind == "powpos":
        return make_weight("power_positive", q=float(arg or 1.0))
    raise ValueError(f"unknown weight spec {spec!r}")


@dataclass
class Scenario:
    """One solver run: material, geometry, grid, forcing, tolerances."""

    alpha: float = 0.8
    lam: float = 1.0
    scale_spec: str = "linear:1,0"
    weight_spec: str = "const:1"
    t_min: float = -2.0
    t_max: float = 60.0
    n_points: int = 497
    pulse_center: float = 1.0
    pulse_width: float = 0.1
    pulse_amplitude: float = 1.0
    rel_tol: float = 1e-9
    abs_tol: float = 1e-13
    label: str = "scenario"

    def profile(self) -> Profile:
        return Profile(parse_scale_spec(self.scale_spec),
                       parse_weight_spec(self.weight_spec), label=self.label)

    def model(self) -> KVModel:
        return KVModel(self.alpha, self.lam, self.profile())

    def grid(self) -> np.ndarray:
        if self.n_points < 16:
            raise ValueError("n_points must be at least 16")
        if not self.t_min < self.t_max:
            raise ValueError("t_min must be below t_max")
        return np.linspace(self.t_min, self.t_max, self.n_points)

    def quad(self) -> QuadratureSpec:
        return QuadratureSpec(rel_tol=self.rel_tol, abs_tol=self.abs_tol)

    def forcing(self) -> ForcingSpec:
        return ForcingSpec(center=self.pulse_center, width=self.pulse_width,
                           amplitude=self.pulse_amplitude)


_SCENARIO_KEYS = {
    "alpha": ("alpha", float),
    "lambda": ("lam", float),
    "scale": ("scale_spec", str),
    "weight": ("weight_spec", str),
    "t_min": ("t_min", float),
    "t_max": ("t_max", float),
    "n_points": ("n_points", int),
    "pulse_center": ("pulse_center", float),
    "pulse_width": ("pulse_width", float),
    "pulse_amplitude": ("pulse_amplitude", float),
    "rel_tol": ("rel_tol", float),
    "abs_tol": ("abs_tol", float),
    "label": ("label", str),
}


def parse_scenario(path) -> Scenario:
    """Read a ``key = value`` scenario file; '#' starts a comment."""
    scen = Scenario()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _SCENARIO_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            attr, conv = _SCENARIO_KEYS[key]
            try:
                setattr(scen, attr, conv(value))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for {key}: {exc}")
    if not 0.0 < scen.alpha < 1.0:
        raise ValueError(f"{path}: alpha must lie in (0, 1), got {scen.alpha:g}")
    if scen.lam <= 0.0:
        raise ValueError(f"{path}: lambda must be positive")
    scen.grid()
    scen.profile()
    return scen


def write_curve_csv(path, curves: dict[str, GridFunction]) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["t", "sigma_re", "sigma_im", "scenario"])
        for label, gf in curves.items():
            for t, v in zip(gf.grid, gf.values):
                wr.writerow([_fmt(t), _fmt(v.real), _fmt(v.imag), label])


def write_fits_csv(path, fits: dict[str, DecayFit]) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["scenario", "mode", "slope_or_rate", "rms_residual",
                     "t_min", "t_max"])
        for label, fit in fits.items():
            wr.writerow([label, fit.mode, _fmt(fit.slope_or_rate),
                         _fmt(fit.rms_residual), _fmt(fit.fit_window[0]),
                         _fmt(fit.fit_window[1])])


def write_spectrum_csv(path, spec_grid) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["xi", "re", "im"])
        for xi, v in zip(spec_grid.xi, spec_grid.values):
            wr.writerow([_fmt(xi), _fmt(v.real), _fmt(v.imag)])


def read_function_csv(path) -> GridFunction:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["t", "re", "im"]:
            raise ValueError(f"{path}: expected header 't,re,im', got {header!r}")
        rows = [(float(r[0]), float(r[1]), float(r[2])) for r in reader if r]
    t = np.array([r[0] for r in rows])
    vals = np.array([complex(r[1], r[2]) for r in rows])
    return GridFunction(t, vals)


def _print_complex(v: complex) -> None:
    if abs(v.imag) > 1e-14 * max(abs(v.real), 1e-300):
        print(f"{_fmt(v.real)},{_fmt(v.imag)}")
    else:
        print(_fmt(v.real))


def _parse_fn(spec: str, profile: Profile) -> GaussianPacket:
    kind, _, arg = spec.partition(":")
    if kind == "gauss":
        c, w = ([float(v) for v in arg.split(",")] + [1.0])[:2] if arg else (0.0, 1.0)
        return GaussianPacket(profile, center=c, width=w)
    raise ValueError(f"unknown test-function spec {spec!r} (use gauss:center,width)")


def _cmd_ml(args) -> int:
    parts = [float(v) for v in args.z.split(",")]
    z = complex(parts[0], parts[1] if len(parts) > 1 else 0.0)
    _print_complex(mittag_leffler(args.alpha, args.beta, z))
    return 0


def _cmd_frac(args, derivative: bool) -> int:
    profile = Profile(parse_scale_spec(args.scale), parse_weight_spec(args.weight))
    f = _parse_fn(args.fn, profile)
    q = QuadratureSpec(rel_tol=args.rel_tol)
    if not derivative:
        v = weyl_integral(args.alpha, f, profile, args.at, q)
    elif args.form == "marchaud":
        v = weyl_derivative_marchaud(args.alpha, f, profile, args.at, q)
    else:
        v = weyl_derivative_rl(args.alpha, f, profile, args.at, q)
    _print_complex(v)
    return 0


def _cmd_transform(args) -> int:
    profile = Profile(parse_scale_spec(args.scale), parse_weight_spec(args.weight))
    f = read_function_csv(args.input)
    xi = frequency_grid(args.xi_max, n_uniform=args.n_xi // 2 + 1)
    F = forward_transform(f, profile, xi)
    write_spectrum_csv(args.out, F)
    print(args.out)
    return 0


def _solve_scenario(scen: Scenario, method: str):
    model = scen.model()
    grid = scen.grid()
    q = scen.quad()
    pulse = scen.forcing().packet(model.profile)
    if method == "time":
        sigma = solve_kv_timedomain(model, pulse, grid, q)
    else:
        lo, hi = pulse.subjective_support
        n_f = max(1025, scen.n_points)
        s_f = np.linspace(lo, hi, n_f)
        f_grid = np.asarray(model.profile.psi_inv(s_f), dtype=float)
        fgf = GridFunction.from_callable(pulse, f_grid)
        xi = frequency_grid(9.0 / scen.pulse_width, n_uniform=1025,
                            refine_levels=14)
        sigma = solve_kv_spectral(model, fgf, grid, xi)
    f_ref = GridFunction.from_callable(
        pulse, np.linspace(grid[0], grid[-1], max(2049, scen.n_points)))
    res = kv_residual(sigma, f_ref, model, q)
    return sigma, res


def _cmd_solve(args) -> int:
    scen = parse_scenario(args.config)
    sigma, res = _solve_scenario(scen, args.method)
    write_curve_csv(args.out, {scen.label: sigma})
    print(f"residual {_fmt(res)}")
    return 0


def _cmd_amnesia(args) -> int:
    scen = parse_scenario(args.config)
    model = scen.model()
    lo = args.t_min if args.t_min is not None else (50.0 if args.mode == "loglog" else 5.0)
    hi = args.t_max if args.t_max is not None else (500.0 if args.mode == "loglog" else 12.0)
    fit = amnesia_fit(model, np.linspace(lo, hi, 60), args.mode)
    write_fits_csv(args.out, {scen.label: fit})
    print(f"{scen.label} {args.mode} {_fmt(fit.slope_or_rate)}")
    return 0


def figure1_scenarios() -> list[Scenario]:
    """The three-panel comparison: standard, rapid aging, weighted damping."""
    return [
        Scenario(label="standard"),
        Scenario(label="rapid_aging", scale_spec="exp:0.8"),
        Scenario(label="weighted_damping", weight_spec="exp:0.5"),
    ]


def _cmd_figure1(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    scens = figure1_scenarios()
    models = [s.model() for s in scens]
    grid = scens[0].grid()
    curves = relaxation_experiment(models, scens[0].forcing(), grid,
                                   scens[0].quad())
    files = []
    for label, gf in curves.items():
        path = outdir / f"{label}.csv"
        write_curve_csv(path, {label: gf})
        files.append(str(path))
    fits = {
        "standard": amnesia_fit(models[0], np.linspace(50.0, 500.0, 60), "loglog"),
        "rapid_aging": amnesia_fit(models[1], np.linspace(5.0, 12.0, 60), "semilog"),
        "weighted_damping": amnesia_fit(models[2], np.linspace(50.0, 500.0, 60),
                                        "loglog"),
    }
    fit_path = outdir / "figure1_fits.csv"
    write_fits_csv(fit_path, fits)
    files.append(str(fit_path))
    for f in files:
        print(f)
    return 0


def _cmd_selftest(_args) -> int:
    from . import selftest
    return selftest.run()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="subjtime",
        description="weighted fractional calculus on subjective time scales")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ml", help="evaluate the two-parameter Mittag-Leffler function")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--z", type=str, required=True, metavar="RE[,IM]")
    p.set_defaults(handler=_cmd_ml)

    for name, deriv in (("frac-int", False), ("frac-deriv", True)):
        p = sub.add_parser(name, help=f"evaluate the fractional "
                           f"{'derivative' if deriv else 'integral'} pointwise")
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--scale", type=str, default="linear:1,0")
        p.add_argument("--weight", type=str, default="const:1")
        p.add_argument("--at", type=float, required=True)
        p.add_argument("--fn", type=str, default="gauss:0,1",
                       help="test function, e.g. gauss:center,width")
        p.add_argument("--rel-tol", type=float, default=1e-9, dest="rel_tol")
        if deriv:
            p.add_argument("--form", choices=("marchaud", "rl"), default="marchaud")
        p.set_defaults(handler=(lambda a, d=deriv: _cmd_frac(a, d)))

    p = sub.add_parser("transform", help="weighted Fourier transform of a CSV function")
    p.add_argument("--input", type=str, required=True, help="CSV with header t,re,im")
    p.add_argument("--scale", type=str, default="linear:1,0")
    p.add_argument("--weight", type=str, default="const:1")
    p.add_argument("--xi-max", type=float, default=20.0, dest="xi_max")
    p.add_argument("--n-xi", type=int, default=1025, dest="n_xi")
    p.add_argument("--out", type=str, default="spectrum.csv")
    p.set_defaults(handler=_cmd_transform)

    p = sub.add_parser("solve", help="solve the relaxation equation for a scenario")
    p.add_argument("--config", type=str, required=True)
    p.add_argument("--method", choices=("time", "spectral"), default="time")
    p.add_argument("--out", type=str, default="curve.csv")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("amnesia", help="fit the memory-kernel decay law")
    p.add_argument("--config", type=str, required=True)
    p.add_argument("--mode", choices=("loglog", "semilog"), required=True)
    p.add_argument("--t-min", type=float, default=None, dest="t_min")
    p.add_argument("--t-max", type=float, default=None, dest="t_max")
    p.add_argument("--out", type=str, default="fits.csv")
    p.set_defaults(handler=_cmd_amnesia)

    p = sub.add_parser("figure1", help="run the three comparison scenarios "
                       "and emit curves plus a fit report")
    p.add_argument("--outdir", type=str, default=".")
    p.set_defaults(handler=_cmd_figure1)

    p = sub.add_parser("selftest", help="run the numerical invariant suite")
    p.set_defaults(handler=_cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.handler(args)
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
