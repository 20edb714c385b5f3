"""Curve loading and the two-panel figure."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

#: double-precision floor: log-log values below this are noise, not signal
FLOOR = 1e-14

#: scenario -> (color, linestyle); unknown scenarios fall back in order
STYLE_MAP = {
    "standard": ("black", "-"),
    "rapid_aging": ("red", "--"),
    "weighted_damping": ("blue", "-."),
}
FALLBACK_STYLES = [("dimgray", "-"), ("darkorange", "--"), ("teal", "-.")]

CURVE_HEADER = ["t", "sigma_re", "sigma_im", "scenario"]
FITS_HEADER = ["scenario", "mode", "slope_or_rate", "rms_residual",
               "t_min", "t_max"]


class RenderError(ValueError):
    """Input CSV does not conform to the solver's interchange format."""


@dataclass
class CurveSet:
    """Per-scenario response magnitudes with their drawing styles."""

    times: dict[str, np.ndarray] = field(default_factory=dict)
    magnitudes: dict[str, np.ndarray] = field(default_factory=dict)
    styles: dict[str, tuple] = field(default_factory=dict)

    @classmethod
    def from_csvs(cls, paths) -> "CurveSet":
        out = cls()
        for path in paths:
            try:
                with open(path, newline="") as fh:
                    reader = csv.reader(fh)
                    header = next(reader, None)
                    if header is None or [h.strip() for h in header] != CURVE_HEADER:
                        raise RenderError(
                            f"{path}: expected header {','.join(CURVE_HEADER)}, "
                            f"got {header!r}")
                    rows = [r for r in reader if r]
            except OSError as exc:
                raise RenderError(f"{path}: {exc}")
            by_label: dict[str, list] = {}
            try:
                for r in rows:
                    by_label.setdefault(r[3], []).append(
                        (float(r[0]), float(r[1]), float(r[2])))
            except (ValueError, IndexError) as exc:
                raise RenderError(f"{path}: malformed row: {exc}")
            for label, vals in by_label.items():
                if label in out.times:
                    raise RenderError(f"duplicate scenario label {label!r}")
                arr = np.asarray(vals, dtype=float)
                if not np.all(np.isfinite(arr)):
                    raise RenderError(f"{path}: non-finite values for {label!r}")
                out.times[label] = arr[:, 0]
                out.magnitudes[label] = np.hypot(arr[:, 1], arr[:, 2])
                out.styles[label] = STYLE_MAP.get(
                    label, FALLBACK_STYLES[len(out.styles) % len(FALLBACK_STYLES)])
        if not out.times:
            raise RenderError("no curves found")
        return out


def load_fits(path) -> dict[str, dict]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != FITS_HEADER:
                raise RenderError(
                    f"{path}: expected header {','.join(FITS_HEADER)}, "
                    f"got {header!r}")
            fits = {}
            for r in reader:
                if not r:
                    continue
                fits[r[0]] = {"mode": r[1], "slope_or_rate": float(r[2]),
                              "rms_residual": float(r[3]),
                              "t_min": float(r[4]), "t_max": float(r[5])}
    except OSError as exc:
        raise RenderError(f"{path}: {exc}")
    except (ValueError, IndexError) as exc:
        raise RenderError(f"{path}: malformed row: {exc}")
    return fits


def render(curve_paths, fits_path, out_path) -> dict:
    """Draw the two-panel comparison figure and write it to ``out_path``.

    Returns a summary dict (scenario labels, annotation text if any) so
    callers and tests can inspect what was drawn without parsing the image.
    The fit report is optional: without it the curves render unannotated.
    """
    curves = CurveSet.from_csvs(curve_paths)
    fits = load_fits(fits_path) if fits_path else {}

    fig, (ax_lin, ax_log) = plt.subplots(1, 2, figsize=(11.0, 4.2), dpi=120)
    for label in curves.times:
        color, ls = curves.styles[label]
        ax_lin.plot(curves.times[label], curves.magnitudes[label],
                    color=color, linestyle=ls, linewidth=1.6, label=label)
    ax_lin.set_xlabel("t")
    ax_lin.set_ylabel("|response|")
    ax_lin.set_title("relaxation response")
    ax_lin.legend(frameon=False)

    drew_log = False
    for label in curves.times:
        t = curves.times[label]
        m = curves.magnitudes[label]
        keep = (t > 0.0) & (m > FLOOR)
        color, ls = curves.styles[label]
        if np.any(keep):
            ax_log.loglog(t[keep], m[keep], color=color, linestyle=ls,
                          linewidth=1.6, label=label)
            drew_log = True
        else:
            # nothing above the floor: a flat reference line, no fit
            ax_log.axhline(FLOOR, color=color, linestyle=ls, linewidth=1.0,
                           label=f"{label} (below floor)")
    ax_log.set_xlabel("t")
    ax_log.set_ylabel("|response|")
    ax_log.set_title("tail decay (log-log)")
    ax_log.legend(frameon=False, fontsize=8)

    annotation = ""
    std_fit = fits.get("standard")
    if drew_log and std_fit and std_fit["mode"] == "loglog":
        slope = std_fit["slope_or_rate"]
        annotation = f"tail slope {slope:.2f}"
        ax_log.text(0.05, 0.08, annotation, transform=ax_log.transAxes,
                    fontsize=10, color="black")

    fig.tight_layout()
    fig.savefig(out_path, format="png")
    plt.close(fig)
    return {"labels": list(curves.times), "annotation": annotation,
            "out": str(out_path)}
