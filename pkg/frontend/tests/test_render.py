"""Render pipeline: styles, degraded modes, error handling, determinism."""

import csv
import shutil
import subprocess
import sys

import numpy as np
import pytest

from figrender import CurveSet, RenderError, render
from figrender.cli import main as cli_main
from figrender.plotting import FLOOR, STYLE_MAP


def write_curve(path, label, t, sigma):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["t", "sigma_re", "sigma_im", "scenario"])
        for ti, si in zip(t, sigma):
            wr.writerow([f"{ti:.11e}", f"{si.real:.11e}", f"{si.imag:.11e}",
                         label])


def write_fits(path, rows):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["scenario", "mode", "slope_or_rate", "rms_residual",
                     "t_min", "t_max"])
        wr.writerows(rows)


def synthetic_inputs(tmp_path):
    t = np.linspace(-2.0, 60.0, 301)
    tail = np.where(t > 1.0, np.maximum(t - 1.0, 1e-3) ** -1.8, 0.0)
    curves = {
        "standard": tail * 0.17,
        "rapid_aging": np.where(t > 0.1, np.exp(-1.44 * np.maximum(t, 0.0)),
                                0.0),
        "weighted_damping": tail * 0.17 * np.exp(-0.5 * t),
    }
    paths = []
    for label, sigma in curves.items():
        p = tmp_path / f"{label}.csv"
        write_curve(p, label, t, sigma.astype(complex))
        paths.append(str(p))
    fits = tmp_path / "fits.csv"
    write_fits(fits, [
        ["standard", "loglog", "-1.80e+00", "1e-3", "5.0e1", "5.0e2"],
        ["rapid_aging", "semilog", "-1.44e+00", "1e-2", "5.0e0", "1.2e1"],
        ["weighted_damping", "loglog", "-1.80e+00", "1e-3", "5.0e1", "5.0e2"],
    ])
    return paths, str(fits)


class TestCurveSet:
    def test_caption_styles(self, tmp_path):
        paths, _ = synthetic_inputs(tmp_path)
        cs = CurveSet.from_csvs(paths)
        assert cs.styles["standard"] == ("black", "-")
        assert cs.styles["rapid_aging"] == ("red", "--")
        assert cs.styles["weighted_damping"] == ("blue", "-.")
        assert set(cs.times) == set(STYLE_MAP)

    def test_rejects_wrong_header(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("time,value\n0,1\n")
        with pytest.raises(RenderError):
            CurveSet.from_csvs([str(bad)])

    def test_rejects_duplicate_labels(self, tmp_path):
        t = np.linspace(0, 1, 8)
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        write_curve(a, "standard", t, np.ones(8, dtype=complex))
        write_curve(b, "standard", t, np.ones(8, dtype=complex))
        with pytest.raises(RenderError):
            CurveSet.from_csvs([str(a), str(b)])


class TestRender:
    def test_three_scenarios_with_annotation(self, tmp_path):
        paths, fits = synthetic_inputs(tmp_path)
        out = tmp_path / "fig.png"
        info = render(paths, fits, out)
        assert out.exists() and out.stat().st_size > 10_000
        assert set(info["labels"]) == set(STYLE_MAP)
        assert "-1.8" in info["annotation"]

    def test_zero_curve_flat_no_annotation(self, tmp_path):
        t = np.linspace(0.0, 10.0, 33)
        p = tmp_path / "zero.csv"
        write_curve(p, "standard", t, np.zeros(33, dtype=complex))
        out = tmp_path / "fig.png"
        info = render([str(p)], None, out)
        assert out.exists()
        assert info["annotation"] == ""

    def test_missing_fits_renders_unannotated(self, tmp_path):
        paths, _ = synthetic_inputs(tmp_path)
        out = tmp_path / "fig.png"
        info = render(paths, None, out)
        assert out.exists()
        assert info["annotation"] == ""

    def test_deterministic_bytes(self, tmp_path):
        paths, fits = synthetic_inputs(tmp_path)
        out1 = tmp_path / "one.png"
        out2 = tmp_path / "two.png"
        render(paths, fits, out1)
        render(paths, fits, out2)
        assert out1.read_bytes() == out2.read_bytes()

    def test_floor_clipping(self, tmp_path):
        t = np.linspace(1.0, 10.0, 16)
        vals = np.full(16, FLOOR / 10.0, dtype=complex)
        p = tmp_path / "tiny.csv"
        write_curve(p, "standard", t, vals)
        out = tmp_path / "fig.png"
        info = render([str(p)], None, out)
        assert out.exists()
        assert info["annotation"] == ""


class TestCli:
    def test_exit_zero_and_prints_path(self, tmp_path, capsys):
        paths, fits = synthetic_inputs(tmp_path)
        out = tmp_path / "fig.png"
        rc = cli_main(["--curves", *paths, "--fits", fits, "--out", str(out)])
        assert rc == 0
        assert str(out) in capsys.readouterr().out

    def test_malformed_csv_nonzero_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("t,x\n0,1\n")
        rc = cli_main(["--curves", str(bad), "--out", str(tmp_path / "f.png")])
        assert rc == 1
        assert "error" in capsys.readouterr().err


@pytest.mark.skipif(shutil.which("subjtime") is None,
                    reason="solver CLI not installed")
def test_end_to_end_from_solver_output(tmp_path):
    # acceptance: consume the real figure1 CSVs through the CSV interface
    outdir = tmp_path / "fig1"
    res = subprocess.run(["subjtime", "figure1", "--outdir", str(outdir)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    curves = [str(outdir / f"{n}.csv")
              for n in ("standard", "rapid_aging", "weighted_damping")]
    png = tmp_path / "figure1.png"
    rc = cli_main(["--curves", *curves,
                   "--fits", str(outdir / "figure1_fits.csv"),
                   "--out", str(png)])
    assert rc == 0
    assert png.exists() and png.stat().st_size > 10_000
    info = render(curves, str(outdir / "figure1_fits.csv"),
                  tmp_path / "again.png")
    assert "-1.8" in info["annotation"]
    assert set(info["labels"]) == {"standard", "rapid_aging",
                                   "weighted_damping"}
