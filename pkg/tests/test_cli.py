"""Command-line surface: subcommands, config parsing, CSV formats, exit codes."""

import csv
import math

import numpy as np
import pytest

from subjtime.cli import (Scenario, figure1_scenarios, main, parse_scale_spec,
                          parse_scenario, parse_weight_spec, read_function_csv)


def run_cli(args):
    return main(args)


class TestScaleWeightSpecs:
    def test_scale_specs(self):
        assert float(parse_scale_spec("linear:2,1").eval(1.0)) == 3.0
        assert float(parse_scale_spec("exp:0.8").eval(0.0)) == 1.0
        assert float(parse_scale_spec("power:3").eval(1.0)) == 2.0
        with pytest.raises(ValueError):
            parse_scale_spec("spiral:1")

    def test_weight_specs(self):
        assert float(parse_weight_spec("const:2").eval(5.0)) == 2.0
        assert float(parse_weight_spec("exp:0.5").eval(2.0)) == pytest.approx(
            math.e)
        assert float(parse_weight_spec("powpos:-1").eval(0.0)) == 1.0
        with pytest.raises(ValueError):
            parse_weight_spec("zigzag:1")


class TestScenarioConfig:
    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.cfg"
        path.write_text("")
        scen = parse_scenario(path)
        assert scen.alpha == 0.8
        assert scen.lam == 1.0
        assert scen.scale_spec == "linear:1,0"
        assert scen.weight_spec == "const:1"

    def test_exponential_scale_key(self, tmp_path):
        path = tmp_path / "scen.cfg"
        path.write_text("scale = exp:0.8\n# comment line\nlabel = aging\n")
        scen = parse_scenario(path)
        assert scen.scale_spec == "exp:0.8"
        assert scen.label == "aging"
        assert scen.profile().range_inf == 0.0

    def test_alpha_out_of_range_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("alpha = 1.5\n")
        with pytest.raises(ValueError):
            parse_scenario(path)

    def test_unknown_key_reports_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("alpha = 0.5\nwibble = 3\n")
        with pytest.raises(ValueError, match=r":2:"):
            parse_scenario(path)

    def test_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("\n\nn_points = soon\n")
        with pytest.raises(ValueError, match=r":3:"):
            parse_scenario(path)

    def test_n_points_floor(self):
        with pytest.raises(ValueError):
            Scenario(n_points=8).grid()


class TestMlCommand:
    def test_exponential_value(self, capsys):
        assert run_cli(["ml", "--alpha", "1", "--beta", "1", "--z", "1"]) == 0
        out = capsys.readouterr().out.strip()
        assert out.startswith("2.71828182846")

    def test_complex_argument(self, capsys):
        assert run_cli(["ml", "--alpha", "0.8", "--beta", "0.8",
                        "--z", "2,1"]) == 0
        out = capsys.readouterr().out.strip()
        assert "," in out

    def test_domain_error_exit_code(self, capsys):
        assert run_cli(["ml", "--alpha", "3", "--beta", "1", "--z", "1"]) == 2


class TestFracCommands:
    def test_integral_then_derivative_roundtrip_scale(self, capsys):
        assert run_cli(["frac-int", "--alpha", "0.5", "--at", "0.2",
                        "--fn", "gauss:0,1"]) == 0
        v_int = float(capsys.readouterr().out.strip())
        assert v_int != 0.0
        assert run_cli(["frac-deriv", "--alpha", "0.5", "--at", "0.2",
                        "--form", "marchaud", "--fn", "gauss:0,1"]) == 0
        v_m = float(capsys.readouterr().out.strip())
        assert run_cli(["frac-deriv", "--alpha", "0.5", "--at", "0.2",
                        "--form", "rl", "--fn", "gauss:0,1"]) == 0
        v_r = float(capsys.readouterr().out.strip())
        assert v_m == pytest.approx(v_r, rel=1e-5)


class TestTransformCommand:
    def test_gaussian_spectrum(self, tmp_path, capsys):
        t = np.linspace(-8, 8, 1201)
        src = tmp_path / "f.csv"
        with open(src, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t", "re", "im"])
            for ti, vi in zip(t, np.exp(-t ** 2 / 2)):
                wr.writerow([f"{ti:.12e}", f"{vi:.12e}", "0.0"])
        out = tmp_path / "spec.csv"
        assert run_cli(["transform", "--input", str(src), "--xi-max", "8",
                        "--out", str(out)]) == 0
        capsys.readouterr()
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["xi", "re", "im"]
        xi = np.array([float(r[0]) for r in rows[1:]])
        re = np.array([float(r[1]) for r in rows[1:]])
        assert np.max(np.abs(re - np.exp(-xi ** 2 / 2))) < 1e-10

    def test_malformed_input_exit_code(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("time,value\n0,1\n")
        assert run_cli(["transform", "--input", str(bad)]) == 2

    def test_roundtrip_reader(self, tmp_path):
        src = tmp_path / "f.csv"
        src.write_text("t,re,im\n0.0,1.0,0.5\n1.0,2.0,-0.5\n")
        gf = read_function_csv(src)
        assert gf.values[1] == 2.0 - 0.5j


class TestSolveCommand:
    def test_solve_writes_curve_and_residual(self, tmp_path, capsys):
        cfg = tmp_path / "scen.cfg"
        cfg.write_text("alpha = 0.8\nt_min = -4\nt_max = 14\nn_points = 361\n"
                       "pulse_width = 0.5\nlabel = demo\n")
        out = tmp_path / "curve.csv"
        assert run_cli(["solve", "--config", str(cfg), "--method", "time",
                        "--out", str(out)]) == 0
        msg = capsys.readouterr().out
        assert msg.startswith("residual ")
        assert float(msg.split()[1]) < 5e-3
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "sigma_re", "sigma_im", "scenario"]
        assert rows[1][3] == "demo"
        assert len(rows) == 362

    def test_zero_forcing_gives_zero_curve(self, tmp_path, capsys):
        cfg = tmp_path / "zero.cfg"
        cfg.write_text("pulse_amplitude = 0.0\nn_points = 64\nt_min = -1\n"
                       "t_max = 4\n")
        out = tmp_path / "curve.csv"
        assert run_cli(["solve", "--config", str(cfg), "--out", str(out)]) == 0
        msg = capsys.readouterr().out
        assert float(msg.split()[1]) == 0.0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        assert all(float(r[1]) == 0.0 and float(r[2]) == 0.0 for r in rows)

    def test_missing_config_exit_code(self, tmp_path):
        assert run_cli(["solve", "--config", str(tmp_path / "nope.cfg")]) == 2


class TestAmnesiaCommand:
    def test_loglog_fit_report(self, tmp_path, capsys):
        cfg = tmp_path / "scen.cfg"
        cfg.write_text("label = standard\n")
        out = tmp_path / "fits.csv"
        assert run_cli(["amnesia", "--config", str(cfg), "--mode", "loglog",
                        "--out", str(out)]) == 0
        capsys.readouterr()
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["scenario", "mode", "slope_or_rate", "rms_residual",
                           "t_min", "t_max"]
        assert rows[1][0] == "standard"
        assert float(rows[1][2]) == pytest.approx(-1.8, abs=0.05)


class TestFigure1Command:
    def test_emits_files_and_fit_values(self, tmp_path, capsys):
        outdir = tmp_path / "fig"
        assert run_cli(["figure1", "--outdir", str(outdir)]) == 0
        capsys.readouterr()
        for name in ("standard", "rapid_aging", "weighted_damping"):
            assert (outdir / f"{name}.csv").exists()
        with open(outdir / "figure1_fits.csv", newline="") as fh:
            fits = {r["scenario"]: r for r in csv.DictReader(fh)}
        assert float(fits["standard"]["slope_or_rate"]) == pytest.approx(
            -1.8, abs=0.05)
        assert float(fits["rapid_aging"]["slope_or_rate"]) == pytest.approx(
            -1.44, abs=0.05)
        assert fits["rapid_aging"]["mode"] == "semilog"

    def test_deterministic_reruns(self, tmp_path, capsys):
        a = tmp_path / "a"
        b = tmp_path / "b"
        assert run_cli(["figure1", "--outdir", str(a)]) == 0
        assert run_cli(["figure1", "--outdir", str(b)]) == 0
        capsys.readouterr()
        for name in ("standard", "rapid_aging", "weighted_damping",
                     "figure1_fits"):
            assert (a / f"{name}.csv").read_bytes() == \
                (b / f"{name}.csv").read_bytes()

    def test_scenario_list(self):
        labels = [s.label for s in figure1_scenarios()]
        assert labels == ["standard", "rapid_aging", "weighted_damping"]
        assert all(s.alpha == 0.8 for s in figure1_scenarios())


class TestSelftestCommand:
    def test_subset_runs_clean(self, capsys):
        from subjtime import selftest
        rc = selftest.run(names=["kernel positivity+monotone",
                                 "validation idempotent"])
        out = capsys.readouterr().out
        assert rc == 0
        assert out.count("[PASS]") == 2

    def test_failure_is_nonzero(self, capsys, monkeypatch):
        from subjtime import selftest
        monkeypatch.setattr(selftest, "CHECKS",
                            [("always fails", lambda: (1.0, 0.5))])
        assert selftest.run() == 1
        assert "[FAIL]" in capsys.readouterr().out
