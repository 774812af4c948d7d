import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from renyi_maxent import cli

# frozen regression value, produced by this tool and confirmed with an mpmath root
THRESHOLD_D2 = 2.8759719


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def load_csv(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    header = raw.split(b"\n", 1)[0].decode()
    return raw, header, np.loadtxt(path, delimiter=",", skiprows=1)


class TestFigure:
    @pytest.mark.parametrize("which", [1, 2])
    def test_header_and_samples(self, tmp_path, which):
        out = tmp_path / "fig.csv"
        assert cli.main(["figure", str(which), "--out", str(out)]) == 0
        raw, header, data = load_csv(out)
        assert header == "x,f_maxent,u_zkb"
        assert data.shape == (1001, 3)
        assert b"\r" not in raw
        assert np.allclose(np.diff(data[:, 0]), data[1, 0] - data[0, 0])

    def test_figure_one_orderings(self, tmp_path):
        out = tmp_path / "fig1.csv"
        cli.main(["figure", "1", "--out", str(out)])
        _, _, data = load_csv(out)
        x, f, u = data.T
        assert f.max() > u.max()
        dx = x[1] - x[0]
        for col in (f, u):
            assert np.all(col >= 0)
            assert abs(col.sum() * dx - 1) <= 1e-3

    def test_figure_two_orderings(self, tmp_path):
        out = tmp_path / "fig2.csv"
        cli.main(["figure", "2", "--out", str(out)])
        _, _, data = load_csv(out)
        x, f, u = data.T
        assert u.max() > f.max()
        # the window is exactly the larger support
        assert max(np.flatnonzero(f > 0).max(), np.flatnonzero(u > 0).max()) >= 999
        dx = x[1] - x[0]
        for col in (f, u):
            assert abs(col.sum() * dx - 1) <= 1e-3

    def test_byte_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        cli.main(["figure", "1", "--out", str(a)])
        cli.main(["figure", "1", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_unwritable_path(self, tmp_path, capsys):
        code, _, err = run(["figure", "1", "--out", str(tmp_path / "missing" / "f.csv")], capsys)
        assert code == 1 and "I/O error" in err

    def test_bad_figure(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["figure", "3"])
        assert info.value.code == 2


class TestProfile:
    def test_csv_d1(self, capsys):
        code, out, _ = run(["profile", "--alpha", "0.8", "--grid-n", "101"], capsys)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "x,f_maxent" and len(lines) == 102
        assert all(len(field) == len("%.12e" % 1.0) or field.startswith("-") for field in lines[1].split(","))

    def test_csv_radial(self, capsys):
        code, out, _ = run(["profile", "--alpha", "2.0", "--dim", "3", "--grid-n", "64"], capsys)
        assert out.splitlines()[0] == "r,f_maxent"

    def test_json(self, capsys):
        code, out, _ = run(["profile", "--alpha", "0.75", "--format", "json"], capsys)
        payload = json.loads(out)
        assert payload["constants"]["beta"] == pytest.approx(0.2)
        assert payload["support_radius"] == "inf"
        assert list(payload)[:3] == ["alpha", "d", "regime"]

    def test_out_of_window(self, capsys):
        code, _, err = run(["profile", "--alpha", "0.2"], capsys)
        assert code == 2
        assert "valid window" in err

    def test_small_grid(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["profile", "--alpha", "0.8", "--grid-n", "10"])
        assert info.value.code == 2

    def test_alpha_required(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["profile"])
        assert info.value.code == 2


class TestThreshold:
    def test_reference_value(self, capsys):
        code, out, _ = run(["threshold", "--dim", "1"], capsys)
        payload = json.loads(out)
        assert code == 0
        assert 1.8218 <= payload["alpha_th"] <= 1.8318, payload

    def test_keys_and_determinism(self, capsys):
        _, first, _ = run(["threshold", "--dim", "1"], capsys)
        _, second, _ = run(["threshold", "--dim", "1"], capsys)
        assert first == second
        assert list(json.loads(first)) == ["d", "alpha_th", "iterations", "companion_supnorm_root"]

    def test_two_dimensions_golden(self, capsys):
        _, out, _ = run(["threshold", "--dim", "2"], capsys)
        value = json.loads(out)["alpha_th"]
        assert 1 < value < 4
        assert value == pytest.approx(THRESHOLD_D2, abs=1e-6)

    def test_three_dimensions_bracket_failure(self, capsys):
        code, _, err = run(["threshold", "--dim", "3"], capsys)
        assert code == 2 and "no sign change" in err


class TestReport:
    def test_report(self, capsys):
        code, out, _ = run(["report", "--alpha", "2.0", "--mu2", "1.5"], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["mu2"] == 1.5
        assert math.isfinite(rep["H_alpha"])


class TestVerify:
    def test_specfun_suite(self, capsys):
        code, out, _ = run(["verify", "--suite", "specfun"], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["ok"] and list(rep["suites"]) == ["specfun"]
        names = [c["identity_name"] for c in rep["suites"]["specfun"]["checks"]]
        for key in ("A.9", "A.11", "A.12", "A.14"):
            assert any(n.startswith(key) for n in names)
        a8 = [c for c in rep["suites"]["specfun"]["checks"] if c["identity_name"] == "A.8 printed exponent"][0]
        assert a8["soft"] and not a8["pass"]

    def test_comma_separated(self, capsys):
        code, out, _ = run(["verify", "--suite", "specfun,variational", "--seed", "1"], capsys)
        rep = json.loads(out)
        assert list(rep["suites"]) == ["specfun", "variational"] and rep["seed"] == 1

    def test_bad_suite(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["verify", "--suite", "nope"])
        assert info.value.code == 2
        assert "unknown suite" in capsys.readouterr().err

    def test_full_run_exit_zero(self, tmp_path):
        out = tmp_path / "verify.json"
        proc = subprocess.run(
            [sys.executable, "-m", "renyi_maxent.cli", "verify", "--seed", "42", "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        rep = json.loads(out.read_text())
        assert rep["ok"] and set(rep["suites"]) == set(cli.SUITES)
        assert sum(s["n_warnings"] for s in rep["suites"].values()) > 0

    def test_format_mismatch(self):
        with pytest.raises(SystemExit) as info:
            cli.main(["verify", "--format", "csv"])
        assert info.value.code == 2

    def test_console_script(self):
        exe = shutil.which("renyi-maxent")
        if exe is None:
            pytest.skip("console script not installed")
        proc = subprocess.run([exe, "threshold", "--dim", "2"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["d"] == 2
