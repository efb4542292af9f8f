import json
import subprocess
import sys
from pathlib import Path

import pytest

CMD = [sys.executable, "-m", "wtan"]


def run_cli(*args, env_extra=None):
    import os
    env = os.environ.copy()
    if env_extra:
        env.update(env_extra)
    return subprocess.run(CMD + list(args), capture_output=True, text=True,
                          env=env)


class TestEval:
    def test_special_value(self):
        cp = run_cli("eval", "--x", "0.7853981633974483", "--branch", "1")
        assert cp.returncode == 0, cp.stderr
        assert "0.785398163397" in cp.stdout

    def test_unit_argument(self):
        cp = run_cli("eval", "--x", "1", "--branch", "1")
        assert cp.returncode == 0
        assert "0.860333589019" in cp.stdout

    def test_branch_point_proximity_is_domain_error(self):
        cp = run_cli("eval", "--z", "-1.650611,2.059981", "--branch", "1",
                     "--scheme", "finite-cuts")
        assert cp.returncode == 2
        assert "branch point" in cp.stderr.lower()

    def test_negative_arguments_in_space_form(self):
        cp = run_cli("eval", "--x", "-1", "--branch", "1")
        assert cp.returncode == 0
        assert "2.79838604578" in cp.stdout
        cp = run_cli("grid", "--range", "-2:-1", "--points", "3")
        assert cp.returncode == 0
        assert cp.stdout.splitlines()[1].startswith("-2,")
        cp = run_cli("qm", "--width", "1", "--lambda", "-1e8", "--levels", "3")
        assert cp.returncode == 0

    def test_complex_eval(self):
        cp = run_cli("eval", "--z", "2,2", "--branch", "1",
                     "--scheme", "finite-cuts", "--format", "json")
        assert cp.returncode == 0, cp.stderr
        rec = json.loads(cp.stdout)[0]
        assert rec["y_re"] == pytest.approx(1.2094213503, abs=1e-9)
        assert rec["y_im"] == pytest.approx(0.2211773875, abs=1e-9)
        assert rec["scheme"] == "finite-cuts"

    def test_derivative_flag(self):
        cp = run_cli("eval", "--x", "2", "--branch", "1", "--derivative",
                     "--format", "json")
        rec = json.loads(cp.stdout)[0]
        assert "dy_re" in rec and "dy_im" in rec

    def test_check_flag(self):
        cp = run_cli("eval", "--x", "5", "--branch", "2", "--check")
        assert cp.returncode == 0
        assert "ok" in cp.stdout

    def test_zero_needs_side(self):
        cp = run_cli("eval", "--x", "0", "--branch", "1")
        assert cp.returncode == 2
        cp = run_cli("eval", "--x", "0", "--branch", "1", "--side", "neg")
        assert cp.returncode == 0
        assert "3.14159265359" in cp.stdout

    def test_usage_error(self):
        cp = run_cli("eval", "--branch", "1")
        assert cp.returncode == 2


class TestTables:
    def test_series_row_values(self):
        cp = run_cli("series", "--kind", "large", "--order", "4")
        lines = cp.stdout.strip().splitlines()
        assert lines[0] == "k,coefficient,radius_estimate"
        coeffs = [float(line.split(",")[1]) for line in lines[1:]]
        assert coeffs[0] == 1 and coeffs[1] == -1 and coeffs[2] == 1
        assert coeffs[3] == pytest.approx(-0.177532966576, abs=1e-10)
        assert coeffs[4] == pytest.approx(-2.289868133696, abs=1e-10)

    def test_cheb_table_layout(self):
        cp = run_cli("cheb", "--split", "3.5", "--order", "15")
        lines = cp.stdout.strip().splitlines()
        assert lines[0] == "k,alpha,beta,gamma"
        assert len(lines) == 16
        row0 = lines[1].split(",")
        assert float(row0[1]) == pytest.approx(0.80600536, abs=5e-8)

    def test_branch_points_table(self):
        cp = run_cli("branch-points", "--count", "6")
        lines = cp.stdout.strip().splitlines()
        assert lines[0] == "n,x_re,x_im,abs_x,y_re,y_im"
        last = lines[6].split(",")
        assert float(last[1]) == pytest.approx(-2.642706, abs=1e-6)
        assert float(last[2]) == pytest.approx(17.99809, abs=1e-5)

    def test_qm_spectrum(self):
        cp = run_cli("qm", "--width", "1", "--lambda", "1e-8", "--levels", "4")
        lines = cp.stdout.strip().splitlines()
        assert lines[0] == "index,parity,branch,k,E"
        first = lines[1].split(",")
        assert first[1] == "even"
        assert float(first[3]) == pytest.approx(3.14159265, abs=1e-6)

    def test_qm_wavefunction(self):
        cp = run_cli("qm", "--width", "1", "--lambda", "0.5",
                     "--levels", "2", "--wavefunction", "0", "--points", "11")
        lines = cp.stdout.strip().splitlines()
        assert lines[0] == "xi,psi"
        assert len(lines) == 12

    def test_grid(self):
        cp = run_cli("grid", "--branch", "1", "--range", "0.5:2.0",
                     "--points", "4")
        lines = cp.stdout.strip().splitlines()
        assert lines[0] == "x,y"
        assert len(lines) == 5
        x, y = lines[1].split(",")
        assert float(y) == pytest.approx(0.6532711871, abs=1e-9)

    def test_dispersion(self):
        cp = run_cli("dispersion", "--at", "5,0")
        lines = cp.stdout.strip().splitlines()
        rec = dict(zip(lines[0].split(","), lines[1].split(",")))
        assert float(rec["abs_diff"]) < 1e-4


class TestDeterminism:
    @pytest.mark.parametrize("args", [
        ("series", "--kind", "small", "--order", "12"),
        ("cheb", "--order", "8"),
        ("branch-points", "--count", "3"),
        ("eval", "--x", "2.5", "--branch", "2", "--format", "json"),
        ("qm", "--width", "3.14159", "--lambda", "-0.7", "--levels", "5"),
    ])
    def test_byte_identical_repeats(self, args):
        a = run_cli(*args)
        b = run_cli(*args)
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout

    def test_file_output(self, tmp_path: Path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        run_cli("series", "--kind", "large", "--order", "6",
                "--output", str(out1))
        run_cli("series", "--kind", "large", "--order", "6",
                "--output", str(out2))
        assert out1.read_bytes() == out2.read_bytes()

    def test_precision_env_override(self):
        cp = run_cli("eval", "--x", "1", "--branch", "1",
                     env_extra={"WT_PRECISION": "6"})
        assert "0.860334" in cp.stdout
        assert "0.860333589019" not in cp.stdout

    def test_precision_flag(self):
        cp = run_cli("eval", "--x", "1", "--branch", "1", "--precision", "15")
        assert "0.86033358901938" in cp.stdout

    def test_json_schema(self):
        cp = run_cli("eval", "--x", "1", "--branch", "1", "--format", "json")
        rec = json.loads(cp.stdout)[0]
        assert list(rec.keys()) == ["x_re", "x_im", "y_re", "y_im",
                                    "branch", "scheme", "residual"]


class TestIntegralsCommand:
    def test_reports_all_four_checks(self):
        cp = run_cli("integrals", "--format", "json")
        recs = json.loads(cp.stdout)
        names = {r["name"] for r in recs}
        assert names == {"definite_lnsin", "definite_catalan",
                         "indefinite_log_residual", "indefinite_logsin_residual"}
        by_name = {r["name"]: r for r in recs}
        assert abs(by_name["definite_lnsin"]["abs_error"]) < 1e-6
        assert abs(by_name["definite_catalan"]["abs_error"]) < 1e-6
