import csv
import io
import json
import math
import subprocess
import sys

import pytest

from theta_agm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--format", "json", *argv)
    return code, json.loads(out)


def test_constants_json(capsys):
    code, data = run_json(capsys, "constants")
    assert code == 0
    assert data["gauss_constant"] == pytest.approx(0.834627, abs=5e-6)
    assert data["landau_plus"] == pytest.approx(0.543259, abs=5e-6)
    assert data["lemniscate_2varpi"] == pytest.approx(5.24412, abs=5e-5)
    assert data["strohmer_c3"] == pytest.approx(0.387438, abs=5e-6)
    assert data["strohmer_c4"] == pytest.approx(0.456947, abs=5e-6)
    assert data["kappa_square_2"] == pytest.approx(math.sqrt(2), abs=1e-11)
    assert data["kappa_hex_2"] == pytest.approx(2 ** (1 / 3), abs=1e-11)
    assert set(data["residuals"]) == set(data) - {"residuals"}
    assert all(r < 1e-9 for r in data["residuals"].values())


def test_constants_plain_one_per_line(capsys):
    code, out, _ = run(capsys, "constants")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 7
    assert lines[0].startswith("gauss_constant")


def test_constants_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "constants")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["name", "value", "residual"]
    assert len(rows) == 8


def test_common_flags_after_subcommand(capsys):
    code, out, _ = run(capsys, "constants", "--format", "json", "--precision", "6")
    assert json.loads(out)["gauss_constant"] == 0.834627


def test_agm(capsys):
    code, data = run_json(capsys, "agm", "2", "1.4142135", "1")
    assert code == 0
    assert data["limit"] == pytest.approx(1.198140, abs=5e-6)
    assert data["trace"] == []
    code, data = run_json(capsys, "agm", "3", "1.2599210", "1", "--trace")
    assert data["limit"] == pytest.approx(1.086519, abs=5e-6)
    assert [s["n"] for s in data["trace"]] == list(range(data["iterations"] + 1))
    assert set(data["trace"][0]) == {"n", "a", "b", "c", "gap", "gap_identity_residual"}


def test_agm_fixed_point(capsys):
    code, data = run_json(capsys, "agm", "4", "2.5", "2.5")
    assert data["iterations"] == 0 and data["limit"] == 2.5


def test_agm_trace_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "agm", "2", "3", "1", "--trace")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "a", "b", "c", "gap", "gap_identity_residual"]
    assert rows[0]["gap_identity_residual"] == ""


@pytest.mark.parametrize("argv", [["agm", "2", "-1", "1"], ["agm", "1", "2", "1"], ["theta", "1.5"],
                                  ["theta"], ["bounds", "square", "3"], ["bounds", "rect", "2"],
                                  ["frobnicate"], ["constants", "--precision", "20"]])
def test_usage_and_domain_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_odd_density_message(capsys):
    code, _, err = run(capsys, "bounds", "square", "3")
    assert "DensityError" in err


def test_theta(capsys):
    code, data = run_json(capsys, "theta", "--t", "1")
    assert data["theta4"] ** 2 == pytest.approx(0.834627, abs=5e-6)
    assert data["jacobi_residual"] < 1e-12
    code, data = run_json(capsys, "theta", "0.3")
    assert data["q"] == 0.3


def test_cubic(capsys):
    code, data = run_json(capsys, "cubic", "--t", "1")
    assert data["b"] == pytest.approx(0.920371, abs=5e-6)
    assert data["b"] == pytest.approx(data["c"], rel=1e-11)


def test_bounds(capsys):
    code, data = run_json(capsys, "bounds", "square", "2")
    assert code == 0
    assert data["A"] == pytest.approx(0.834627, abs=5e-6)
    assert data["B"] == pytest.approx(1.180340, abs=5e-6)
    assert data["method"] == "closed" and data["minimizer"] is None
    code, data = run_json(capsys, "bounds", "hex", "2")
    assert data["A"] == pytest.approx(0.920371, abs=5e-6)
    assert data["lattice"] == "hexagonal"


def test_bounds_numeric(capsys):
    code, data = run_json(capsys, "bounds", "hex", "4", "--method", "numeric", "--grid", "16")
    code2, closed = run_json(capsys, "bounds", "hex", "4")
    assert abs(data["A"] - closed["A"]) < 1e-8
    assert len(data["minimizer"]) == 2 and data["maximizer"] == [0.0, 0.0]


def test_bounds_rectangular(capsys):
    code, data = run_json(capsys, "bounds", "rect", "2", "--aspect", "2")
    assert data["aspect"] == 2.0 and data["A"] <= 1 <= data["B"]


def test_kappa_seq(capsys):
    code, data = run_json(capsys, "kappa-seq", "square", "3")
    kappas = [r["kappa"] for r in data["rows"]]
    assert kappas[0] == pytest.approx(math.sqrt(2), abs=1e-11)
    assert kappas[1] == pytest.approx(1.015052, abs=5e-6)
    assert len(kappas) == 3
    code, out, _ = run(capsys, "--format", "csv", "kappa-seq", "hex", "4")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "density", "kappa", "kappa_minus_1"]
    assert [r[1] for r in rows[1:]] == ["2", "6", "18", "54"]


def test_verify_all(capsys):
    code, data = run_json(capsys, "verify", "--suite", "all")
    assert code == 0 and data["passed"]
    assert {c["suite"] for c in data["checks"]} == {"theta", "cubic", "agm", "lattice", "gabor"}


def test_verify_csv_has_header(capsys):
    code, out, _ = run(capsys, "--format", "csv", "verify", "--suite", "theta")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["suite", "name", "residual", "tol", "passed"]
    assert all(r[4] == "true" for r in rows[1:])


def test_verify_failure_exit_code(capsys, monkeypatch):
    from theta_agm import verify
    monkeypatch.setattr(verify, "run_suite", lambda name, ctl=None: [verify.Check("forced", "theta", 1.0, 0.0)])
    code, out, _ = run(capsys, "verify")
    assert code == 1
    assert "FAIL" in out


def test_roots_named(capsys):
    code, data = run_json(capsys, "roots", "A2")
    assert code == 0
    assert data["count"] == 6 and data["passed"] and data["contained"]
    assert data["host_lattice"] == {"kind": "hexagonal", "density": 1.0}
    code, data = run_json(capsys, "roots", "G2")
    assert data["count"] == 12 and data["passed"]


def test_roots_check_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([[1, 0]]))
    code, data = run_json(capsys, "roots", "--check", str(bad))
    assert code == 1
    assert data["axioms"]["ii"] is False and "ii" in data["failed"]
    good = tmp_path / "good.json"
    good.write_text(json.dumps([[1, 0], [-1, 0], [0, 1], [0, -1]]))
    code, data = run_json(capsys, "roots", "--check", str(good))
    assert code == 0 and data["contained"] is None


def test_roots_check_malformed(capsys, tmp_path):
    f = tmp_path / "x.json"
    f.write_text('{"not": "a list"}')
    code, _, err = run(capsys, "roots", "--check", str(f))
    assert code == 2


def test_csv_quoting(capsys):
    code, out, _ = run(capsys, "--format", "csv", "verify", "--suite", "cubic")
    rows = list(csv.reader(io.StringIO(out)))
    # names containing commas survive the round trip
    names = [r[1] for r in rows[1:]]
    assert any("," in n for n in names)
    assert all(len(r) == 5 for r in rows)


def test_tol_env(capsys, monkeypatch):
    monkeypatch.setenv("THETA_AGM_TOL", "1e-8")
    code, data = run_json(capsys, "theta", "0.5")
    assert code == 0
    monkeypatch.setenv("THETA_AGM_TOL", "zero")
    code, _, err = run(capsys, "theta", "0.5")
    assert code == 2


def test_tol_flag_loosens_agm(capsys):
    code, tight = run_json(capsys, "agm", "2", "100", "1")
    code, loose = run_json(capsys, "agm", "2", "100", "1", "--tol", "1e-3")
    assert loose["iterations"] < tight["iterations"]


def test_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "theta_agm", "--format", "json", "bounds", "square", "2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["A"] == pytest.approx(0.834627, abs=5e-6)
