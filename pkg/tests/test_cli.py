from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from sobtrace.cli import main
from sobtrace.pwpoly import PiecewisePolynomial


@pytest.fixture
def parabola(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("lambda,value\n0,0\n1,1\n3,9\n")
    return path


@pytest.fixture
def worked_csv(tmp_path):
    path = tmp_path / "worked.csv"
    path.write_text("lambda,value\n0,0\n1,1\n2,0\n")
    return path


def test_norm_golden(parabola, capsys):
    assert main(["norm", "--which", "eq-l", "--r", "1", "--p", "2", str(parabola)]) == 0
    assert capsys.readouterr().out == "value,power\n5.7445626465380286,33\n"


@pytest.mark.parametrize("which, power", [("eq-l", 2.0), ("eq-w", 10.0), ("simp-w", 4.0)])
def test_norm_json(worked_csv, capsys, which, power):
    assert main(["norm", "--which", which, "--format", "json", str(worked_csv)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["power"] == pytest.approx(power)
    assert doc["value"] == pytest.approx(power ** 0.5)


def test_simp_needs_r2(worked_csv):
    assert main(["norm", "--which", "simp-w", "--r", "1", str(worked_csv)]) == 2


@pytest.mark.parametrize("method", ["phi1", "phi2"])
def test_interp_roundtrip(tmp_path, method):
    data = tmp_path / "d.csv"
    data.write_text("lambda,value\n0,0.5\n1,-1.25\n2,3\n3,0.125\n")
    out = tmp_path / "s.csv"
    assert main(["interp", "--method", method, "--samples", "7", "-o", str(out), str(data)]) == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    at_nodes = rows[::2]
    np.testing.assert_allclose(at_nodes[:, 0], [0, 1, 2, 3])
    np.testing.assert_allclose(at_nodes[:, 1], [0.5, -1.25, 3, 0.125], rtol=1e-10)
    pieces = json.loads((tmp_path / "s.pieces.json").read_text())
    assert pieces["method"] == method
    s = PiecewisePolynomial.from_dict(pieces)
    np.testing.assert_allclose(s(rows[:, 0]), rows[:, 1], rtol=1e-15)


def test_interp_deterministic(worked_csv, capsys):
    main(["interp", "--samples", "11", str(worked_csv)])
    first = capsys.readouterr().out
    main(["interp", "--samples", "11", str(worked_csv)])
    assert capsys.readouterr().out == first
    assert first.splitlines()[4] == "0.60000000000000009,0.6160000000000001"


def test_oracle_json(worked_csv, capsys):
    assert main(["oracle", "--r", "2", "--p", "2", str(worked_csv)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "exact_natural_spline"
    assert doc["value_p"] == pytest.approx(6.0)
    assert main(["oracle", "--r", "2", "--p", "1.5", "--grid", "16", "--space", "W",
                 str(worked_csv)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "irls_grid" and doc["converged"]


def test_oracle_nonconvergence(worked_csv, monkeypatch):
    import sobtrace.oracle as oracle
    solver = oracle.irls_minimize
    monkeypatch.setattr(oracle, "irls_minimize",
                        lambda problem, p, tol: solver(problem, p, tol, max_iter=1))
    assert main(["oracle", "--r", "2", "--p", "1.5", "--grid", "16", str(worked_csv)]) == 3


def test_sweep(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({"cases": [{"nodes": [0, 1, 2], "values": [0, 1, 0]}],
                                  "norms": [{"r": 2, "p": 2.0}]}))
    out = tmp_path / "report.csv"
    assert main(["sweep", str(config), "-o", str(out)]) == 0
    assert out.read_text().startswith("label,kind,N")
    agg = json.loads((tmp_path / "report.json").read_text())
    assert agg["aggregate"]["cases"] == 1


def test_counterexample(capsys):
    assert main(["counterexample", "--h", "0.5", "--p", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ratio"] == pytest.approx(doc["lhs_p"] / doc["rhs_p"])
    assert main(["counterexample", "--h", "2"]) == 2


@pytest.mark.parametrize("content, fragment", [
    ("", "empty file"),
    ("x,y\n0,1\n", "line 1"),
    ("lambda,value\n0,0\n1,oops\n", "line 3"),
    ("lambda,value\n0,0\n1\n", "line 3"),
    ("lambda,value\n0,0\n2,1\n1,1\n", "line 4"),
    ("lambda,value\n", "no data rows"),
    ("lambda,value\n0,1\n", "at least 2 nodes"),
])
def test_malformed_input(tmp_path, capsys, content, fragment):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    assert main(["norm", str(path)]) == 2
    assert fragment in capsys.readouterr().err


def test_missing_file_and_bad_flags(tmp_path):
    assert main(["norm", str(tmp_path / "nope.csv")]) == 2
    assert main(["norm", "--p", "0.5", str(tmp_path / "nope.csv")]) == 2
    assert main(["frobnicate"]) == 2


def test_module_entry_point(worked_csv):
    out = subprocess.run([sys.executable, "-m", "sobtrace", "norm", str(worked_csv)],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "value,power\n1.4142135623730951,2\n"
