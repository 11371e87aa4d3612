from __future__ import annotations

import json

import numpy as np
import pytest

from sobtrace.experiments import (CSV_FIELDS, RATIO_FIELDS, STANDARD_CORPUS, UNDEFINED,
                                  counterexample_scenario, expand_cases, large_interval_check,
                                  large_interval_sweep, run_sweep)
from sobtrace.grid import generate_nodes
from sobtrace.norms import TraceData

SMALL = {
    "generators": [{"kind": "random_gaps", "params": {"lo": 0.5, "hi": 1.5, "count": 5}}],
    "seeds": [0, 1],
    "norms": [{"r": 1, "p": 2.0}, {"r": 2, "p": 1.5}],
    "grid_per_gap": 16,
}


def test_standard_corpus_size_and_step_bound():
    cases = expand_cases(STANDARD_CORPUS)
    assert len(cases) == 168
    assert max(c["nodes"].max_step() for c in cases) <= 2.0


def test_worked_record():
    report = run_sweep({"cases": [{"nodes": [0, 1, 2], "values": [0, 1, 0]}],
                        "norms": [{"r": 2, "p": 2.0}]})
    (rec,) = report.records
    assert rec.eq_L_p == 2.0
    assert rec.oracle_L_p == pytest.approx(6.0, rel=1e-12)
    assert rec.phi_energy_p == pytest.approx(32.0)
    assert rec.oracle_L_method == "exact_natural_spline"


def test_zero_data_ratios_undefined():
    config = dict(SMALL, values="zero")
    report = run_sweep(config)
    for rec in report.records:
        assert rec.eq_L_p == 0.0 and rec.oracle_W_p == 0.0
        assert all(v is None for v in rec.ratios.values())
    text = report.to_csv()
    assert "nan" not in text.lower()
    assert text.splitlines()[1].endswith(",".join([UNDEFINED] * len(RATIO_FIELDS)))
    agg = report.aggregate()
    assert agg["ratios"]["phi_over_oracle_L"]["undefined"] == len(report.records)


def test_report_formats():
    report = run_sweep(SMALL)
    lines = report.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_FIELDS)
    assert len(lines) == 1 + 4
    doc = json.loads(report.to_json())
    assert doc["aggregate"]["cases"] == 4
    assert doc["aggregate"]["unconverged"] == 0
    for name in RATIO_FIELDS:
        if name == "eq_W_over_simp_W":
            continue
        stats = doc["aggregate"]["ratios"][name]
        assert 0 < stats["min"] <= stats["mean"] <= stats["max"]


def test_sweep_deterministic():
    assert run_sweep(SMALL).to_csv() == run_sweep(SMALL).to_csv()


def test_counterexample_control():
    a = counterexample_scenario(0.5)
    b = counterexample_scenario(0.25)
    assert a["converged"] and b["converged"]
    assert np.isfinite(a["ratio"]) and a["ratio"] > 0
    assert 0.5 < b["ratio"] / a["ratio"] < 2.0


def test_counterexample_zero():
    rec = counterexample_scenario(0.5, amplitude=0.0)
    assert rec["lhs_p"] == 0.0 and rec["rhs_p"] == 0.0 and rec["ratio"] is None


@pytest.mark.parametrize("h, m", [(0.0, 4), (1.5, 4), (0.5, 1)])
def test_counterexample_preconditions(h, m):
    with pytest.raises(ValueError):
        counterexample_scenario(h, m)


def test_large_interval_examples():
    nodes = generate_nodes("uniform", {"step": 0.5, "count": 25})
    ones = large_interval_check(1.0, TraceData(nodes, np.ones(25)), 2.0)
    assert ones["oracle_W_p"] > 0 and ones["simp_W_p"] > 0 and np.isfinite(ones["ratio"])
    aff = TraceData(nodes, 0.5 * nodes.nodes + 1.0)
    rec = large_interval_check(1.0, aff, 2.0)
    assert np.isfinite(rec["ratio"]) and rec["ratio"] > 0


def test_large_interval_preconditions():
    short = generate_nodes("uniform", {"step": 0.5, "count": 10})
    with pytest.raises(ValueError):
        large_interval_check(1.0, TraceData(short, np.ones(10)), 2.0)
    wide = generate_nodes("uniform", {"step": 2.0, "count": 10})
    with pytest.raises(ValueError):
        large_interval_check(1.0, TraceData(wide, np.ones(10)), 2.0)


@pytest.mark.parametrize("p", [1.5, 2.0])
def test_large_interval_sweep(p):
    out = large_interval_sweep(1.0, p, range(20))
    assert len(out["records"]) == 20
    assert all(rec["converged"] for rec in out["records"])
    assert 0 < out["lower"] <= out["upper"]
    assert out["spread"] < 1e3
