"""Seeded sweeps measuring empirical equivalence constants.

A sweep configuration is a plain dict (usually loaded from JSON)::

    {
      "generators": [{"kind": "random_gaps",
                      "params": {"lo": 0.25, "hi": 2.0, "count": 6}}],
      "seeds": [0, 1, 2],
      "norms": [{"r": 2, "p": 2.0}],
      "grid_per_gap": 32,
      "tol": 1e-8,
      "values": "random",
      "cases": [{"label": "worked", "nodes": [0, 1, 2], "values": [0, 1, 0]}]
    }

``values`` selects the data drawn for generated nodes: ``"random"``
(uniform on [-1, 1]), ``"zero"`` or ``"ones"``. Explicit ``cases`` are run
for every entry of ``norms``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .divdiff import divided_differences
from .energy import sobolev_seminorm_p, w_norm_p
from .grid import NodeSequence, generate_nodes, make_nodes
from .interpolators import phi1, phi1_energy_p, phi2, phi2_energy_p
from .norms import NormParams, TraceData, eq_norm_L_p, eq_norm_W_p, simp_norm_W_p
from .oracle import oracle_L, oracle_W
from .pwpoly import PiecewisePolynomial, hermite_cubic

__all__ = [
    "UNDEFINED",
    "CaseRecord",
    "SweepReport",
    "STANDARD_CORPUS",
    "expand_cases",
    "run_case",
    "run_sweep",
    "counterexample_scenario",
    "large_interval_check",
    "large_interval_sweep",
    "random_c1_spline",
    "df_lower_bound_pairs",
    "friedrichs_bound_pairs",
]

log = logging.getLogger(__name__)

UNDEFINED = "undefined"

RATIO_FIELDS = (
    "oracle_L_over_eq_L",
    "phi_over_oracle_L",
    "oracle_W_over_eq_W",
    "eq_W_over_simp_W",
    "phi_W_over_oracle_W",
)

CSV_FIELDS = (
    "label", "kind", "N", "seed", "r", "p", "K",
    "eq_L_p", "eq_W_p", "simp_W_p", "phi_energy_p", "phi_W_energy_p",
    "oracle_L_p", "oracle_L_method", "oracle_W_p", "converged",
) + RATIO_FIELDS

# Fixed corpus with steps bounded by K = 2, used by the acceptance suite.
STANDARD_CORPUS = {
    "generators": [
        {"kind": "random_gaps", "params": {"lo": 0.25, "hi": 2.0, "count": 5}},
        {"kind": "random_gaps", "params": {"lo": 0.5, "hi": 1.5, "count": 8}},
        {"kind": "geometric", "params": {"first_step": 0.4, "ratio": 1.3, "count": 6}},
        {"kind": "uniform", "params": {"step": 0.5, "count": 7}},
        {"kind": "clustering", "params": {"h": 0.5, "m": 2}},
    ],
    "seeds": [0, 1, 2, 3],
    "norms": [
        {"r": 1, "p": 1.0}, {"r": 1, "p": 1.5}, {"r": 1, "p": 2.0}, {"r": 1, "p": 3.0},
        {"r": 2, "p": 1.0}, {"r": 2, "p": 1.5}, {"r": 2, "p": 2.0}, {"r": 2, "p": 3.0},
    ],
    "grid_per_gap": 32,
    "tol": 1e-8,
    "values": "random",
    "cases": [
        {"label": "worked", "nodes": [0.0, 1.0, 2.0], "values": [0.0, 1.0, 0.0]},
    ],
}


def _ratio(num, den):
    if num is None or den is None or den == 0.0:
        return None
    return num / den


@dataclass
class CaseRecord:
    label: str
    kind: str
    N: int
    seed: int | None
    r: int
    p: float
    K: float
    eq_L_p: float
    eq_W_p: float
    simp_W_p: float | None
    phi_energy_p: float
    phi_W_energy_p: float
    oracle_L_p: float
    oracle_L_method: str
    oracle_W_p: float
    converged: bool
    ratios: dict = field(default_factory=dict)

    def row(self) -> dict:
        out = {k: getattr(self, k) for k in CSV_FIELDS if k not in RATIO_FIELDS}
        out.update(self.ratios)
        return out


def _fmt(v) -> str:
    if v is None:
        return UNDEFINED
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


@dataclass
class SweepReport:
    records: list
    config: dict

    def aggregate(self) -> dict:
        agg = {}
        for name in RATIO_FIELDS:
            vals = [rec.ratios[name] for rec in self.records if rec.ratios[name] is not None]
            agg[name] = {
                "min": min(vals) if vals else None,
                "max": max(vals) if vals else None,
                "mean": math.fsum(vals) / len(vals) if vals else None,
                "defined": len(vals),
                "undefined": len(self.records) - len(vals),
            }
        return {
            "cases": len(self.records),
            "unconverged": sum(not rec.converged for rec in self.records),
            "ratios": agg,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for rec in self.records:
            row = rec.row()
            writer.writerow([_fmt(row[k]) for k in CSV_FIELDS])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"config": self.config, "aggregate": self.aggregate()},
                          indent=2, sort_keys=True) + "\n"


def _values_for(nodes: NodeSequence, mode: str, seed: int) -> np.ndarray:
    if mode == "random":
        # separate stream from the node generator
        return np.random.default_rng([seed, 1]).uniform(-1.0, 1.0, len(nodes))
    if mode == "zero":
        return np.zeros(len(nodes))
    if mode == "ones":
        return np.ones(len(nodes))
    raise ValueError(f"unknown value mode {mode!r}")


def expand_cases(config: dict) -> list[dict]:
    """Flatten a sweep config into an ordered list of case descriptions."""
    cases = []
    norms = config.get("norms", [{"r": 2, "p": 2.0}])
    mode = config.get("values", "random")
    for gen in config.get("generators", []):
        for seed in config.get("seeds", [0]):
            nodes = generate_nodes(gen["kind"], gen.get("params", {}), seed)
            values = _values_for(nodes, mode, seed)
            for nm in norms:
                cases.append(dict(label=gen["kind"], kind=gen["kind"], seed=seed,
                                  nodes=nodes, values=values, r=nm["r"], p=nm["p"]))
    for explicit in config.get("cases", []):
        nodes = make_nodes(explicit["nodes"])
        for nm in norms:
            cases.append(dict(label=explicit.get("label", "explicit"), kind="explicit",
                              seed=None, nodes=nodes, values=explicit["values"],
                              r=nm["r"], p=nm["p"]))
    return cases


def run_case(data: TraceData, r: int, p: float, grid_per_gap: int = 32,
             tol: float = 1e-8, label: str = "", kind: str = "", seed=None) -> CaseRecord:
    params = NormParams(r, p)
    eq_L = eq_norm_L_p(data, params)
    eq_W = eq_norm_W_p(data, params)
    simp = simp_norm_W_p(data, p) if r == 2 else None
    if r == 1:
        spline, phi_e = phi1(data), phi1_energy_p(data, p)
    else:
        spline, phi_e = phi2(data), phi2_energy_p(data, p)
    phi_w = w_norm_p(spline, r, p)
    oL = oracle_L(data, params, grid_per_gap, tol)
    oW = oracle_W(data, params, grid_per_gap, tol)
    converged = oL.converged and oW.converged
    if not converged:
        log.warning("case %s/%s seed=%s r=%d p=%g: oracle did not converge",
                    label, kind, seed, r, p)
    ratios = {
        "oracle_L_over_eq_L": _ratio(oL.value_p, eq_L),
        "phi_over_oracle_L": _ratio(phi_e, oL.value_p),
        "oracle_W_over_eq_W": _ratio(oW.value_p, eq_W),
        "eq_W_over_simp_W": _ratio(eq_W, simp),
        "phi_W_over_oracle_W": _ratio(phi_w, oW.value_p),
    }
    return CaseRecord(label, kind, data.N, seed, r, float(p), data.nodes.max_step(),
                      eq_L, eq_W, simp, phi_e, phi_w, oL.value_p, oL.method,
                      oW.value_p, converged, ratios)


def run_sweep(config: dict) -> SweepReport:
    """Run every case of ``config`` in order; deterministic for a fixed config."""
    grid = int(config.get("grid_per_gap", 32))
    tol = float(config.get("tol", 1e-8))
    records = []
    for case in expand_cases(config):
        data = TraceData(case["nodes"], case["values"])
        records.append(run_case(data, case["r"], case["p"], grid, tol,
                                case["label"], case["kind"], case["seed"]))
    return SweepReport(records, config)


# --------------------------------------------------------- structural scenarios

def counterexample_scenario(h: float, m: int = 4, p: float = 2.0, grid_per_gap: int = 32,
                            r: int = 2, amplitude: float = 1.0, tol: float = 1e-8) -> dict:
    """Clustered nodes at +-(1+h) with data from the parabola vanishing there.

    Compares the W-trace norm power (oracle) with the candidate simplified
    norm ``eq_L_p + sum (lambda_{n+1} - lambda_{n-1}) |f(lambda_n)|^p``.
    """
    if not 0 < h <= 1:
        raise ValueError("need 0 < h <= 1")
    if m < 2:
        raise ValueError("need m >= 2")
    nodes = generate_nodes("clustering", {"h": h, "m": m})
    x = nodes.nodes
    values = amplitude * ((1 + h) ** 2 - x**2) / (h * (2 + h))
    data = TraceData(nodes, values)
    rhs = simp_norm_W_p(data, p)
    res = oracle_W(data, NormParams(r, p), grid_per_gap, tol)
    return {
        "h": h, "m": m, "p": p, "r": r, "N": data.N,
        "lhs_p": res.value_p, "rhs_p": rhs, "ratio": _ratio(res.value_p, rhs),
        "converged": res.converged,
    }


def large_interval_check(K: float, data: TraceData, p: float, grid_per_gap: int = 32,
                         tol: float = 1e-8) -> dict:
    """W-trace norm power against the simplified norm on a long window (r = 2)."""
    r = 2
    lo, hi = data.nodes.interval
    if hi - lo < (4 * r + 2) * K:
        raise ValueError(f"window length {hi - lo!r} is below (4r+2)K = {(4 * r + 2) * K!r}")
    if data.nodes.max_step() > K:
        raise ValueError(f"max step {data.nodes.max_step()!r} exceeds K={K!r}")
    oW = oracle_W(data, NormParams(r, p, K), grid_per_gap, tol)
    simp = simp_norm_W_p(data, p)
    return {"oracle_W_p": oW.value_p, "simp_W_p": simp,
            "ratio": _ratio(oW.value_p, simp), "converged": oW.converged}


def large_interval_sweep(K: float, p: float, seeds, grid_per_gap: int = 16) -> dict:
    """Empirical lower/upper constants of oracle_W_p / simp_W_p over seeded data."""
    count = int(math.ceil(10 * K / (0.25 * K))) + 2
    records = []
    for seed in seeds:
        nodes = generate_nodes("random_gaps", {"lo": 0.25 * K, "hi": K, "count": count}, seed)
        data = TraceData(nodes, _values_for(nodes, "random", seed))
        records.append(large_interval_check(K, data, p, grid_per_gap))
    ratios = [rec["ratio"] for rec in records]
    return {"lower": min(ratios), "upper": max(ratios),
            "spread": max(ratios) / min(ratios), "records": records}


# ------------------------------------------------------ inequality test helpers

def random_c1_spline(a: float, b: float, rng: np.random.Generator,
                     n_breaks: int = 6, amplitude: float = 1.0) -> PiecewisePolynomial:
    """Random C^1 piecewise cubic on [a, b] with random interior breakpoints."""
    inner = np.sort(rng.uniform(a, b, n_breaks))
    x = np.unique(np.concatenate([[a], inner, [b]]))
    y = amplitude * rng.standard_normal(x.shape[0])
    dy = amplitude * rng.standard_normal(x.shape[0]) / max(b - a, 1e-300) * 4
    return hermite_cubic(x, y, dy)


def df_lower_bound_pairs(F: PiecewisePolynomial, nodes: NodeSequence, r: int, p: float):
    """Both sides of ``|F[x_n..x_{n+r}]|^p (x_{n+r}-x_n) <= ((r-1)!)^{-p} int |F^{(r)}|^p``.

    Integrals run over ``[x_n, x_{n+r}]``; one pair per stencil.
    """
    x = nodes.nodes
    dd = divided_differences(nodes, F(x), r)[r]
    lhs = np.abs(dd) ** p * (x[r:] - x[:-r])
    const = math.factorial(r - 1) ** (-p)
    rhs = np.array([const * sobolev_seminorm_p(F.restrict(x[n], x[n + r]), r, p)
                    for n in range(x.shape[0] - r)])
    return lhs, rhs


def friedrichs_bound_pairs(F: PiecewisePolynomial, nodes: NodeSequence, r: int, p: float):
    """Both sides of the L^p bound on ``J = [x_n, x_{n+r}]``.

    ``int_J |F|^p <= (r+1)^{p-1} [ |J|^{rp} int_J |F^{(r)}|^p
    + sum_j |J|^{jp+1} |F^{(j)}(xi_j)|^p ]``, where the mean-value points
    give ``F^{(j)}(xi_j) = F[x_n..x_{n+j}] / j!``.
    """
    x = nodes.nodes
    table = divided_differences(nodes, F(x), r)
    lhs, rhs = [], []
    for n in range(x.shape[0] - r):
        piece = F.restrict(x[n], x[n + r])
        J = x[n + r] - x[n]
        total = J ** (r * p) * sobolev_seminorm_p(piece, r, p)
        for j in range(r):
            total += J ** (j * p + 1) * (abs(table[j][n]) / math.factorial(j)) ** p
        lhs.append(sobolev_seminorm_p(piece, 0, p))
        rhs.append((r + 1) ** (p - 1) * total)
    return np.array(lhs), np.array(rhs)
