"""Explicit equivalent trace (semi)norms on finite node windows.

All sums run over the complete stencils of the window: a term indexed by
``n`` is present only when every node it references exists. The ``*_p``
functions return the raw p-th powers; the unsuffixed ones return norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divdiff import divided_differences
from .grid import NodeSequence, make_nodes

__all__ = [
    "NormParams",
    "TraceData",
    "check_exponent",
    "eq_norm_L",
    "eq_norm_L_p",
    "eq_norm_W",
    "eq_norm_W_p",
    "simp_norm_W",
    "simp_norm_W_p",
]


def check_exponent(p) -> float:
    p = float(p)
    if not (math.isfinite(p) and p >= 1.0):
        raise ValueError(f"exponent p must satisfy 1 <= p < inf, got {p!r}")
    return p


@dataclass(frozen=True)
class NormParams:
    r: int
    p: float
    K: float | None = None

    def __post_init__(self):
        if self.r not in (1, 2):
            raise ValueError(f"derivative order r must be 1 or 2, got {self.r!r}")
        object.__setattr__(self, "p", check_exponent(self.p))
        if self.K is not None:
            K = float(self.K)
            if not (math.isfinite(K) and K > 0):
                raise ValueError(f"step bound K must be positive, got {self.K!r}")
            object.__setattr__(self, "K", K)


@dataclass(frozen=True, eq=False)
class TraceData:
    """Values ``f(lambda_n)`` on a node window."""

    nodes: NodeSequence
    values: np.ndarray

    def __post_init__(self):
        nodes = self.nodes if isinstance(self.nodes, NodeSequence) else make_nodes(self.nodes)
        values = np.array(self.values, dtype=float).ravel()
        if values.shape[0] != len(nodes):
            raise ValueError(f"{values.shape[0]} values for {len(nodes)} nodes")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_arrays(cls, nodes, values) -> "TraceData":
        return cls(make_nodes(nodes), values)

    @property
    def N(self) -> int:
        return self.nodes.N

    def scale(self) -> float:
        """Largest absolute value (at least 1), for relative tolerances."""
        return max(1.0, float(np.max(np.abs(self.values))))


def _require_stencil(data: TraceData, r: int):
    if data.N < r:
        raise ValueError(f"need at least {r + 1} nodes for r={r}, got {len(data.nodes)}")


def _check_K(data: TraceData, params: NormParams):
    if params.K is not None and data.nodes.max_step() > params.K:
        raise ValueError(
            f"max step {data.nodes.max_step()!r} exceeds step bound K={params.K!r}")


def eq_norm_L_p(data: TraceData, params: NormParams) -> float:
    """``sum_n (lambda_{n+r} - lambda_n) |f(lambda_n, ..., lambda_{n+r})|^p``."""
    r, p = params.r, params.p
    _require_stencil(data, r)
    x = data.nodes.nodes
    dd = divided_differences(data.nodes, data.values, r)[r]
    return math.fsum((x[r:] - x[:-r]) * np.abs(dd) ** p)


def eq_norm_W_p(data: TraceData, params: NormParams) -> float:
    r, p = params.r, params.p
    _require_stencil(data, r)
    _check_K(data, params)
    x = data.nodes.nodes
    table = divided_differences(data.nodes, data.values, r)
    width = x[r:] - x[:-r]
    total = eq_norm_L_p(data, params)
    for j in range(r):
        # f(lambda_n..lambda_{n+j}) for the complete stencils n = 0..N-r
        dd = table[j][: width.shape[0]]
        total += math.fsum(width ** (j * p + 1) * np.abs(dd) ** p)
    return total


def simp_norm_W_p(data: TraceData, p: float, boundary: str = "reflect") -> float:
    """Simplified W-norm power for ``r = 2``.

    The value weight ``lambda_{n+1} - lambda_{n-1}`` needs both neighbours.
    ``boundary="reflect"`` uses ``2 h_0`` and ``2 h_{N-1}`` at the window
    edges; ``boundary="none"`` drops the two edge terms.
    """
    p = check_exponent(p)
    params = NormParams(2, p)
    _require_stencil(data, 2)
    x, f = data.nodes.nodes, data.values
    weights = np.empty_like(x)
    weights[1:-1] = x[2:] - x[:-2]
    if boundary == "reflect":
        h = data.nodes.steps
        weights[0], weights[-1] = 2 * h[0], 2 * h[-1]
    elif boundary == "none":
        weights[0] = weights[-1] = 0.0
    else:
        raise ValueError(f"unknown boundary convention {boundary!r}")
    return eq_norm_L_p(data, params) + math.fsum(weights * np.abs(f) ** p)


def eq_norm_L(data: TraceData, params: NormParams) -> float:
    return eq_norm_L_p(data, params) ** (1.0 / params.p)


def eq_norm_W(data: TraceData, params: NormParams) -> float:
    return eq_norm_W_p(data, params) ** (1.0 / params.p)


def simp_norm_W(data: TraceData, p: float, boundary: str = "reflect") -> float:
    return simp_norm_W_p(data, p, boundary) ** (1.0 / check_exponent(p))
