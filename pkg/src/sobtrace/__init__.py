"""Explicit trace norms of Sobolev spaces on increasing node sequences.

For ``r = 1, 2`` the package evaluates explicit equivalent norms of the
traces of ``W^r_p`` and ``L^r_p`` and builds the spline interpolators
Phi1 (piecewise linear) and Phi2 (C^1 cubic). The ``oracle`` module gives
the true trace norms by direct minimization for comparison.
"""

from .divdiff import DividedDifferenceTable, divided_differences
from .energy import QuadratureError, QuadratureSpec, sobolev_seminorm_p, w_norm_p
from .grid import NodeSequence, NodeValidationError, generate_nodes, make_nodes
from .interpolators import (phi1, phi1_energy_p, phi2, phi2_energy_p,
                            phi2_kernel_integral, phi2_stencils)
from .norms import (NormParams, TraceData, eq_norm_L, eq_norm_L_p, eq_norm_W,
                    eq_norm_W_p, simp_norm_W, simp_norm_W_p)
from .oracle import OracleResult, natural_cubic_spline, oracle_L, oracle_W
from .pwpoly import PiecewisePolynomial, evaluate, smoothness_defect

__version__ = "0.1.0"

__all__ = [
    "DividedDifferenceTable", "divided_differences",
    "QuadratureError", "QuadratureSpec", "sobolev_seminorm_p", "w_norm_p",
    "NodeSequence", "NodeValidationError", "generate_nodes", "make_nodes",
    "phi1", "phi1_energy_p", "phi2", "phi2_energy_p", "phi2_kernel_integral",
    "phi2_stencils",
    "NormParams", "TraceData", "eq_norm_L", "eq_norm_L_p", "eq_norm_W",
    "eq_norm_W_p", "simp_norm_W", "simp_norm_W_p",
    "OracleResult", "natural_cubic_spline", "oracle_L", "oracle_W",
    "PiecewisePolynomial", "evaluate", "smoothness_defect",
]
