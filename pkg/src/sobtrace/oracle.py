"""Trace (semi)norms by direct minimization over interpolating extensions.

Three routes:

``exact_linear``
    r = 1, any p: the affine interpolant minimizes ``int |F'|^p`` gap by gap,
    so the infimum is the closed-form Phi1 energy.
``exact_natural_spline``
    r = 2, p = 2: the natural cubic spline (moments from a tridiagonal
    system); its energy is integrated exactly from the piecewise linear F''.
``irls_grid``
    any r, p: grid values with the data pinned at the nodes, finite
    differences for F^{(r)}, and iteratively reweighted least squares for
    the convex discrete objective. Free (natural) conditions at both ends.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded, solveh_banded
from scipy.sparse.linalg import spsolve

from .interpolators import phi1, phi1_energy_p
from .norms import NormParams, TraceData
from .pwpoly import PiecewisePolynomial, piecewise_linear

__all__ = [
    "OracleResult",
    "natural_cubic_spline",
    "natural_spline_energy",
    "oracle_L",
    "oracle_W",
    "grid_problem",
    "irls_minimize",
]

log = logging.getLogger(__name__)

EPS_FLOOR = 1e-10
DAMPING = 0.7
MAX_ITER = 5000
# convergence test while eps is still above the floor
STAGE_TOL = 1e-6


@dataclass
class OracleResult:
    value_p: float
    minimizer: PiecewisePolynomial
    method: str
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True
    grid_per_gap: int | None = None
    history: list = field(default_factory=list, repr=False)

    def to_dict(self, include_minimizer: bool = False) -> dict:
        out = {
            "value_p": self.value_p,
            "method": self.method,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "grid_per_gap": self.grid_per_gap,
        }
        if include_minimizer:
            out["minimizer"] = self.minimizer.to_dict()
        return out


# ---------------------------------------------------------------- exact routes

def natural_cubic_spline(data: TraceData) -> PiecewisePolynomial:
    """C^2 cubic interpolant with zero second derivative at both ends."""
    x, f = data.nodes.nodes, data.values
    h = data.nodes.steps
    N = data.N
    s = np.diff(f) / h
    M = np.zeros(N + 1)
    if N >= 2:
        ab = np.zeros((3, N - 1))
        ab[0, 1:] = h[1:-1]
        ab[1, :] = 2.0 * (h[:-1] + h[1:])
        ab[2, :-1] = h[1:-1]
        M[1:-1] = solve_banded((1, 1), ab, 6.0 * np.diff(s))
    c0 = f[:-1]
    c1 = s - h * (2.0 * M[:-1] + M[1:]) / 6.0
    c2 = 0.5 * M[:-1]
    c3 = (M[1:] - M[:-1]) / (6.0 * h)
    return PiecewisePolynomial(x, np.column_stack([c0, c1, c2, c3]))


def natural_spline_energy(spline: PiecewisePolynomial) -> float:
    """``int |S''|^2`` for a piecewise cubic, exact (S'' is linear per piece)."""
    h = spline.lengths
    m0 = 2.0 * spline.coeffs[:, 2]
    m1 = m0 + 6.0 * spline.coeffs[:, 3] * h
    return math.fsum(h * (m0 * m0 + m0 * m1 + m1 * m1) / 3.0)


# ---------------------------------------------------------------- grid route

@dataclass
class GridProblem:
    """Discrete objective ``sum_k c_k |(A F)_k|^p`` with some F entries pinned."""

    x: np.ndarray
    A: sp.csr_matrix
    c: np.ndarray
    pinned: np.ndarray
    pinned_values: np.ndarray

    @property
    def free(self) -> np.ndarray:
        mask = np.ones(self.x.shape[0], dtype=bool)
        mask[self.pinned] = False
        return np.flatnonzero(mask)


def _grid(data: TraceData, grid_per_gap: int) -> tuple[np.ndarray, np.ndarray]:
    x = data.nodes.nodes
    frac = np.arange(grid_per_gap) / grid_per_gap
    pts = (x[:-1, None] + np.diff(x)[:, None] * frac[None, :]).ravel()
    return np.append(pts, x[-1]), np.arange(0, data.N + 1) * grid_per_gap


def _first_difference(x: np.ndarray):
    dx = np.diff(x)
    n = x.shape[0]
    rows = np.repeat(np.arange(n - 1), 2)
    cols = np.column_stack([np.arange(n - 1), np.arange(1, n)]).ravel()
    vals = np.column_stack([-1.0 / dx, 1.0 / dx]).ravel()
    return sp.csr_matrix((vals, (rows, cols)), shape=(n - 1, n)), dx


def _second_difference(x: np.ndarray):
    # three-point stencil on a nonuniform grid, interior points only
    hl = x[1:-1] - x[:-2]
    hr = x[2:] - x[1:-1]
    n = x.shape[0]
    k = np.arange(n - 2)
    rows = np.repeat(k, 3)
    cols = np.column_stack([k, k + 1, k + 2]).ravel()
    denom = hl + hr
    vals = np.column_stack([
        2.0 / (hl * denom), -2.0 / (hl * hr), 2.0 / (hr * denom)]).ravel()
    return sp.csr_matrix((vals, (rows, cols)), shape=(n - 2, n)), 0.5 * denom


def _trapezoid_weights(x: np.ndarray) -> np.ndarray:
    dx = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += 0.5 * dx
    w[1:] += 0.5 * dx
    return w


def grid_problem(data: TraceData, r: int, grid_per_gap: int,
                 with_values: bool) -> GridProblem:
    """Assemble the discretized L (``with_values=False``) or W objective."""
    x, pinned = _grid(data, grid_per_gap)
    D, c = _first_difference(x) if r == 1 else _second_difference(x)
    if with_values:
        A = sp.vstack([sp.identity(x.shape[0], format="csr"), D]).tocsr()
        c = np.concatenate([_trapezoid_weights(x), c])
    else:
        A = D
    return GridProblem(x, A, c, pinned, np.asarray(data.values, dtype=float))


def _objective(a: np.ndarray, c: np.ndarray, p: float, eps: float) -> float:
    if eps == 0.0:
        return math.fsum(c * np.abs(a) ** p)
    return math.fsum(c * (a * a + eps * eps) ** (0.5 * p))


class _NormalEquations:
    """Banded assembly of ``B^T diag(w) B`` for a fixed sparse ``B``.

    Each row of ``B`` touches free columns at most ``bandwidth`` apart, so
    the normal matrix is banded; the per-row products are precomputed once
    and every solve is a banded Cholesky factorization.
    """

    def __init__(self, B: sp.csr_matrix):
        coo = B.tocoo()
        order = np.lexsort((coo.col, coo.row))
        rows, cols, vals = coo.row[order], coo.col[order], coo.data[order]
        self.n = B.shape[1]
        self.rows, self.cols, self.vals = rows, cols, vals
        starts = np.flatnonzero(np.r_[True, rows[1:] != rows[:-1]])
        lengths = np.diff(np.r_[starts, rows.shape[0]])
        self.bandwidth = 0
        bands = []
        # pair each entry with the entries after it in the same row
        for shift in range(1, int(lengths.max()) if lengths.size else 1):
            i = np.flatnonzero(np.r_[rows[shift:] == rows[:-shift], np.zeros(shift, bool)])
            bands.append((i, i + shift))
        pairs = [(np.arange(rows.shape[0]), np.arange(rows.shape[0]))] + bands
        self.terms = {}
        for i, j in pairs:
            offset = cols[j] - cols[i]
            for d in np.unique(offset):
                sel = offset == d
                self.terms.setdefault(int(d), []).append(
                    (rows[i[sel]], cols[i[sel]], vals[i[sel]] * vals[j[sel]]))
        self.bandwidth = max(self.terms)

    def solve(self, a0: np.ndarray, cw: np.ndarray) -> np.ndarray:
        n, bw = self.n, self.bandwidth
        ab = np.zeros((bw + 1, n))
        for d, chunks in self.terms.items():
            band = np.zeros(n)
            for rows, cols, prod in chunks:
                band += np.bincount(cols, weights=prod * cw[rows], minlength=n)
            # upper storage: ab[bw - d, j + d] = M[j, j + d]
            ab[bw - d, d:] = band[: n - d]
        rhs = -np.bincount(self.cols, weights=self.vals * (cw * a0)[self.rows], minlength=n)
        try:
            return solveh_banded(ab, rhs)
        except np.linalg.LinAlgError:
            M = sp.diags([ab[bw - d, d:] for d in range(bw + 1)], list(range(bw + 1)))
            return np.atleast_1d(spsolve((M + sp.triu(M, 1).T).tocsc(), rhs))


def irls_minimize(problem: GridProblem, p: float, tol: float = 1e-8,
                  max_iter: int = MAX_ITER):
    """Minimize the grid objective; returns (F, value_p, iterations, residual, converged, history).

    For ``p != 2`` the smoothed objective ``sum c (a^2 + eps^2)^{p/2}`` is
    decreased monotonically: each reweighted least-squares solution gives a
    descent direction and the step is halved until the objective drops.
    For ``p < 2`` eps starts large and is cut tenfold down to ``EPS_FLOOR``.
    """
    F = np.zeros(problem.x.shape[0])
    F[problem.pinned] = problem.pinned_values
    free = problem.free
    B = problem.A[:, free].tocsr()
    a0 = problem.A @ F
    c = problem.c

    if free.size == 0:
        value = _objective(a0, c, p, 0.0)
        return F, value, 0, 0.0, True, [value]
    normal = _NormalEquations(B)
    u = normal.solve(a0, c)
    a = a0 + B @ u
    if p == 2.0:
        F[free] = u
        value = _objective(a, c, p, 0.0)
        return F, value, 1, 0.0, True, [value]

    rms = math.sqrt(math.fsum(c * a * a) / math.fsum(c)) if a.size else 0.0
    eps = max(EPS_FLOOR, 1e-2 * rms) if p < 2.0 else EPS_FLOOR
    step0 = DAMPING if p < 2.0 else 1.0
    J = _objective(a, c, p, eps)
    history = [J]
    converged = False
    residual = math.inf
    it = 0
    while it < max_iter:
        it += 1
        w = (a * a + eps * eps) ** (0.5 * p - 1.0)
        direction = normal.solve(a0, c * w) - u
        t = step0
        while True:
            a_new = a0 + B @ (u + t * direction)
            J_new = _objective(a_new, c, p, eps)
            if J_new <= J or t < 1e-12:
                break
            t *= 0.5
        if J_new > J:
            J_new, a_new = J, a  # no descent left at this eps
        else:
            u = u + t * direction
        residual = (J - J_new) / max(J_new, 1e-300)
        a = a_new
        J = J_new
        history.append(J)
        if residual < (tol if eps <= EPS_FLOOR else max(tol, STAGE_TOL)):
            if eps <= EPS_FLOOR:
                converged = True
                break
            eps = max(EPS_FLOOR, 0.1 * eps)
            J = _objective(a, c, p, eps)
            history.append(J)
    F[free] = u
    if not converged:
        log.warning("IRLS stopped after %d iterations (residual %.3g)", it, residual)
    return F, _objective(a, c, p, 0.0), it, residual, converged, history


def _irls_result(data: TraceData, params: NormParams, grid_per_gap: int, tol: float,
                 with_values: bool) -> OracleResult:
    if grid_per_gap < 2:
        raise ValueError("grid_per_gap must be >= 2")
    problem = grid_problem(data, params.r, grid_per_gap, with_values)
    F, value, it, residual, ok, history = irls_minimize(problem, params.p, tol)
    return OracleResult(value, piecewise_linear(problem.x, F), "irls_grid", it, residual,
                        ok, grid_per_gap, history)


def _check(data: TraceData, params: NormParams):
    if data.N < params.r:
        raise ValueError(f"need at least {params.r + 1} nodes for r={params.r}")


def oracle_L(data: TraceData, params: NormParams, grid_per_gap: int = 64,
             tol: float = 1e-8, method: str = "auto") -> OracleResult:
    """Minimal ``int |F^{(r)}|^p`` over interpolants of ``data``.

    ``method="auto"`` takes the exact route when one exists; pass
    ``"irls_grid"`` to force the discretized solver.
    """
    _check(data, params)
    if method == "auto":
        if params.r == 1:
            method = "exact_linear"
        elif params.p == 2.0:
            method = "exact_natural_spline"
        else:
            method = "irls_grid"
    if method == "exact_linear":
        if params.r != 1:
            raise ValueError("exact_linear applies to r=1 only")
        return OracleResult(phi1_energy_p(data, params.p), phi1(data), method)
    if method == "exact_natural_spline":
        if (params.r, params.p) != (2, 2.0):
            raise ValueError("exact_natural_spline applies to r=2, p=2 only")
        spline = natural_cubic_spline(data)
        return OracleResult(natural_spline_energy(spline), spline, method)
    if method == "irls_grid":
        return _irls_result(data, params, grid_per_gap, tol, with_values=False)
    raise ValueError(f"unknown oracle method {method!r}")


def oracle_W(data: TraceData, params: NormParams, grid_per_gap: int = 64,
             tol: float = 1e-8) -> OracleResult:
    """Minimal ``int |F|^p + int |F^{(r)}|^p`` over interpolants, on the grid."""
    _check(data, params)
    return _irls_result(data, params, grid_per_gap, tol, with_values=True)
