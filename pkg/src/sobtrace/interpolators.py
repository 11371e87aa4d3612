"""The piecewise linear interpolator Phi1 and the C^1 cubic interpolator Phi2.

Phi2 on a finite window
-----------------------
Around each node ``lambda_n`` Phi2 is

    f(lambda_n) + alpha_n (x - lambda_n) + h^2 * dd2_n * q(|x - lambda_n| / h),

with ``q(y) = 4 (y^2 - y^3)``, ``h`` the adjacent gap on the side of ``x``,
``alpha_n`` the gap-weighted mean of the two neighbouring slopes and
``dd2_n = f(lambda_{n-1}, lambda_n, lambda_{n+1})``. The formula holds on
``[mu_{n-1}, mu_n]`` with ``mu`` the gap midpoints.

At the two window edges a virtual neighbour one gap further out is used,
with its value chosen so that the edge node reuses the second divided
difference of the nearest complete stencil. This makes ``alpha_0`` and
``alpha_N`` the end slopes of the parabola through the three outermost nodes
and keeps affine data reproduced exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .norms import TraceData, check_exponent
from .pwpoly import PiecewisePolynomial, piecewise_linear, taylor_shift

__all__ = [
    "Phi2Stencil",
    "phi1",
    "phi2",
    "phi2_stencils",
    "phi1_energy_p",
    "phi2_energy_p",
    "phi2_kernel_integral",
]


@dataclass(frozen=True)
class Phi2Stencil:
    n: int
    alpha_n: float
    dd2_n: float


def _stencil_arrays(data: TraceData) -> tuple[np.ndarray, np.ndarray]:
    """``alpha_n`` and ``dd2_n`` for every node, edges included."""
    f = data.values
    h = data.nodes.steps
    s = np.diff(f) / h
    N = data.N
    if N == 1:
        return np.array([s[0], s[0]]), np.zeros(2)
    dd2_inner = (s[1:] - s[:-1]) / (h[1:] + h[:-1])
    dd2 = np.concatenate([[dd2_inner[0]], dd2_inner, [dd2_inner[-1]]])
    alpha = np.empty(N + 1)
    alpha[1:-1] = (h[1:] * s[:-1] + h[:-1] * s[1:]) / (h[:-1] + h[1:])
    alpha[0] = s[0] - h[0] * dd2[0]
    alpha[-1] = s[-1] + h[-1] * dd2[-1]
    return alpha, dd2


def phi2_stencils(data: TraceData) -> list[Phi2Stencil]:
    alpha, dd2 = _stencil_arrays(data)
    return [Phi2Stencil(n, float(a), float(d)) for n, (a, d) in enumerate(zip(alpha, dd2))]


def phi1(data: TraceData) -> PiecewisePolynomial:
    """Piecewise linear interpolant with breakpoints at the nodes."""
    return piecewise_linear(data.nodes.nodes, data.values)


def phi2(data: TraceData) -> PiecewisePolynomial:
    """C^1 piecewise cubic interpolant, breakpoints at nodes and gap midpoints.

    With two nodes there is no second divided difference and the result is
    the linear interpolant (still split at the midpoint).
    """
    x, f = data.nodes.nodes, data.values
    h = data.nodes.steps
    mid = data.nodes.midpoints
    alpha, dd2 = _stencil_arrays(data)
    N = data.N

    breakpoints = np.empty(2 * N + 1)
    breakpoints[0::2] = x
    breakpoints[1::2] = mid
    coeffs = np.zeros((2 * N, 4))
    for n in range(N):
        # right half of node n: [lambda_n, mu_n], t = x - lambda_n
        coeffs[2 * n] = (f[n], alpha[n], 4.0 * dd2[n], -4.0 * dd2[n] / h[n])
        # left half of node n+1: [mu_n, lambda_{n+1}]; in s = lambda_{n+1} - x
        # the cubic is g(s), and s = h_n/2 - t
        m = n + 1
        g = np.array([f[m], -alpha[m], 4.0 * dd2[m], -4.0 * dd2[m] / h[n]])
        shifted = taylor_shift(g, 0.5 * h[n])
        shifted[1::2] *= -1.0
        coeffs[2 * n + 1] = shifted
    return PiecewisePolynomial(breakpoints, coeffs)


def phi1_energy_p(data: TraceData, p: float) -> float:
    """``int |(Phi1 f)'|^p`` in closed form: ``sum_n h_n |f(lambda_n, lambda_{n+1})|^p``."""
    p = check_exponent(p)
    h = data.nodes.steps
    return math.fsum(h * np.abs(np.diff(data.values) / h) ** p)


def phi2_kernel_integral(p: float) -> float:
    """``int_0^{1/2} |q''(y)|^p dy`` with ``q''(y) = 8 - 24 y``."""
    p = check_exponent(p)
    return (8.0 ** (p + 1) + 4.0 ** (p + 1)) / (24.0 * (p + 1))


def phi2_energy_p(data: TraceData, p: float) -> float:
    """``int |(Phi2 f)''|^p`` in closed form.

    Each half-gap piece adjacent to node ``n`` contributes
    ``h * |dd2_n|^p * Q(p)`` with ``h`` the full gap it belongs to.
    """
    p = check_exponent(p)
    if data.N < 2:
        return 0.0
    h = data.nodes.steps
    _, dd2 = _stencil_arrays(data)
    ad = np.abs(dd2) ** p
    # node n touches gap n on its right and gap n-1 on its left
    per_gap = h * (ad[:-1] + ad[1:])
    return phi2_kernel_integral(p) * math.fsum(per_gap)
