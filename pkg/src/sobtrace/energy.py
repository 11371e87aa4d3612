"""Sobolev (semi)norm integrals of piecewise polynomials for real p >= 1.

Each piece is split at the real roots of the relevant derivative so that
``|P(t)|^p`` is analytic inside every sub-segment; the sub-segments are then
integrated with Gauss-Legendre rules and bisected where the two-level
estimates disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .norms import check_exponent
from .pwpoly import PiecewisePolynomial, _derivative_coeffs, _horner

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "real_roots",
    "sobolev_seminorm_p",
    "w_norm_p",
]

ROOT_MERGE = 1e-14


@dataclass(frozen=True)
class QuadratureSpec:
    points_per_segment: int = 16
    refinement_limit: int = 40
    relative_tolerance: float = 1e-10

    def __post_init__(self):
        if self.points_per_segment < 2:
            raise ValueError("points_per_segment must be >= 2")
        if self.refinement_limit < 0:
            raise ValueError("refinement_limit must be >= 0")
        if not self.relative_tolerance > 0:
            raise ValueError("relative_tolerance must be > 0")


class QuadratureError(RuntimeError):
    """Tolerance not reached within the refinement limit."""

    def __init__(self, estimate: float, achieved: float):
        super().__init__(
            f"quadrature did not converge: estimate {estimate!r}, "
            f"achieved relative tolerance {achieved:.3g}")
        self.estimate = estimate
        self.achieved = achieved


def _effective_coeffs(c, length: float) -> np.ndarray:
    """Drop leading coefficients negligible on ``[0, length]``."""
    c = np.asarray(c, dtype=float)
    mags = np.abs(c) * length ** np.arange(c.shape[0])
    big = mags.max()
    if big == 0.0:
        return c[:1] * 0.0
    keep = np.flatnonzero(mags > 1e-14 * big)
    return c[: keep[-1] + 1]


def _cubic_roots(a: float, b: float, c: float, d: float) -> list[float]:
    # real roots of a t^3 + b t^2 + c t + d, a != 0
    b, c, d = b / a, c / a, d / a
    shift = b / 3.0
    P = c - b * b / 3.0
    Q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = (Q / 2.0) ** 2 + (P / 3.0) ** 3
    if P == 0.0 and Q == 0.0:
        ys = [0.0]
    elif disc > 0:
        sq = math.sqrt(disc)
        ys = [math.copysign(abs(-Q / 2 + sq) ** (1 / 3), -Q / 2 + sq)
              + math.copysign(abs(-Q / 2 - sq) ** (1 / 3), -Q / 2 - sq)]
    else:
        # three real roots (disc <= 0 forces P <= 0)
        m = 2.0 * math.sqrt(-P / 3.0)
        arg = 3.0 * Q / (P * m) if P != 0 else 0.0
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        ys = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
    roots = []
    for y in ys:
        t = y - shift
        for _ in range(2):  # Newton polish
            f = ((t + b) * t + c) * t + d
            df = (3 * t + 2 * b) * t + c
            if df == 0.0:
                break
            t -= f / df
        roots.append(t)
    return roots


def real_roots(c) -> list[float]:
    """Sorted real roots of the polynomial with ascending coefficients ``c``.

    Degrees 0-3 only, closed form throughout. The zero polynomial and
    nonzero constants have no roots.
    """
    c = list(np.trim_zeros(np.asarray(c, dtype=float), "b"))
    deg = len(c) - 1
    if deg <= 0:
        return []
    if deg == 1:
        roots = [-c[0] / c[1]]
    elif deg == 2:
        cc, bb, aa = c
        disc = bb * bb - 4 * aa * cc
        if disc < 0:
            return []
        q = -0.5 * (bb + math.copysign(math.sqrt(disc), bb))
        roots = [q / aa] + ([cc / q] if q != 0 else [0.0])
    elif deg == 3:
        roots = _cubic_roots(c[3], c[2], c[1], c[0])
    else:
        raise ValueError("degree above 3")
    roots.sort()
    merged: list[float] = []
    for t in roots:
        if merged and abs(t - merged[-1]) <= ROOT_MERGE * max(1.0, abs(t)):
            continue
        merged.append(t)
    return merged


def _gl_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _segments(coeffs: np.ndarray, lengths: np.ndarray):
    """Split each piece at interior roots; returns (piece index, a, b) arrays."""
    pid, lo, hi = [], [], []
    for j, (c, L) in enumerate(zip(coeffs, lengths)):
        eff = _effective_coeffs(c, L)
        if not np.any(eff):
            continue
        cuts = [t for t in real_roots(eff) if ROOT_MERGE * L < t < L * (1 - ROOT_MERGE)]
        edges = [0.0, *cuts, L]
        for a, b in zip(edges[:-1], edges[1:]):
            pid.append(j)
            lo.append(a)
            hi.append(b)
    return np.array(pid, dtype=int), np.array(lo), np.array(hi)


def _gl(coeffs, a, b, p, nodes, weights):
    width = b - a
    t = a[:, None] + width[:, None] * nodes[None, :]
    vals = np.abs(_horner(coeffs[:, None, :], t)) ** p
    return width * (vals @ weights)


def _integrate_abs_power(coeffs: np.ndarray, lengths: np.ndarray, p: float,
                         spec: QuadratureSpec) -> float:
    pid, a, b = _segments(coeffs, lengths)
    if pid.size == 0:
        return 0.0
    nodes, weights = _gl_rule(spec.points_per_segment)
    total_length = float(np.sum(lengths))
    coarse = _gl(coeffs[pid], a, b, p, nodes, weights)
    scale = abs(math.fsum(coarse))
    if scale == 0.0:
        return 0.0
    accepted: list[np.ndarray] = []
    for _level in range(spec.refinement_limit + 1):
        m = 0.5 * (a + b)
        cp = coeffs[pid]
        left = _gl(cp, a, m, p, nodes, weights)
        right = _gl(cp, m, b, p, nodes, weights)
        fine = left + right
        err = np.abs(fine - coarse)
        tol = spec.relative_tolerance * scale * (b - a) / total_length
        ok = err <= tol
        accepted.append(fine[ok])
        if ok.all():
            return math.fsum(np.concatenate(accepted))
        bad = ~ok
        pid = np.concatenate([pid[bad], pid[bad]])
        a, b = np.concatenate([a[bad], m[bad]]), np.concatenate([m[bad], b[bad]])
        coarse = np.concatenate([left[bad], right[bad]])
    estimate = math.fsum(np.concatenate(accepted + [coarse]))
    raise QuadratureError(estimate, float(np.sum(err[bad])) / max(abs(estimate), 1e-300))


def sobolev_seminorm_p(s: PiecewisePolynomial, r: int, p: float,
                       spec: QuadratureSpec | None = None) -> float:
    """``int |s^{(r)}(x)|^p dx`` over the domain of ``s`` (``r = 0`` gives L^p)."""
    p = check_exponent(p)
    if r not in (0, 1, 2):
        raise ValueError(f"r must be 0, 1 or 2, got {r!r}")
    spec = spec or QuadratureSpec()
    return _integrate_abs_power(_derivative_coeffs(s.coeffs, r), s.lengths, p, spec)


def w_norm_p(s: PiecewisePolynomial, r: int, p: float,
             spec: QuadratureSpec | None = None) -> float:
    """``int |s|^p + int |s^{(r)}|^p``."""
    return sobolev_seminorm_p(s, 0, p, spec) + sobolev_seminorm_p(s, r, p, spec)
