"""Piecewise cubic (or lower) polynomials in local coordinates.

Piece ``j`` lives on ``[b_j, b_{j+1}]`` and is stored as ascending
coefficients in ``t = x - b_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

__all__ = [
    "MAX_DEGREE",
    "PiecewisePolynomial",
    "evaluate",
    "smoothness_defect",
    "taylor_shift",
    "piecewise_linear",
    "hermite_cubic",
]

MAX_DEGREE = 3
_NCOEF = MAX_DEGREE + 1


def taylor_shift(c, s: float) -> np.ndarray:
    """Coefficients of ``t -> P(t + s)`` given ascending coefficients of ``P``."""
    c = np.asarray(c, dtype=float)
    out = np.zeros_like(c)
    for k, ck in enumerate(c):
        if ck == 0.0:
            continue
        for i in range(k + 1):
            out[i] += ck * comb(k, i) * s ** (k - i)
    return out


def _derivative_coeffs(coeffs: np.ndarray, k: int) -> np.ndarray:
    """Ascending coefficients of the k-th derivative, row-wise, same width."""
    out = np.zeros_like(coeffs)
    deg = coeffs.shape[-1]
    for j in range(k, deg):
        out[..., j - k] = coeffs[..., j] * (factorial(j) // factorial(j - k))
    return out


def _horner(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(t)
    for j in range(coeffs.shape[-1] - 1, -1, -1):
        acc = acc * t + coeffs[..., j]
    return acc


@dataclass(frozen=True, eq=False)
class PiecewisePolynomial:
    breakpoints: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        b = np.array(self.breakpoints, dtype=float).ravel()
        if b.shape[0] < 2 or not np.all(np.isfinite(b)):
            raise ValueError("need at least two finite breakpoints")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        c = np.atleast_2d(np.array(self.coeffs, dtype=float))
        if c.shape[0] != b.shape[0] - 1:
            raise ValueError(f"{c.shape[0]} pieces for {b.shape[0]} breakpoints")
        if c.shape[1] > _NCOEF:
            extra = c[:, _NCOEF:]
            if np.any(extra != 0):
                raise ValueError(f"degree is capped at {MAX_DEGREE}")
            c = c[:, :_NCOEF]
        if c.shape[1] < _NCOEF:
            c = np.hstack([c, np.zeros((c.shape[0], _NCOEF - c.shape[1]))])
        b.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "coeffs", c)

    @property
    def n_pieces(self) -> int:
        return self.coeffs.shape[0]

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def degree(self) -> int:
        nz = np.flatnonzero(np.any(self.coeffs != 0, axis=0))
        return int(nz[-1]) if nz.size else 0

    def __call__(self, x, derivative: int = 0):
        return evaluate(self, x, derivative)

    def piece_index(self, x) -> np.ndarray:
        """Governing piece: the right one at interior breakpoints, last at b_M."""
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return np.clip(idx, 0, self.n_pieces - 1)

    def derivative(self, k: int = 1) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self.breakpoints, _derivative_coeffs(self.coeffs, k))

    def restrict(self, a: float, b: float) -> "PiecewisePolynomial":
        """The same function on ``[a, b]`` (a sub-interval of the domain)."""
        lo, hi = self.domain
        if not lo <= a < b <= hi:
            raise ValueError(f"[{a}, {b}] is not a sub-interval of [{lo}, {hi}]")
        bp = self.breakpoints
        inner = bp[(bp > a) & (bp < b)]
        new_bp = np.concatenate([[a], inner, [b]])
        idx = self.piece_index(new_bp[:-1])
        coeffs = np.array([
            taylor_shift(self.coeffs[j], start - bp[j]) if start != bp[j] else self.coeffs[j]
            for j, start in zip(idx, new_bp[:-1])
        ])
        return PiecewisePolynomial(new_bp, coeffs)

    def to_dict(self) -> dict:
        return {
            "breakpoints": self.breakpoints.tolist(),
            "coefficients": self.coeffs.tolist(),
            "basis": "ascending powers of (x - breakpoints[j])",
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PiecewisePolynomial":
        return cls(d["breakpoints"], d["coefficients"])


def evaluate(s: PiecewisePolynomial, x, derivative: int = 0):
    """Evaluate ``s`` (or its ``derivative``-th derivative) at ``x``.

    Scalars in, float out; arrays in, arrays out.
    """
    if derivative < 0:
        raise ValueError("derivative order must be >= 0")
    xa = np.asarray(x, dtype=float)
    lo, hi = s.domain
    if np.any(~(xa >= lo) | ~(xa <= hi)):
        raise ValueError(f"x outside the domain [{lo!r}, {hi!r}]")
    if derivative > MAX_DEGREE:
        out = np.zeros_like(xa)
    else:
        idx = s.piece_index(xa)
        c = _derivative_coeffs(s.coeffs, derivative)[idx]
        out = _horner(c, xa - s.breakpoints[idx])
    return float(out) if out.ndim == 0 else out


def smoothness_defect(s: PiecewisePolynomial, order: int) -> float:
    """Largest jump of the ``order``-th derivative across interior breakpoints."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if s.n_pieces < 2 or order > MAX_DEGREE:
        return 0.0
    c = _derivative_coeffs(s.coeffs, order)
    left = _horner(c[:-1], s.lengths[:-1])
    right = c[1:, 0]
    return float(np.max(np.abs(left - right)))


def piecewise_linear(x, y) -> PiecewisePolynomial:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slopes = np.diff(y) / np.diff(x)
    return PiecewisePolynomial(x, np.column_stack([y[:-1], slopes]))


def hermite_cubic(x, y, dy) -> PiecewisePolynomial:
    """C^1 piecewise cubic with prescribed values and slopes at ``x``."""
    x, y, dy = (np.asarray(a, dtype=float) for a in (x, y, dy))
    h = np.diff(x)
    s = np.diff(y) / h
    c2 = (3 * s - 2 * dy[:-1] - dy[1:]) / h
    c3 = (dy[:-1] + dy[1:] - 2 * s) / h**2
    return PiecewisePolynomial(x, np.column_stack([y[:-1], dy[:-1], c2, c3]))
