from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sobtrace.pwpoly import (PiecewisePolynomial, evaluate, hermite_cubic, piecewise_linear,
                             smoothness_defect, taylor_shift)


def test_cube_single_piece_exact():
    rng = np.random.default_rng(0)
    s = PiecewisePolynomial(np.array([-2.0, 3.0]), np.array([[-8.0, 12.0, -6.0, 1.0]]))
    x = rng.uniform(-2.0, 3.0, 100)
    np.testing.assert_allclose(evaluate(s, x), x**3, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(evaluate(s, x, 1), 3 * x**2, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(evaluate(s, x, 2), 6 * x, rtol=1e-12, atol=1e-12)
    assert np.all(evaluate(s, x, 3) == 6.0)
    assert np.all(evaluate(s, x, 4) == 0.0)


def test_derivative_matches_finite_differences():
    rng = np.random.default_rng(1)
    x = np.sort(rng.uniform(0, 5, 7))
    s = hermite_cubic(x, rng.standard_normal(7), rng.standard_normal(7))
    pts = rng.uniform(x[0] + 1e-3, x[-1] - 1e-3, 50)
    # keep the finite-difference stencil inside one piece
    pts = pts[np.min(np.abs(pts[:, None] - x[None, :]), axis=1) > 1e-4]
    step = 1e-5
    fd = (evaluate(s, pts + step) - evaluate(s, pts - step)) / (2 * step)
    np.testing.assert_allclose(evaluate(s, pts, 1), fd, rtol=1e-6, atol=1e-6)


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4), st.floats(-2, 2))
def test_taylor_shift(c, shift):
    c = np.array(c)
    shifted = taylor_shift(c, shift)
    t = np.linspace(-1, 1, 7)
    P = np.polynomial.polynomial.polyval
    np.testing.assert_allclose(P(t, shifted), P(t + shift, c), atol=1e-10)


def test_breakpoint_conventions():
    s = piecewise_linear([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])
    assert s.piece_index(np.array([1.0]))[0] == 1
    assert s.piece_index(np.array([2.0]))[0] == 1
    assert s(1.0) == 1.0 and s(2.0) == 0.0
    assert evaluate(s, 1.0, 1) == -1.0  # right-hand derivative
    with pytest.raises(ValueError):
        evaluate(s, 2.5)
    with pytest.raises(ValueError):
        evaluate(s, -1e-3)


def test_validation():
    with pytest.raises(ValueError):
        PiecewisePolynomial(np.array([0.0, 1.0, 1.0]), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        PiecewisePolynomial(np.array([0.0, 1.0]), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        PiecewisePolynomial(np.array([0.0, 1.0]), np.ones((1, 5)))
    # zero padding beyond degree 3 is harmless
    assert PiecewisePolynomial(np.array([0.0, 1.0]), np.zeros((1, 5))).coeffs.shape == (1, 4)


def test_smoothness_defect():
    lin = piecewise_linear([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])
    assert smoothness_defect(lin, 0) == 0.0
    assert smoothness_defect(lin, 1) == pytest.approx(2.0)
    herm = hermite_cubic([0.0, 1.0, 3.0], [0.0, 1.0, -1.0], [1.0, 0.5, 2.0])
    assert smoothness_defect(herm, 1) < 1e-14


def test_restrict_and_roundtrip():
    herm = hermite_cubic([0.0, 1.0, 3.0], [0.0, 1.0, -1.0], [1.0, 0.5, 2.0])
    part = herm.restrict(0.5, 2.0)
    assert part.domain == (0.5, 2.0)
    x = np.linspace(0.5, 2.0, 11)
    np.testing.assert_allclose(part(x), herm(x), atol=1e-14)
    back = PiecewisePolynomial.from_dict(herm.to_dict())
    np.testing.assert_array_equal(back.coeffs, herm.coeffs)
    np.testing.assert_array_equal(back.breakpoints, herm.breakpoints)
    assert herm.degree() == 3
    assert herm.derivative(2).degree() <= 1
