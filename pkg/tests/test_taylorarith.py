"""Truncated multivariate Taylor arithmetic against closed forms and sympy."""

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from whitneyext import taylorarith as ta


def coeff(tv, alpha):
    return float(tv.coeffs[tv.ctx.pos[tuple(alpha)]])


# -- frozen scalar oracles ------------------------------------------------------


def test_exp_series_at_zero():
    x = ta.seed_variable((0.0,), 0, 1, 3)
    e = ta.exp(x)
    assert np.allclose(e.coeffs, [1.0, 1.0, 0.5, 1.0 / 6.0], rtol=0, atol=1e-15)


def test_exp_series_at_tenth():
    # independent value: e^0.1 - 1.1 = 0.005170918075647624
    x = ta.seed_variable((0.1,), 0, 1, 2)
    e = ta.exp(x)
    assert abs(e.const - 1.1 - 0.005170918075647624) < 1e-16
    d = ta.derivatives(e)
    assert abs(d[1] - e.const) < 1e-15  # exp is its own derivative
    assert abs(d[2] - e.const) < 1e-15


def test_mercator_series():
    # ln(1+x) = x - x^2/2 + x^3/3 - ...
    x = ta.seed_variable((0.0,), 0, 1, 3)
    l = ta.ln(1.0 + x)
    assert np.allclose(l.coeffs, [0.0, 1.0, -0.5, 1.0 / 3.0], rtol=0, atol=1e-15)


def test_geometric_series():
    # 1/(1+x) = 1 - x + x^2 - ...
    x = ta.seed_variable((0.0,), 0, 1, 2)
    g = 1.0 / (1.0 + x)
    assert np.allclose(g.coeffs, [1.0, -1.0, 1.0], rtol=0, atol=1e-15)


def test_sin_cos_pythagoras():
    x = ta.seed_variable((0.7,), 0, 1, 4)
    one = ta.sin(x) * ta.sin(x) + ta.cos(x) * ta.cos(x)
    expect = np.zeros(5)
    expect[0] = 1.0
    assert np.allclose(one.coeffs, expect, rtol=0, atol=1e-14)


def test_sqrt_squares_back():
    x = ta.seed_variable((2.0,), 0, 1, 3)
    r = ta.sqrt(x)
    assert np.allclose((r * r).coeffs, x.coeffs, rtol=0, atol=1e-14)


# -- multivariate ---------------------------------------------------------------


def test_product_xy_mixed_partials():
    sx, sy = ta.seeds((0.0, 0.0), 4)
    e = ta.exp(sx * sy)
    d = ta.derivatives(e)
    ctx = e.ctx
    assert abs(d[ctx.pos[(1, 1)]] - 1.0) < 1e-15
    assert abs(d[ctx.pos[(2, 2)]] - 2.0) < 1e-15
    assert abs(d[ctx.pos[(1, 0)]]) < 1e-15
    assert abs(d[ctx.pos[(2, 1)]]) < 1e-15


def test_extract_derivative():
    sx, sy = ta.seeds((1.0, 2.0), 3)
    p = sx * sx * sy  # x^2 y
    assert ta.extract_derivative(p, (2, 1)) == pytest.approx(2.0)
    assert ta.extract_derivative(p, (1, 1)) == pytest.approx(2.0)  # 2x at x=1


def test_seed_values():
    sx, sy = ta.seeds((3.0, -1.0), 2)
    assert sx.const == 3.0 and sy.const == -1.0
    assert coeff(sx, (1, 0)) == 1.0 and coeff(sx, (0, 1)) == 0.0


# -- sympy as independent oracle ------------------------------------------------


def _sympy_coeffs_1d(expr, sym, x0, k):
    out = []
    for j in range(k + 1):
        out.append(float(sp.diff(expr, sym, j).subs(sym, x0)) / math.factorial(j))
    return np.array(out)


@pytest.mark.parametrize(
    "builder,sexpr,x0",
    [
        (lambda x: ta.exp(ta.sin(x)), "exp(sin(x))", 0.3),
        (lambda x: ta.ln(2.0 + ta.cos(x)), "log(2 + cos(x))", 1.1),
        (lambda x: (1.0 + x * x) / (3.0 - x), "(1 + x**2)/(3 - x)", 0.5),
        (lambda x: ta.sqrt(1.0 + x * x), "sqrt(1 + x**2)", -0.4),
    ],
)
def test_against_sympy_series(builder, sexpr, x0):
    sym = sp.Symbol("x")
    k = 4
    got = builder(ta.seed_variable((x0,), 0, 1, k))
    want = _sympy_coeffs_1d(sp.sympify(sexpr), sym, x0, k)
    assert np.allclose(got.coeffs, want, rtol=1e-12, atol=1e-12)


def test_compose_against_sympy():
    # outer sin(u+v), inner u = x^2+y (zero constant), v = x*y
    ctx = ta.context(2, 3)
    sx, sy = ta.seeds((0.5, -0.2), 3)
    u = sx * sx + sy - (0.5 * 0.5 - 0.2)
    v = sx * sy - (0.5 * -0.2)
    su, sv = ta.seeds((0.0, 0.0), 3)
    outer = ta.sin(su + sv)
    got = ta.compose(outer, [u, v])

    X, Y = sp.symbols("X Y")
    inner = sp.sin((X**2 + Y - 0.05) + (X * Y + 0.1))
    for alpha in ctx.indices:
        d = inner
        d = sp.diff(d, X, alpha[0])
        d = sp.diff(d, Y, alpha[1])
        val = float(d.subs({X: 0.5, Y: -0.2}))
        fa = math.factorial(alpha[0]) * math.factorial(alpha[1])
        assert abs(coeff(got, alpha) * fa / 1.0 - val / 1.0) < 1e-10 * (1 + abs(val)), alpha


def test_compose_requires_zero_constant():
    u = ta.seed_variable((1.0,), 0, 1, 2)
    outer = ta.exp(ta.seed_variable((0.0,), 0, 1, 2))
    with pytest.raises(ValueError):
        ta.compose(outer, [u])


# -- domain errors --------------------------------------------------------------


def test_division_by_zero_constant():
    x = ta.seed_variable((0.0,), 0, 1, 2)
    with pytest.raises(ta.SeriesDomainError):
        1.0 / x


def test_ln_of_nonpositive():
    x = ta.seed_variable((-1.0,), 0, 1, 2)
    with pytest.raises(ta.SeriesDomainError):
        ta.ln(x)


def test_sqrt_of_negative():
    x = ta.seed_variable((-4.0,), 0, 1, 2)
    with pytest.raises(ta.SeriesDomainError):
        ta.sqrt(x)


# -- algebraic properties -------------------------------------------------------

series_coeffs = st.lists(
    st.floats(-10, 10, allow_nan=False, allow_infinity=False), min_size=4, max_size=4
)


def _mk(cs):
    ctx = ta.context(1, 3)
    return ta.TaylorValue(ctx, np.array(cs))


@given(series_coeffs, series_coeffs)
def test_addition_commutes_exactly(a, b):
    x, y = _mk(a), _mk(b)
    assert np.array_equal((x + y).coeffs, (y + x).coeffs)


@given(series_coeffs, series_coeffs, series_coeffs)
@settings(max_examples=200)
def test_multiplication_distributes(a, b, c):
    x, y, z = _mk(a), _mk(b), _mk(c)
    left = (x * (y + z)).coeffs
    right = (x * y + x * z).coeffs
    scale = 1.0 + np.max(np.abs(left)) + np.max(np.abs(right))
    assert np.allclose(left, right, rtol=0, atol=1e-12 * scale)


@given(series_coeffs, series_coeffs)
@settings(max_examples=200)
def test_division_inverts_multiplication(a, b):
    x, y = _mk(a), _mk(b)
    if abs(y.const) < 1e-3:
        return
    q = x / y
    back = q * y
    # error of the roundtrip is set by the quotient's magnitude, which can be
    # huge when |y1/y0| is large -- bound relative to it, not to the inputs
    scale = (1.0 + np.max(np.abs(q.coeffs))) * (1.0 + np.max(np.abs(y.coeffs)))
    assert np.allclose(back.coeffs, x.coeffs, rtol=0, atol=1e-12 * scale)


@given(st.floats(-3, 3, allow_nan=False))
def test_exp_ln_roundtrip(t):
    x = ta.seed_variable((t,), 0, 1, 3)
    back = ta.ln(ta.exp(x))
    assert np.allclose(back.coeffs, x.coeffs, rtol=0, atol=1e-12 * math.exp(abs(t)))


def test_reflected_operators():
    x = ta.seed_variable((2.0,), 0, 1, 2)
    assert (3.0 - x).const == 1.0
    assert (3.0 - x).coeffs[1] == -1.0
    assert (6.0 / x).const == 3.0
    assert (x**3).const == 8.0


def test_truncation_order_respected():
    # multiplying two order-k series stays order k: coefficient arrays have
    # the same length and agree with the k+1 truncation of the full product
    x = ta.seed_variable((1.0,), 0, 1, 2)
    p = (x * x) * x
    assert p.coeffs.shape == x.coeffs.shape
    # x^3 around 1: 1 + 3h + 3h^2 (+ h^3 truncated)
    assert np.allclose(p.coeffs, [1.0, 3.0, 3.0], rtol=0, atol=1e-15)
