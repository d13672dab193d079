from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qcoha.series import (Q_SYMBOL, InterpolationError, SeriesDomainError, TruncSeries, adams_coeff, eval_coeff,
                          interpolate_poly, laurent_window, matrix_series_inverse, plethystic_exp, plethystic_log,
                          product_expansion, q, series_exp, series_log, u)

V1 = ("i",)
V2 = ("i", "j")


def one_var(coeffs, order):
    return TruncSeries(V1, order, {(k,): c for k, c in enumerate(coeffs)})


def small_coeff():
    return st.tuples(st.integers(-3, 3), st.integers(-2, 2), st.integers(0, 2)).map(
        lambda t: t[0] + t[1] * q ** t[2] + 0 * q)


def rand_series(vars_, order):
    keys = [e for e in [(a, b) for a in range(order + 1) for b in range(order + 1)] if 0 < sum(e) <= order]
    if len(vars_) == 1:
        keys = [(k,) for k in range(1, order + 1)]
    return st.lists(small_coeff(), min_size=len(keys), max_size=len(keys)).map(
        lambda cs: TruncSeries(vars_, order, dict(zip(keys, cs))))


def test_exp_examples():
    assert series_exp(TruncSeries(V1, 3, {})) == TruncSeries.one(V1, 3)
    z = one_var([0, 1], 3)
    assert series_exp(z) == one_var([1, 1, Fraction(1, 2), Fraction(1, 6)], 3)
    f = one_var([0, q, 1], 4)
    assert series_log(series_exp(f)) == f
    with pytest.raises(SeriesDomainError):
        series_exp(one_var([1, 1], 3))
    with pytest.raises(SeriesDomainError):
        series_log(one_var([2, 1], 3))


def test_plethystic_examples():
    assert plethystic_exp(one_var([0, 1], 5)) == one_var([1] * 6, 5)
    N = 4
    lhs = plethystic_exp(one_var([0, 1 / (1 - u)], N))
    # prod_{k>=0} (1 - u^k z)^{-1} has z^n coefficient prod_{j=1..n} 1/(1 - u^j) (Euler)
    for n in range(N + 1):
        c = 1 + 0 * q
        for j in range(1, n + 1):
            c = c / (1 - u**j)
        assert lhs[(n,)] == c


@given(rand_series(V2, 4))
def test_plethystic_round_trip(f):
    assert plethystic_log(plethystic_exp(f)) == f


@given(rand_series(V1, 4), rand_series(V1, 4))
def test_exp_turns_sums_into_products(f, g):
    assert plethystic_exp(f + g) == plethystic_exp(f) * plethystic_exp(g)
    assert series_exp(f + g) == series_exp(f) * series_exp(g)


@given(small_coeff(), st.integers(1, 3), st.integers(1, 3))
def test_adams_composition(c, l, m):
    assert adams_coeff(adams_coeff(c, l), m) == adams_coeff(c, l * m)
    f = one_var([0, c], 6)
    assert f.adams(l).adams(m) == f.adams(l * m)


def test_product_expansion_examples():
    assert product_expansion({}, V1, 4) == TruncSeries.one(V1, 4)
    single = product_expansion({((1,), 0): 1}, V1, 4)
    assert single == plethystic_exp(one_var([0, 1 / (1 - u)], 4))
    jordan = product_expansion({((v,), 0): 1 for v in range(1, 4)}, V1, 3)
    assert jordan == plethystic_exp(one_var([0] + [1 / (1 - u)] * 3, 3))


@pytest.mark.parametrize("a,r", [(1, 0), (2, 1), (3, 2)])
def test_single_factor_binomial(a, r):
    """(1 - u^{k+r} z)^{-a} over all k: z^n coefficient via generalized binomials of each factor."""
    order, K = 3, 8
    ser = product_expansion({((1,), r): a}, V1, order)
    lit = product_expansion({((1,), r): a}, V1, order, q_window=K)
    for n in range(order + 1):
        assert laurent_window(ser[(n,)], K) == laurent_window(lit[(n,)], K)
    # direct: only k = 0 .. K factors matter down to q^{-K}
    x = sympy.Symbol("x")
    zs = sympy.Symbol("z")
    expr = sympy.Integer(1)
    for k in range(K + 1):
        expr *= sympy.series((1 - x ** (k + r) * zs) ** (-a), zs, 0, order + 1).removeO()
    expr = sympy.expand(expr)
    for n in range(order + 1):
        cz = sympy.Poly(expr.coeff(zs, n), x)
        want = {-d: Fraction(int(c)) for (d,), c in cz.terms() if d <= K and c}
        got = {k: v for k, v in laurent_window(ser[(n,)], K).items() if v}
        assert got == want


def test_interpolation_examples():
    assert interpolate_poly([(2, 4), (3, 9), (5, 25)], 2).as_expr() == Q_SYMBOL**2
    assert interpolate_poly([(2, 3), (3, 5)], 1).as_expr() == 2 * Q_SYMBOL - 1
    assert interpolate_poly([(2, 3), (3, 5), (5, 9), (7, 13)], 1).as_expr() == 2 * Q_SYMBOL - 1
    with pytest.raises(InterpolationError):
        interpolate_poly([(2, 3)], 1)
    with pytest.raises(InterpolationError):
        interpolate_poly([(2, 3), (3, 5), (5, 10)], 1)
    assert interpolate_poly([(2, 1), (4, 2)], 1).as_expr() == Q_SYMBOL / 2
    with pytest.raises(InterpolationError):
        interpolate_poly([(2, 1), (4, 2)], 1, require_integral=True)


def test_matrix_series_inverse_examples():
    ident = matrix_series_inverse([[[1], [0]], [[0], [1]]], 4)
    assert ident == [[[1, 0, 0, 0, 0], [0] * 5], [[0] * 5, [1, 0, 0, 0, 0]]]
    sq = matrix_series_inverse([[[1, -2, 1]]], 6)
    assert sq == [[[n + 1 for n in range(7)]]]
    d = matrix_series_inverse([[[1, -1], [0]], [[0], [1, 1]]], 5)
    assert d[0][0] == [1] * 6 and d[1][1] == [(-1) ** n for n in range(6)]
    with pytest.raises(ValueError):
        matrix_series_inverse([[[0, 1]]], 3)


def test_evaluation_and_windows():
    c = (2 * q - 1) * q / (q - 1) ** 2
    assert eval_coeff(c, 3) == Fraction(15, 4)
    assert laurent_window(1 / (1 - u), 3) == {0: 1, -1: 1, -2: 1, -3: 1}
    s = TruncSeries(V1, 2, {(1,): q})
    js = s.to_json()
    assert js == [{"z": {"i": 1}, "coeff": {"num": "q", "den": "1"}}]
