from fractions import Fraction

import pytest

from qcoha.coha import (check_a2_remark, coha_series_from_counts, coha_series_from_kac, cross_check, declared_table,
                        langweil_leading)
from qcoha.kac import extract_nilpotent_kac
from qcoha.quiver import a2_quiver, jordan_quiver, loop_quiver
from qcoha.series import Q_SYMBOL, TruncSeries, plethystic_exp, u


def test_empty_table_is_one():
    J = jordan_quiver()
    res = coha_series_from_kac(declared_table(J, "nilpotent0", {}), 0, 3)
    assert res.series == TruncSeries.one(("i",), 3)


def test_single_generator_tau_one():
    J = jordan_quiver()
    res = coha_series_from_kac(declared_table(J, "nilpotent0", {1: [1]}), 1, 4)
    want = plethystic_exp(TruncSeries(("i",), 4, {(1,): 1 / (1 - u)})).scale(1 / (1 - u))
    assert res.series == want


def test_jordan_example_windowed_and_nonnegative():
    J = jordan_quiver()
    table = declared_table(J, "nilpotent0", {v: [1] for v in range(1, 4)})
    exact = coha_series_from_kac(table, 2, 3)
    lit = coha_series_from_kac(table, 2, 3, q_window=6)
    assert exact.window(6) == lit.window(6)
    assert exact.nonnegative_in_window(8)


def test_count_route_examples(counter):
    A, J = a2_quiver(), jordan_quiver()
    assert coha_series_from_counts(A, 0, (1, 1), 3, 0, counter)[(1, 1)] == Fraction(15, 4)
    assert coha_series_from_counts(J, 0, 1, 2, 2, counter)[(1,)] == 8
    assert coha_series_from_counts(J, 0, 1, 5, 3, counter)[(0,)] == Fraction(5, 4) ** 3


@pytest.mark.parametrize("Q,vmax,tau,primes", [(jordan_quiver(), 2, 2, (2, 3, 5)), (a2_quiver(), (1, 1), 0, (2, 3, 5, 7)),
                                               (loop_quiver(2), 1, 1, (2, 3, 5, 7))])
def test_cross_route(counter, Q, vmax, tau, primes):
    for flat in (0, 1):
        table = extract_nilpotent_kac(Q, flat, vmax, (2, 3, 5), counter)
        rows = cross_check(table, tau, primes, counter=counter)
        assert rows and all(r[4] for r in rows), rows
        assert coha_series_from_kac(table, tau, sum(Q.dim(vmax))).nonnegative_in_window(6)


@pytest.mark.slow
def test_cross_route_jordan_fresh_prime(counter):
    table = extract_nilpotent_kac(jordan_quiver(), 0, 2, (2, 3, 5), counter)
    rows = cross_check(table, 2, (7,), counter=counter)
    assert all(r[4] for r in rows), rows


def test_a2_stack_identity(counter):
    assert all(check_a2_remark(p, counter) for p in (2, 3, 5, 7))


def test_langweil_small_cases(counter):
    lead = langweil_leading(1, 1, (2, 3, 5, 7), counter=counter)
    assert (lead.degree, lead.leading) == (2, 1)
    lead = langweil_leading(2, 1, (2, 3, 5, 7, 11), counter=counter)
    assert (lead.degree, lead.leading) == (4, 1)
    assert lead.polynomial.as_expr() == Q_SYMBOL**4
