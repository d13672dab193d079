import itertools
import math
import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcoha.checks import random_sympoly
from qcoha.shuffle import (R, ZETA_ROOTS, ShuffleError, SymPoly, d_k_image, membership_in_generated, parse_sympoly,
                           shuffle_product, wheel_check, x_l_image)

T, TS = R.gens
one = SymPoly.constant(1)


def zeta(z, t, ts):
    return (z - t - ts) * (z + t) * (z + ts) / z


def shuffle_at_point(f, g, xs, t, ts):
    """The symmetrization formula evaluated directly at a rational point."""
    v, w = f.nvars, g.nvars
    total = Fraction(0)
    for perm in itertools.permutations(range(v + w)):
        y = [xs[k] for k in perm]
        term = f.evaluate(y[:v], t, ts) * g.evaluate(y[v:], t, ts)
        for i in range(v):
            for j in range(v, v + w):
                term *= zeta(y[i] - y[j], t, ts)
        total += term
    return total / (math.factorial(v) * math.factorial(w))


def random_point(rng, n):
    xs = [Fraction(rng.randint(-40, 40), rng.randint(1, 7)) for _ in range(n)]
    return xs, Fraction(rng.randint(1, 9), rng.randint(1, 5)), Fraction(-rng.randint(1, 9), rng.randint(1, 5))


def test_unit_and_first_product():
    assert shuffle_product(one, one) == parse_sympoly("2*((x1-x2)^2+t*ts-(t+ts)^2)")
    f = parse_sympoly("x1^2 + x2^2 + t*x1*x2")
    unit = SymPoly.constant(0)
    assert shuffle_product(f, unit) == f == shuffle_product(unit, f)


def test_associativity_witness():
    assert shuffle_product(shuffle_product(one, one), one) == shuffle_product(one, shuffle_product(one, one))


def test_generator_images():
    assert x_l_image(1) == SymPoly.constant(1, T) == d_k_image(0)
    assert x_l_image(2) == parse_sympoly("t^2*(t^2-(x1-x2)^2)")
    assert d_k_image(3) == parse_sympoly("t*x1^3")
    with pytest.raises(ValueError):
        x_l_image(0)


def test_matches_pointwise_symmetrization():
    rng = random.Random(3)
    cases = [(one, one), (SymPoly(1, {(2,): T}), parse_sympoly("x1*x2 + ts")), (x_l_image(2), d_k_image(1))]
    for f, g in cases:
        prod = shuffle_product(f, g)
        for _ in range(4):
            xs, t, ts = random_point(rng, f.nvars + g.nvars)
            if len(set(xs)) < len(xs):
                continue
            assert prod.evaluate(xs, t, ts) == shuffle_at_point(f, g, xs, t, ts)


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 2))
def test_products_are_polynomial_and_symmetric(seed, nf, ng):
    rng = random.Random(seed)
    f, g = random_sympoly(rng, nf), random_sympoly(rng, ng)
    prod = shuffle_product(f, g)
    assert prod.nvars == nf + ng and prod.is_symmetric()


@settings(max_examples=5)
@given(st.integers(0, 10**6), st.sampled_from([(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1)]))
def test_associativity_random(seed, shape):
    rng = random.Random(seed)
    a, b, c = (random_sympoly(rng, n) for n in shape)
    assert shuffle_product(shuffle_product(a, b), c) == shuffle_product(a, shuffle_product(b, c))


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_wheel_closure(seed):
    rng = random.Random(seed)
    f, g = random_sympoly(rng, 1), random_sympoly(rng, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert wheel_check(f) and wheel_check(g)
    assert wheel_check(shuffle_product(f, g)) and wheel_check(shuffle_product(g, f))


def test_wheel_examples():
    assert wheel_check(x_l_image(3))
    assert wheel_check(shuffle_product(shuffle_product(one, d_k_image(1)), d_k_image(2)))
    assert not wheel_check(SymPoly.constant(3))
    assert wheel_check(shuffle_product(x_l_image(3), one))
    with pytest.warns(UserWarning):
        assert wheel_check(one)


def test_zeta_roots_sum_to_zero():
    assert sum(ZETA_ROOTS) == 0


def test_x_products_divisible_by_t_powers():
    for a, b in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        prod = shuffle_product(x_l_image(a), x_l_image(b))
        assert prod.is_symmetric()
        assert all(c.degrees()[0] >= 0 and (c.exquo(T ** (a + b)) * T ** (a + b) == c) for c in prod.num.values())


def test_membership_examples():
    m = membership_in_generated(x_l_image(1), 0)
    assert m.is_member and m.certificate == {("D0",): 1}
    m = membership_in_generated(x_l_image(2), 2)
    assert m.is_member
    assert all(sum(int(w[1:]) for w in word) <= 2 for word in m.certificate)
    assert membership_in_generated(parse_sympoly("x1+x2"), 0).status == "undetermined"


def test_text_round_trip():
    for f in [one, x_l_image(2), shuffle_product(one, one), parse_sympoly("x1/(t+ts) + x2/(t+ts)"),
              parse_sympoly("(x1^2+x2^2)*ts/3 - 1/2")]:
        assert parse_sympoly(f.to_text(), f.nvars) == f
    f = parse_sympoly("x1 + x2 + x3", 3)
    assert f.nvars == 3 and parse_sympoly("5", 2) == SymPoly.constant(2, 5)


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_sympoly("x1 + 2*x2")
    with pytest.raises(ValueError):
        parse_sympoly("x1 + x2", 3)
    with pytest.raises(ValueError):
        parse_sympoly("y1 + x1")
    with pytest.raises(ValueError):
        parse_sympoly("1/x1")
    with pytest.raises(ValueError):
        parse_sympoly("x1 ++* 2")
    with pytest.raises(ValueError):
        parse_sympoly("x3", 2)
    with pytest.raises(ShuffleError):
        SymPoly(2, {(1, 0): 1})


def test_coefficient_normal_form():
    a = SymPoly(1, {(1,): (T + TS) * 2}, den=2 * (T + TS))
    assert a == SymPoly(1, {(1,): 1})
    assert a.den == 1
