import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcoha.quiver import (FRAMING_VERTEX, Quiver, QuiverError, a2_quiver, antidominant_leq, bipartite_quiver,
                          compositions, d_v, d_vw, double_quiver, euler_form, framed_euler_closed_form,
                          framed_quiver, graded_quiver, is_acyclic, is_generic_character, jordan_quiver,
                          loop_quiver, ringel_form)

QUIVERS = [jordan_quiver(), a2_quiver(), loop_quiver(2), Quiver(["i", "j"], [("i", "j"), ("j", "i")]),
           Quiver(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "c"), ("a", "c")])]


def vec(n, hi=3):
    return st.lists(st.integers(0, hi), min_size=n, max_size=n).map(tuple)


def test_ringel_examples():
    assert ringel_form(jordan_quiver(), 1, 1) == 0
    assert ringel_form(a2_quiver(), (1, 1), (1, 1)) == 1
    for g in range(4):
        for n in range(4):
            assert ringel_form(loop_quiver(g), n, n) == (1 - g) * n * n


def test_dimension_examples():
    J, A = jordan_quiver(), a2_quiver()
    assert all(d_v(J, n) == n * n for n in range(5))
    assert d_vw(A, (1, 1), (1, 1)) == 2
    assert d_vw(loop_quiver(2), 1, 1) == 4


def test_dimension_vectors_normalize():
    A = a2_quiver()
    assert A.dim({"j": 2}) == (0, 2) == A.dim([0, 2])
    with pytest.raises(QuiverError):
        A.dim(1)
    with pytest.raises(QuiverError):
        A.dim({"k": 1})
    with pytest.raises(QuiverError):
        A.dim((1, -1))
    with pytest.raises(QuiverError):
        Quiver(["i"], [("i", "j")])


def test_json_round_trip():
    for Q in QUIVERS:
        assert Quiver.from_json(Q.to_json()) == Q
    Q = Quiver.from_json('{"vertices":["i","j"],"arrows":[{"src":"i","tgt":"j"},{"src":"i","tgt":"i"}]}')
    assert Q.loops("i") == 1 and Q.loops("j") == 0


@pytest.mark.parametrize("Q", QUIVERS, ids=lambda Q: repr(Q))
@given(data=st.data())
def test_forms_bilinear_and_symmetric(Q, data):
    v, v2, w = (data.draw(vec(Q.n)) for _ in range(3))
    a, b = data.draw(st.integers(-3, 3)), data.draw(st.integers(-3, 3))
    combo = tuple(a * x + b * y for x, y in zip(v, v2))
    # the forms are polynomial in the entries, so signed combinations are fine to evaluate directly

    def ringel(x, y):
        return sum(p * q for p, q in zip(x, y)) - sum(x[s] * y[t] for s, t in Q.arrow_indices())
    assert ringel(combo, w) == a * ringel(v, w) + b * ringel(v2, w)
    assert ringel(v, w) == ringel_form(Q, v, w)
    assert euler_form(Q, v, w) == euler_form(Q, w, v)
    assert ringel_form(Q.opposite(), v, w) == ringel_form(Q, w, v)
    assert euler_form(Q, v, v) % 2 == 0


@pytest.mark.parametrize("Q", QUIVERS, ids=lambda Q: repr(Q))
@given(data=st.data())
def test_framed_form_closed_form(Q, data):
    w, v, v2 = (data.draw(vec(Q.n)) for _ in range(3))
    a, a2 = data.draw(st.integers(0, 2)), data.draw(st.integers(0, 2))
    FQ = framed_quiver(Q, w)
    lhs = euler_form(FQ.quiver, FQ.lift(v, a), FQ.lift(v2, a2))
    assert lhs == framed_euler_closed_form(Q, w, v, a, v2, a2)
    # the single aa' variant is off by exactly aa'
    assert lhs - framed_euler_closed_form(Q, w, v, a, v2, a2, framing_coefficient=1) == a * a2


def test_framed_examples():
    FQ = framed_quiver(a2_quiver(), (1, 0))
    assert FQ.quiver.n == 3 and len(FQ.quiver.arrows) == 2
    assert FRAMING_VERTEX in FQ.quiver.index
    J = jordan_quiver()
    FJ = framed_quiver(J, 1)
    assert framed_euler_closed_form(J, 1, 1, 0, 1, 0) == euler_form(J, 1, 1)
    # with one aa' term the formula gives -1; the framed quiver itself gives 0
    assert framed_euler_closed_form(J, 1, 1, 1, 1, 1, framing_coefficient=1) == -1
    assert euler_form(FJ.quiver, FJ.lift(1), FJ.lift(1)) == 0
    assert FQ.lift((1, 1)) == FQ.quiver.dim({"i": 1, "j": 1, FRAMING_VERTEX: 1})
    assert framed_quiver(a2_quiver(), (0, 0)).lift((1, 1)) == (1, 1, 0)


def test_transforms():
    J = jordan_quiver()
    B = bipartite_quiver(J)
    assert B.n == 2 and len(B.arrows) == 2 and is_acyclic(B)
    A = bipartite_quiver(a2_quiver())
    assert A.n == 4 and sorted(A.arrows) == [("i.1", "i.2"), ("i.1", "j.2"), ("j.1", "j.2")]
    cyc = bipartite_quiver(Quiver(["i", "j"], [("i", "j"), ("j", "i")]))
    assert sorted(cyc.arrows) == [("i.1", "i.2"), ("i.1", "j.2"), ("j.1", "i.2"), ("j.1", "j.2")]
    for Q in QUIVERS:
        assert len(double_quiver(Q).arrows) == 2 * len(Q.arrows)
        assert is_acyclic(bipartite_quiver(Q))


def test_graded_quiver_levels():
    G = graded_quiver(jordan_quiver(), 0, 2)
    assert G.n == 3
    level = {name: int(name.split("@")[1]) for name in G.vertices}
    omega = G.arrows[:2]
    assert all(level[s] - 1 == level[t] for s, t in omega)
    assert all(level[s] == level[t] for s, t in G.arrows[2:])
    with pytest.raises(QuiverError):
        graded_quiver(jordan_quiver(), 1, 0)


def test_compositions_examples():
    parts = [tuple(p[0] for p in c.parts) for c in compositions(3, True)]
    assert parts == [(3,), (2, 1), (1, 2), (1, 1, 1)]
    A = compositions((1, 1), True, )
    assert sorted(c.parts for c in A) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]
    assert len(compositions((1, 1), False)) == 3
    assert antidominant_leq((2, 1), (1, 2))
    assert not antidominant_leq((1, 2), (2, 1))


@pytest.mark.parametrize("n", range(1, 8))
def test_composition_counts(n):
    comps = compositions(n, True)
    assert len(comps) == 2 ** (n - 1)
    assert len({c.parts for c in comps}) == len(comps)
    assert all(sum(p[0] for p in c.parts) == n for c in comps)


def test_composition_limit():
    with pytest.raises(QuiverError):
        compositions(30, True, limit=1000)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=4), st.lists(st.integers(1, 3), min_size=1, max_size=4))
def test_antidominant_is_partial_order(mu, nu):
    assert antidominant_leq(mu, mu)
    if sum(mu) == sum(nu) and antidominant_leq(mu, nu) and antidominant_leq(nu, mu):
        assert list(itertools.accumulate(mu))[:min(len(mu), len(nu))] == \
            list(itertools.accumulate(nu))[:min(len(mu), len(nu))]


def test_genericity_examples():
    A = a2_quiver()
    assert is_generic_character(A, (-1, -1), (1, 2), (1, 0))
    assert not is_generic_character(A, (0, 0), (1, 1), (1, 0))
    B = Quiver(["i.1", "i.2"], [("i.1", "i.2")])
    assert is_generic_character(B, (10, -9), (1, 1), (1, 0))


@given(vec(2, 3), st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_genericity_matches_box_search(v, theta):
    A = a2_quiver()
    tv = sum(t * x for t, x in zip(theta, v))
    bad = False
    for u in itertools.product(*(range(x + 1) for x in v)):
        tu = sum(t * x for t, x in zip(theta, u))
        if (any(u) and tu == 0) or (u != tuple(v) and tu - tv == 0):
            bad = True
    assert is_generic_character(A, theta, v, (1, 0)) == (not bad)
