"""Graded dimensions of the nilpotent COHA: the Kac-table route and the point-count route.

Both routes are compared through one normalization: the z^v coefficient at q = p
is q^(<v,v> + tau) * stack count / (q - 1)^tau.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .kac import Counter, KacTable
from .quiver import Quiver, a2_quiver, ringel_form
from .reps import count_variety
from .series import (TruncSeries, eval_coeff, interpolate_poly, laurent_window, poly_coefficients,
                     product_expansion, u)


@dataclass
class CohaDimSeries:
    quiver: Quiver
    tau: int
    order: int
    series: TruncSeries

    def window(self, K: int) -> dict[tuple, dict[int, Fraction]]:
        """Coefficients expanded down to q^{-K}, keyed by z-exponent."""
        return {e: laurent_window(c, K) for e, c in self.series.terms()}

    def nonnegative_in_window(self, K: int) -> bool:
        return all(x >= 0 and x.denominator == 1 for coeffs in self.window(K).values() for x in coeffs.values())


def exponent_table(table: KacTable) -> dict[tuple, int]:
    """a_{v,r}: coefficient of t^r in the nilpotent Kac polynomial A_v."""
    if table.kind == "full":
        raise ValueError("the COHA product uses a nilpotent Kac table")
    out = {}
    for v, poly in table.entries.items():
        for r, c in enumerate(poly_coefficients(poly)):
            if c:
                out[(v, r)] = int(c)
    return out


def coha_series_from_kac(table: KacTable, tau: int, order: int, q_window: Optional[int] = None) -> CohaDimSeries:
    """(1 - q^-1)^-tau * prod_{v,r,k} (1 - q^{-k-r} z^v)^{-a_{v,r}}.

    With ``q_window`` the literal truncated product is used (see product_expansion)
    and the prefactor is expanded to the same window.
    """
    Q = table.quiver
    a = exponent_table(table)
    if q_window is None:
        prod = product_expansion(a, Q.vertices, order)
        return CohaDimSeries(Q, tau, order, prod.scale((1 - u) ** (-tau)))
    K = q_window
    prod = product_expansion(a, Q.vertices, order, q_window=K)
    pre = sum((comb(tau + n - 1, n) * u**n for n in range(K + 1)), 0 * u) if tau else 1 + 0 * u
    coeffs = {}
    for e, c in prod.coeffs.items():
        win = laurent_window(c * pre, K)
        coeffs[e] = sum((x * u ** (-d) for d, x in win.items()), 0 * u)
    return CohaDimSeries(Q, tau, order, TruncSeries(Q.vertices, order, coeffs, q_window=K))


def declared_table(Q: Quiver, kind: str, entries: dict, primes: Sequence[int] = ()) -> KacTable:
    """Build a KacTable from literal coefficient lists, e.g. {(1,): [1]}."""
    import sympy

    from .series import T_SYMBOL

    polys = {Q.dim(v): sympy.Poly(sum(c * T_SYMBOL**k for k, c in enumerate(cs)), T_SYMBOL, domain="ZZ")
             for v, cs in entries.items()}
    return KacTable(Q, kind, polys, tuple(primes))


def coha_series_from_counts(Q: Quiver, flat: int, v_max, p: int, tau: int,
                            counter: Optional[Counter] = None) -> dict[tuple, Fraction]:
    """z^v coefficient at q = p for every v <= v_max: p^(<v,v>+tau) * stack / (p-1)^tau."""
    import itertools

    counter = counter or count_variety
    v_max = Q.dim(v_max)
    kind = "lambda0" if flat == 0 else "lambda1"
    out = {}
    for v in itertools.product(*(range(x + 1) for x in v_max)):
        if any(v):
            stack = counter(Q, v, p, kind).stack
        else:
            stack = Fraction(1)
        out[v] = Fraction(p) ** (ringel_form(Q, v, v) + tau) * stack / Fraction(p - 1) ** tau
    return dict(sorted(out.items(), key=lambda kv: (sum(kv[0]), kv[0])))


def cross_check(table: KacTable, tau: int, primes: Sequence[int], v_max=None,
                counter: Optional[Counter] = None) -> list[tuple]:
    """Rows (v, p, kac-route value, count-route value, equal?) for every v <= v_max."""
    Q = table.quiver
    v_max = Q.dim(v_max) if v_max is not None else tuple(max(e[k] for e in table.entries) for k in range(Q.n))
    flat = 0 if table.kind == "nilpotent0" else 1
    series = coha_series_from_kac(table, tau, sum(v_max)).series
    rows = []
    for p in primes:
        counts = coha_series_from_counts(Q, flat, v_max, p, tau, counter)
        for v, val in counts.items():
            kac_val = eval_coeff(series[v], p)
            rows.append((v, p, kac_val, val, kac_val == val))
    return rows


def check_a2_remark(p: int, counter: Optional[Counter] = None) -> bool:
    """q^2 |(Lambda/G)(F_q)| equals (2q-1) (q/(q-1))^2 at q = p, for A_2 and v = (1,1)."""
    counter = counter or count_variety
    stack = counter(a2_quiver(), (1, 1), p, "lambda0").stack
    lhs = Fraction(p) ** 2 * stack
    rhs = Fraction(2 * p - 1) * Fraction(p, p - 1) ** 2
    return lhs == rhs


@dataclass
class LeadingTerm:
    degree: int
    leading: Fraction
    polynomial: object
    primes: tuple


def langweil_leading(g: int, v: int, primes: Sequence[int], degree_bound: Optional[int] = None,
                     counter: Optional[Counter] = None) -> LeadingTerm:
    """Degree and leading coefficient of the polynomial fitted to #M(v) for the g-loop quiver.

    The fit uses ``degree_bound`` (default (2g-1)v^2 + 1) and every supplied prime;
    it reports what the data give rather than asserting the expected shape.
    """
    from .quiver import loop_quiver

    counter = counter or count_variety
    Q = loop_quiver(g)
    bound = (2 * g - 1) * v * v + 1 if degree_bound is None else degree_bound
    pts = [(p, counter(Q, (v,), p, "M").raw) for p in primes]
    poly = interpolate_poly(pts, bound)
    lead = poly.LC()
    return LeadingTerm(poly.degree(), Fraction(int(lead.p), int(lead.q)), poly, tuple(primes))
