"""Kac polynomials and nilpotent Kac polynomials by inverting the counting identities.

Full kind::

    sum_v #M(v)/#G(v) * q^<v,v> z^v = Exp( q/(q-1) * sum_v A_v(q) z^v )

Nilpotent kinds (flat = 0 or 1)::

    sum_v #Lambda(v)/#G(v) * q^<v,v> z^v = Exp( sum_v A_v(q^-1)/(1-q^-1) z^v )

Counts are only known at finitely many primes while the Adams operations need
the lower coefficients as functions of q, so the inversion runs degree by
degree: once every A_{v'} with |v'| < |v| is interpolated, the z^v coefficient
of the right-hand side is affine in the unknown A_v(p) at each prime.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
import sympy

from .linalg import batch_rank_mod_p
from .quiver import Quiver, ringel_form
from .reps import CountRecord, count_variety, order_G
from .series import (QF, T_SYMBOL, InterpolationError, TruncSeries, coerce_coeff, eval_coeff,
                     interpolate_poly, matrix_series_inverse, plethystic_exp, poly_coefficients,
                     poly_to_coeff, q, u)

KAC_KINDS = ("full", "nilpotent0", "nilpotent1")
_COUNT_KIND = {"full": "M", "nilpotent0": "lambda0", "nilpotent1": "lambda1"}

Counter = Callable[[Quiver, tuple, int, str], CountRecord]


@dataclass
class KacTable:
    quiver: Quiver
    kind: str
    entries: dict[tuple, sympy.Poly]
    primes: tuple[int, ...]
    degree_bounds: dict[tuple, int] = field(default_factory=dict)

    def coefficients(self, v) -> list[int]:
        return [int(c) for c in poly_coefficients(self.entries[tuple(v)])]

    def to_json(self) -> dict:
        rows = [{"dim": self.quiver.dim_dict(v), "poly": [str(c) for c in self.coefficients(v)]}
                for v in sorted(self.entries, key=lambda e: (sum(e), e))]
        return {"kind": self.kind, "entries": rows, "primes": list(self.primes)}


def _box(v_max: tuple[int, ...]) -> list[tuple[int, ...]]:
    exps = [e for e in itertools.product(*(range(x + 1) for x in v_max)) if any(e)]
    return sorted(exps, key=lambda e: (sum(e), e))


def _degree_bound(Q: Quiver, v) -> int:
    return 1 - ringel_form(Q, v, v)


def _series_from_table(table: KacTable, v_max: tuple[int, ...]) -> TruncSeries:
    """The argument of Exp built from a table (entries outside the box are ignored)."""
    Q = table.quiver
    out = {}
    for v, poly in table.entries.items():
        if all(a <= b for a, b in zip(v, v_max)):
            if table.kind == "full":
                out[v] = q / (q - 1) * poly_to_coeff(poly)
            else:
                out[v] = poly_to_coeff(poly, substitute_inverse=True) / (1 - u)
    return TruncSeries(Q.vertices, sum(v_max), out)


def _extract(Q: Quiver, kind: str, v_max, primes: Sequence[int], counter: Optional[Counter]) -> KacTable:
    counter = counter or count_variety
    v_max = Q.dim(v_max)
    primes = tuple(primes)
    ckind = _COUNT_KIND[kind]
    exps = _box(v_max)
    order = sum(v_max)
    table = KacTable(Q, kind, {}, primes)
    known = TruncSeries(Q.vertices, order)
    for degree in range(1, order + 1):
        level = [v for v in exps if sum(v) == degree]
        E = plethystic_exp(known)
        new = {}
        for v in level:
            bound = _degree_bound(Q, v)
            if len(primes) < bound + 1:
                raise InterpolationError(f"dimension {v} needs {bound + 1} primes for degree bound {bound}")
            pts = []
            for p in primes:
                rec = counter(Q, v, p, ckind)
                lhs = rec.stack * Fraction(p) ** ringel_form(Q, v, v)
                rest = lhs - eval_coeff(E[v], p)
                if kind == "full":
                    pts.append((p, rest * Fraction(p - 1, p)))
                else:
                    pts.append((Fraction(1, p), rest * (1 - Fraction(1, p))))
            poly = interpolate_poly(pts, bound, require_integral=True, symbol=T_SYMBOL)
            table.entries[v] = sympy.Poly(poly.as_expr(), T_SYMBOL, domain="ZZ")
            table.degree_bounds[v] = bound
            new[v] = table.entries[v]
        for v, poly in new.items():
            if kind == "full":
                coeff = q / (q - 1) * poly_to_coeff(poly)
            else:
                coeff = poly_to_coeff(poly, substitute_inverse=True) / (1 - u)
            known = known + TruncSeries(Q.vertices, order, {v: coeff})
    return table


def extract_full_kac(Q: Quiver, v_max, primes: Sequence[int], counter: Optional[Counter] = None) -> KacTable:
    """Kac polynomials A_v for all 0 < v <= v_max from moment-map fiber counts."""
    return _extract(Q, "full", v_max, primes, counter)


def extract_nilpotent_kac(Q: Quiver, flat: int, v_max, primes: Sequence[int],
                          counter: Optional[Counter] = None) -> KacTable:
    """Nilpotent Kac polynomials from semi-nilpotent (flat=0) or strongly semi-nilpotent (flat=1) counts."""
    if flat not in (0, 1):
        raise ValueError("flat must be 0 or 1")
    return _extract(Q, f"nilpotent{flat}", v_max, primes, counter)


def predict_count(Q: Quiver, v, kind: str, table: KacTable, fresh_prime: int) -> int:
    """Run the identity forward: predicted raw count of the variety of the given kind at a prime.

    ``kind`` is a variety kind ("M", "lambda0", "lambda1"); it must match the table.
    """
    v = Q.dim(v)
    expected = _COUNT_KIND[table.kind]
    if kind != expected:
        raise ValueError(f"a {table.kind} table predicts {expected} counts, not {kind}")
    missing = [e for e in _box(v) if e not in table.entries]
    if missing:
        raise ValueError(f"table lacks dimensions {missing}")
    E = plethystic_exp(_series_from_table(table, v))
    p = fresh_prime
    value = eval_coeff(E[v], p) * order_G(v, p) / Fraction(p) ** ringel_form(Q, v, v)
    if value.denominator != 1:
        raise ArithmeticError(f"predicted count {value} is not an integer")
    return int(value)


def kac_sanity(full: Optional[KacTable] = None, nil0: Optional[KacTable] = None,
               nil1: Optional[KacTable] = None) -> list[tuple[str, bool, str]]:
    """Checks reported (not raised): monic of degree 1-<v,v> for the full kind,
    nonnegative integer coefficients, and equal values at t = 1 across kinds."""
    report = []
    tables = [t for t in (full, nil0, nil1) if t is not None]
    for tab in tables:
        for v, poly in sorted(tab.entries.items()):
            coeffs = poly_coefficients(poly)
            ok = all(c.is_integer and c >= 0 for c in coeffs)
            report.append((f"{tab.kind} {v} nonnegative integer coefficients", ok, str(poly.as_expr())))
    if full is not None:
        for v, poly in sorted(full.entries.items()):
            if poly.is_zero:
                continue
            deg = _degree_bound(full.quiver, v)
            ok = poly.degree() == deg and poly.LC() == 1
            report.append((f"full {v} monic of degree {deg}", ok, str(poly.as_expr())))
    common = set.intersection(*(set(t.entries) for t in tables)) if tables else set()
    for v in sorted(common):
        vals = [int(t.entries[v].eval(1)) for t in tables]
        report.append((f"{v} values at t=1 agree across {[t.kind for t in tables]}", len(set(vals)) == 1,
                       str(vals)))
    return report


# -- preprojective Hilbert series ----------------------------------------------

@dataclass
class HilbertReport:
    matrix: list[list[list[Fraction]]]
    sign: int
    identity_vanishes: bool
    printed_sign_identity_vanishes: bool
    printed_sign_min_coefficient: Fraction


def _hilbert_matrix(Q: Quiver, order: int, sign: int):
    A = [[a + b for a, b in zip(row, col)] for row, col in zip(Q.adjacency(), zip(*Q.adjacency()))]
    n = Q.n
    M = [[[int(i == j), sign * A[i][j], int(i == j)] for j in range(n)] for i in range(n)]
    return A, matrix_series_inverse(M, order)


def _euler_defect(A, H, order: int) -> bool:
    """-H + H^2 - t H A H + t^2 H^2 vanishes through t^order."""
    n = len(A)

    def mul(X, Y):
        return [[[sum(X[i][k][a] * Y[k][j][d - a] for k in range(n) for a in range(d + 1))
                  for d in range(order + 1)] for j in range(n)] for i in range(n)]

    AH = [[[sum(A[i][k] * H[k][j][d] for k in range(n)) for d in range(order + 1)] for j in range(n)]
          for i in range(n)]
    HH = mul(H, H)
    HAH = mul(H, AH)
    for i in range(n):
        for j in range(n):
            for d in range(order + 1):
                val = -H[i][j][d] + HH[i][j][d]
                if d >= 1:
                    val -= HAH[i][j][d - 1]
                if d >= 2:
                    val += HH[i][j][d - 2]
                if val != 0:
                    return False
    return True


def preprojective_hilbert_series(Q: Quiver, order: int) -> HilbertReport:
    """Inverse of (Id - t(Q + Q^T) + t^2 Id) through t^order, plus the Euler-identity check.

    The same check is run on the plus-sign matrix (Id + t(Q + Q^T) + t^2 Id)^{-1};
    its outcome and its smallest coefficient are recorded for comparison.
    """
    A, H = _hilbert_matrix(Q, order, -1)
    _, Hplus = _hilbert_matrix(Q, order, +1)
    return HilbertReport(
        matrix=H, sign=-1,
        identity_vanishes=_euler_defect(A, H, order),
        printed_sign_identity_vanishes=_euler_defect(A, Hplus, order),
        printed_sign_min_coefficient=min(c for row in Hplus for e in row for c in e),
    )


def preprojective_dims_by_paths(Q: Quiver, order: int, prime: int = 2**31 - 1) -> list[list[list[int]]]:
    """Graded dimensions of e_j Pi e_i by linear algebra on paths of the double quiver.

    Degree-n paths from i to j modulo the span of (path) * relation * (path);
    ranks are taken modulo a large prime. Entry [i][j][n].
    """
    n_v = Q.n
    arrows = Q.arrow_indices()
    dbl = arrows + [(t, s) for s, t in arrows]  # index h + m is the reverse of h
    m = len(arrows)
    paths_by_deg: list[dict] = [{((), k): None for k in range(n_v)}]
    # a path is (arrow tuple, start vertex); its end is tracked separately
    def end(path):
        arrs, start = path
        return dbl[arrs[-1]][1] if arrs else start

    for d in range(1, order + 1):
        nxt = {}
        for path in paths_by_deg[-1]:
            e = end(path)
            for a, (s, t) in enumerate(dbl):
                if s == e:
                    nxt[(path[0] + (a,), path[1])] = None
        paths_by_deg.append(nxt)
    relation = {k: [] for k in range(n_v)}
    for h, (s, t) in enumerate(arrows):
        relation[t].append(((h + m, h), 1))   # x_h x_h* : traverse h* then h, at the target
        relation[s].append(((h, h + m), -1))  # x_h* x_h : traverse h then h*, at the source
    out = [[[0] * (order + 1) for _ in range(n_v)] for _ in range(n_v)]
    for d in range(order + 1):
        paths = list(paths_by_deg[d])
        index = {p: k for k, p in enumerate(paths)}
        gens = []
        if d >= 2:
            for a in range(d - 1):
                for pre in paths_by_deg[a]:
                    k = end(pre)
                    for post in paths_by_deg[d - 2 - a]:
                        if post[1] != k or not relation[k]:
                            continue
                        row = np.zeros(len(paths), dtype=np.int64)
                        for (r1, r2), sgn in relation[k]:
                            row[index[(pre[0] + (r1, r2) + post[0], pre[1])]] += sgn
                        gens.append(row)
        for i in range(n_v):
            for j in range(n_v):
                cols = [k for k, p in enumerate(paths) if p[1] == i and end(p) == j]
                if not cols:
                    continue
                rank = 0
                if gens:
                    sub = np.array([g[cols] for g in gens], dtype=np.int64)
                    sub = sub[np.any(sub != 0, axis=1)]
                    if len(sub):
                        rank = int(batch_rank_mod_p(sub[None, :, :], prime)[0])
                out[i][j][d] = len(cols) - rank
    return out
