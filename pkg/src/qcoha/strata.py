"""Dimension formulas for strata of framed quiver varieties, Hecke correspondences and
nilpotent flag varieties, plus the lift of framed representations to the bipartite quiver.

A framed representation is stored as a Representation of the framed quiver with the
framing vertex of dimension 1, so the arrows from the framing vertex carry the
columns of a : W -> V. Its moment map ignores the framing vertex component.
"""
from __future__ import annotations

import csv
import io
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import Matrix, PrimeField, kernel, rank
from .quiver import (FRAMING_VERTEX, Composition, Quiver, bipartite_quiver, bipartite_vertex, compositions,
                     d_vw, framed_euler_closed_form, framed_quiver, loop_quiver)
from .reps import Representation, moment_map

log = logging.getLogger(__name__)


# -- representation types ----------------------------------------------------

@dataclass(frozen=True)
class RepPart:
    multiplicity: int
    dim: tuple[int, ...]
    framing: int  # 0 or 1: coefficient of the framing vertex in the lifted dimension


@dataclass(frozen=True)
class RepType:
    quiver: Quiver
    w: tuple[int, ...]
    parts: tuple[RepPart, ...]

    def __post_init__(self):
        framed = [p for p in self.parts if p.framing]
        if any(p.multiplicity < 1 for p in self.parts):
            raise ValueError("multiplicities must be positive")
        if any(p.framing not in (0, 1) for p in self.parts):
            raise ValueError("framing coefficient must be 0 or 1")
        if len(framed) > 1 or (framed and framed[0].multiplicity != 1):
            raise ValueError("at most one part carries the framing, with multiplicity 1")
        if any(self.w) and not framed:
            raise ValueError("a nonzero framing must be carried by one part")
        for p in self.parts:
            if len(p.dim) != self.quiver.n:
                raise ValueError(f"part dimension {p.dim} does not match the quiver")

    @classmethod
    def build(cls, Q: Quiver, w, parts: Sequence) -> "RepType":
        """parts: (multiplicity, dim) or (multiplicity, dim, framing)."""
        out = []
        for p in parts:
            m, d = p[0], Q.dim(p[1])
            out.append(RepPart(int(m), d, int(p[2]) if len(p) > 2 else 0))
        return cls(Q, Q.dim(w), tuple(out))

    @property
    def total(self) -> tuple[tuple[int, ...], int]:
        v = [0] * self.quiver.n
        a = 0
        for p in self.parts:
            for k, x in enumerate(p.dim):
                v[k] += p.multiplicity * x
            a += p.multiplicity * p.framing
        return tuple(v), a

    def direct_sum(self, other: "RepType") -> "RepType":
        """Concatenate the part lists; parts are not merged."""
        if other.quiver != self.quiver:
            raise ValueError("types over different quivers")
        w = self.w if any(p.framing for p in self.parts) else other.w
        if any(p.framing for p in self.parts) and any(p.framing for p in other.parts):
            raise ValueError("both summands carry the framing")
        return RepType(self.quiver, w, self.parts + other.parts)


def dim_M0_stratum(Q: Quiver, tau: RepType) -> int:
    """Sum over parts of 2 - (u, u) in the framed quiver."""
    if tau.quiver != Q:
        raise ValueError("type belongs to another quiver")
    return sum(2 - framed_euler_closed_form(Q, tau.w, p.dim, p.framing, p.dim, p.framing) for p in tau.parts)


# -- flag and Hecke dimensions ----------------------------------------------

def _pairs(parts: Sequence[int]) -> int:
    return sum(parts[a] * parts[b] for a in range(len(parts)) for b in range(a + 1, len(parts)))


def _one_vertex_parts(nu) -> tuple[int, ...]:
    if isinstance(nu, Composition):
        return tuple(p[0] for p in nu.parts)
    return tuple(int(x[0]) if isinstance(x, (tuple, list)) else int(x) for x in nu)


def lambda_flag_dim(g: int, v: int, nu) -> int:
    """g v^2 - sum_{a<b} nu_a nu_b for a composition of v on the g-loop quiver."""
    if g < 2:
        raise ValueError("the formula is stated for g >= 2 loops")
    parts = _one_vertex_parts(nu)
    if sum(parts) != v or any(x <= 0 for x in parts):
        raise ValueError(f"{parts} is not a composition of {v}")
    return g * v * v - _pairs(parts)


def lambda_prime_dim(g: int, n1: int, l: int, nu) -> int:
    """g (n1 + l)^2 - sum_{a<b} nu_a nu_b - n1 l."""
    parts = _one_vertex_parts(nu)
    if sum(parts) != l:
        raise ValueError(f"{parts} is not a composition of {l}")
    return g * (n1 + l) ** 2 - _pairs(parts) - n1 * l


def parabolic_dim(blocks: Sequence[int]) -> int:
    """Dimension of the block upper-triangular parabolic: sum_{s<=t} b_s b_t."""
    return sum(blocks[s] * blocks[t] for s in range(len(blocks)) for t in range(s, len(blocks)))


def hecke_dim(Q: Quiver, v1, v2, w) -> int:
    """d_{v,w}/2 + d_{v1,w}/2 with v = v1 + v2."""
    v1, v2 = Q.dim(v1), Q.dim(v2)
    v = tuple(a + b for a, b in zip(v1, v2))
    total = Fraction(d_vw(Q, v, w), 2) + Fraction(d_vw(Q, v1, w), 2)
    if total.denominator != 1:
        raise AssertionError(f"non-integral Hecke dimension {total}")
    return int(total)


def hecke_stratum_dim(g: int, v1: int, w: int, nu, n1: int, n2: int) -> int:
    """d(n1, n2) on the g-loop quiver, where pairings use (a, b) = (2 - 2g) a b.

    d = d_{v1,w}/2 + d_{v,w}/2 + dim P - w n2 + (n2, v1 - n2) + (n1, n2 - n1/2) + [n1 < n2],
    with v = v1 + |nu| and P the parabolic of block sizes (v1, nu_1, ..., nu_r).
    """
    parts = _one_vertex_parts(nu)
    if not 0 <= n1 <= n2 <= v1:
        raise ValueError(f"need 0 <= n1 <= n2 <= v1, got n1={n1}, n2={n2}, v1={v1}")
    if min(v1, w, *parts, 0) < 0 or any(x <= 0 for x in parts):
        raise ValueError("dimensions must be nonnegative and composition parts positive")
    Q = loop_quiver(g)
    c = 2 - 2 * g
    v = v1 + sum(parts)
    total = (Fraction(d_vw(Q, v1, w), 2) + Fraction(d_vw(Q, v, w), 2) + parabolic_dim((v1,) + parts)
             - w * n2 + c * n2 * (v1 - n2) + c * n1 * (n2 - Fraction(n1, 2)) + (1 if n1 < n2 else 0))
    if total.denominator != 1:
        raise AssertionError(f"non-integral stratum dimension {total}")
    return int(total)


@dataclass
class ScanResult:
    rows: list[dict]
    excluded: list[dict]

    @property
    def violations(self) -> list[dict]:
        return [r for r in self.rows if not r["ok"]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields = ["g", "v1", "l", "w", "nu", "n1", "n2", "d", "d00", "ok"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in self.rows:
            writer.writerow({k: r[k] for k in fields})
        return buf.getvalue()


def strata_scan(g_values: Sequence[int] = (2, 3), v1_max: int = 4, l_max: int = 3, w_max: int = 3) -> ScanResult:
    """Check d(n1, n2) < d(0, 0) for (n1, n2) != (0, 0), over the whole grid.

    On a one-vertex quiver the side condition reduces to w > 0; grid points with
    w = 0 are excluded and logged.
    """
    rows, excluded = [], []
    for g in g_values:
        for v1 in range(v1_max + 1):
            for l in range(1, l_max + 1):
                for nu in compositions(l, restricted=False):
                    parts = _one_vertex_parts(nu)
                    for w in range(w_max + 1):
                        if w == 0:
                            excluded.append({"g": g, "v1": v1, "l": l, "w": w, "nu": parts})
                            continue
                        d00 = hecke_stratum_dim(g, v1, w, parts, 0, 0)
                        for n2 in range(v1 + 1):
                            for n1 in range(n2 + 1):
                                d = hecke_stratum_dim(g, v1, w, parts, n1, n2)
                                ok = d == d00 if n1 == n2 == 0 else d < d00
                                rows.append({"g": g, "v1": v1, "l": l, "w": w, "nu": "-".join(map(str, parts)),
                                             "n1": n1, "n2": n2, "d": d, "d00": d00, "ok": ok})
    if excluded:
        log.info("excluded %d grid points with w = 0", len(excluded))
    return ScanResult(rows, excluded)


# -- framed representations and the bipartite lift ---------------------------

class PreconditionError(ValueError):
    pass


def framed_moment_map(rep: Representation) -> tuple[Matrix, ...]:
    """Moment map components at the non-framing vertices."""
    mu = moment_map(rep)
    return tuple(m for name, m in zip(rep.quiver.vertices, mu) if name != FRAMING_VERTEX)


def _framing_dim(Q: Quiver, v, w) -> tuple:
    FQ = framed_quiver(Q, w)
    return FQ, FQ.lift(v, 1)


def framed_zero(Q: Quiver, v, w, p: int) -> Representation:
    FQ, vt = _framing_dim(Q, v, w)
    return Representation.zero(FQ.quiver, vt, p)


def diamond_dims(Q: Quiver, v, w) -> tuple[Quiver, tuple, tuple]:
    v, w = Q.dim(v), Q.dim(w)
    B = bipartite_quiver(Q)
    vd = B.dim({bipartite_vertex(i, k): v[n] for n, i in enumerate(Q.vertices) for k in (1, 2)})
    wd = B.dim({bipartite_vertex(i, 1): w[n] for n, i in enumerate(Q.vertices)})
    return B, vd, wd


def diamond_lift(Q: Quiver, w, rep: Representation, g: Sequence[Matrix]) -> Representation:
    """Lift a framed representation with vanishing moment map along an invertible g.

    x_h -> g_{h''} x_h, x_{h*} -> x_{h*} g_{h''}^{-1}, x_i -> g_i,
    x_{i*} -> -sum_{h''=i} g_i^{-1} x_h x_{h*} g_i^{-1} (after the first two
    substitutions), framing unchanged on the first copy of each vertex.
    The result is checked to have vanishing moment map and invertible x_i.
    """
    w = Q.dim(w)
    FQ = framed_quiver(Q, w)
    if rep.quiver != FQ.quiver:
        raise PreconditionError("representation is not over the framed quiver")
    F = rep.field
    v = tuple(rep.dim[FQ.quiver.index[i]] for i in Q.vertices)
    if rep.dim[FQ.quiver.index[FRAMING_VERTEX]] != 1:
        raise PreconditionError("framing vertex must have dimension 1")
    if any(not m.is_zero() for m in framed_moment_map(rep)):
        raise PreconditionError("moment map of the input does not vanish")
    if len(g) != Q.n:
        raise PreconditionError("one matrix per vertex is required")
    ginv = []
    for m, n in zip(g, v):
        if (m.rows, m.cols) != (n, n) or rank(m) != n:
            raise PreconditionError("g must be invertible at every vertex")
        ginv.append(m.inverse() if n else m)

    B, vd, wd = diamond_dims(Q, v, w)
    FB = framed_quiver(B, wd)
    nQ = len(Q.arrows)
    xd, xsd = [], []
    for k, (s, t) in enumerate(Q.arrow_indices()):
        xd.append(g[t] @ rep.x[k])
        xsd.append(rep.xs[k] @ ginv[t])
    for i in range(Q.n):
        acc = Matrix.zeros(F, v[i], v[i])
        for k, (s, t) in enumerate(Q.arrow_indices()):
            if t == i:
                acc = acc + xd[k] @ xsd[k]
        xd.append(g[i])
        xsd.append(-(ginv[i] @ acc))
    # framing arrows: both framed quivers list them per vertex in vertex order
    xd.extend(rep.x[nQ:])
    xsd.extend(rep.xs[nQ:])
    vt = FB.lift(vd, 1)
    out = Representation(FB.quiver, vt, F, tuple(xd), tuple(xsd))
    if any(not m.is_zero() for m in framed_moment_map(out)):
        raise AssertionError("lifted representation has nonzero moment map")
    return out


def _random_matrix(F: PrimeField, rows: int, cols: int, rng: random.Random) -> Matrix:
    return Matrix(F, [[rng.randrange(F.p) for _ in range(cols)] for _ in range(rows)], cols)


def random_invertible(F: PrimeField, n: int, rng: random.Random) -> Matrix:
    while True:
        m = _random_matrix(F, n, n, rng)
        if rank(m) == n:
            return m


def random_mu_zero(Q: Quiver, v, w, p: int, rng: random.Random) -> Representation:
    """Random x and a, then a uniformly random (x*, a*) in the kernel of the moment map."""
    FQ, vt = _framing_dim(Q, v, w)
    R = FQ.quiver
    F = PrimeField(p)
    arrows = R.arrow_indices()
    x = tuple(_random_matrix(F, vt[t], vt[s], rng) for s, t in arrows)
    shapes = [(vt[s], vt[t]) for s, t in arrows]
    nunk = sum(r * c for r, c in shapes)

    def build(vec) -> tuple[Matrix, ...]:
        out, pos = [], 0
        for r, c in shapes:
            out.append(Matrix(F, [vec[pos + k * c: pos + (k + 1) * c] for k in range(r)], c))
            pos += r * c
        return tuple(out)

    def mu_vec(vec) -> list[int]:
        rep = Representation(R, vt, F, x, build(vec))
        return [e for m in framed_moment_map(rep) for row in m.data for e in row]

    cols = [mu_vec([int(k == j) for k in range(nunk)]) for j in range(nunk)]
    nrows = len(cols[0]) if cols else 0
    if nunk == 0 or nrows == 0:
        sol = [rng.randrange(p) for _ in range(nunk)]
    else:
        L = Matrix(F, [[cols[j][r] for j in range(nunk)] for r in range(nrows)], nunk)
        basis = kernel(L)
        sol = [0] * nunk
        for b in basis:
            c = rng.randrange(p)
            sol = [(a + c * e) % p for a, e in zip(sol, b)]
    return Representation(R, vt, F, x, build(sol))


@dataclass
class LiftTrial:
    v: tuple
    w: tuple
    ok: bool
    detail: str = ""


def diamond_trials(Q: Quiver, p: int, trials: int, v_choices: Sequence, w_choices: Sequence,
                   seed: Optional[int] = 0) -> list[LiftTrial]:
    """Random moment-map-zero framed samples pushed through diamond_lift."""
    rng = random.Random(seed)
    F = PrimeField(p)
    out = []
    for _ in range(trials):
        v = Q.dim(rng.choice(list(v_choices)))
        w = Q.dim(rng.choice(list(w_choices)))
        rep = random_mu_zero(Q, v, w, p, rng)
        g = [random_invertible(F, n, rng) for n in v]
        try:
            lifted = diamond_lift(Q, w, rep, g)
            heart = all(rank(lifted.x[len(Q.arrows) + i]) == v[i] for i in range(Q.n))
            out.append(LiftTrial(v, w, heart, "" if heart else "x_i not invertible"))
        except (AssertionError, PreconditionError) as exc:
            out.append(LiftTrial(v, w, False, str(exc)))
    return out
