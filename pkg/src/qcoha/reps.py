"""Representations of double quivers over F_p, membership in the semi-nilpotent
varieties, and brute-force point counts.

A representation stores one matrix per arrow h (``x[h]``, from V_{h'} to V_{h''})
and one per reversed arrow (``xs[h]``, from V_{h''} to V_{h'}).
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .linalg import Matrix, PrimeField, Subspace, batch_rank_mod_p, kernel, largest_stable_inside, \
    smallest_stable_containing
from .quiver import DimLike, Quiver, ringel_form

KINDS = ("M", "lambda0", "lambda1", "rep")
DEFAULT_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    """Raised before an enumeration whose size exceeds the configured budget."""

    def __init__(self, required: int, budget: int, what: str):
        super().__init__(f"{what} needs {required} enumeration steps, budget is {budget}")
        self.required = required
        self.budget = budget


def enumeration_budget(budget: Optional[int] = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("QCOHA_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    dim: tuple[int, ...]
    field: PrimeField
    x: tuple[Matrix, ...]
    xs: tuple[Matrix, ...]

    def __post_init__(self):
        Q, v = self.quiver, self.dim
        if len(self.x) != len(Q.arrows) or len(self.xs) != len(Q.arrows):
            raise ValueError("one matrix per arrow and per reversed arrow is required")
        for (s, t), a, b in zip(Q.arrow_indices(), self.x, self.xs):
            if (a.rows, a.cols) != (v[t], v[s]) or (b.rows, b.cols) != (v[s], v[t]):
                raise ValueError("matrix shape does not match the dimension vector")
            if a.field != self.field or b.field != self.field:
                raise ValueError("all matrices must live over one prime field")

    @classmethod
    def from_lists(cls, Q: Quiver, v: DimLike, p: int, x: Sequence, xs: Sequence) -> "Representation":
        F = PrimeField(p)
        v = Q.dim(v)
        xm = tuple(Matrix(F, m, v[s]) for m, (s, _) in zip(x, Q.arrow_indices()))
        xsm = tuple(Matrix(F, m, v[t]) for m, (_, t) in zip(xs, Q.arrow_indices()))
        return cls(Q, v, F, xm, xsm)

    @classmethod
    def zero(cls, Q: Quiver, v: DimLike, p: int) -> "Representation":
        F = PrimeField(p)
        v = Q.dim(v)
        return cls(Q, v, F, tuple(Matrix.zeros(F, v[t], v[s]) for s, t in Q.arrow_indices()),
                   tuple(Matrix.zeros(F, v[s], v[t]) for s, t in Q.arrow_indices()))


def moment_map(rep: Representation) -> tuple[Matrix, ...]:
    """Per-vertex matrices: sum over h with target k of x_h x_h* minus sum over h with source k of x_h* x_h."""
    F, v = rep.field, rep.dim
    out = [Matrix.zeros(F, n, n) for n in v]
    for (s, t), a, b in zip(rep.quiver.arrow_indices(), rep.x, rep.xs):
        out[t] = out[t] + (a @ b)
        out[s] = out[s] - (b @ a)
    return tuple(out)


# -- total-space form used by the membership tests --------------------------

class _Total:
    """Representation flattened onto V = sum of V_i, with vertex labels per coordinate."""

    __slots__ = ("F", "labels", "x", "xs", "loops")

    def __init__(self, F, labels, x, xs, loops):
        self.F, self.labels, self.x, self.xs, self.loops = F, labels, x, xs, loops

    @classmethod
    def from_rep(cls, rep: Representation) -> "_Total":
        F, v = rep.field, rep.dim
        n = sum(v)
        offs = list(itertools.accumulate((0,) + v[:-1]))
        labels = tuple(k for k, m in enumerate(v) for _ in range(m))

        def embed(M: Matrix, src: int, tgt: int) -> Matrix:
            rows = [[0] * n for _ in range(n)]
            for r in range(M.rows):
                for c in range(M.cols):
                    rows[offs[tgt] + r][offs[src] + c] = M.data[r][c]
            return Matrix._raw(F, tuple(tuple(r) for r in rows), n)

        arrows = rep.quiver.arrow_indices()
        x = tuple(embed(a, s, t) for a, (s, t) in zip(rep.x, arrows))
        xs = tuple(embed(b, t, s) for b, (s, t) in zip(rep.xs, arrows))
        loops = tuple(s == t for s, t in arrows)
        return cls(F, labels, x, xs, loops)

    @property
    def n(self) -> int:
        return len(self.labels)

    def quotient(self, W: Subspace) -> "_Total":
        cols = W.complement_columns()
        F = self.F

        def induced(A: Matrix) -> Matrix:
            images = [W.quotient_coords([A.data[r][c] for r in range(A.rows)]) for c in cols]
            return Matrix._raw(F, tuple(zip(*images)) if images else (), len(cols)) if images else \
                Matrix.zeros(F, 0, 0)

        return _Total(F, tuple(self.labels[c] for c in cols), tuple(induced(A) for A in self.x),
                      tuple(induced(B) for B in self.xs), self.loops)

    def key(self):
        return (self.labels, tuple(A.data for A in self.x), tuple(B.data for B in self.xs))


def _common_kernel(ops: Sequence[Matrix], n: int, F) -> Subspace:
    rows = tuple(r for A in ops for r in A.data)
    if not rows:
        return Subspace.full(F, n)
    return Subspace(F, n, kernel(Matrix._raw(F, rows, n)))


def _lambda0(T: _Total) -> bool:
    while T.n:
        K = _common_kernel(T.x, T.n, T.F)
        W = largest_stable_inside(T.xs, K)
        if W.dim == 0:
            return False
        T = T.quotient(W)
    return True


def _restricted_steps(T: _Total) -> list[Subspace]:
    """Maximal admissible one-vertex first step at each vertex present in T (possibly zero)."""
    F, n = T.F, T.n
    nonloop_xs = [B for B, lp in zip(T.xs, T.loops) if not lp]
    loop_xs = [B for B, lp in zip(T.xs, T.loops) if lp]
    base = _common_kernel(list(T.x) + nonloop_xs, n, F)
    steps = []
    for vert in sorted(set(T.labels)):
        coord = Subspace(F, n, [[1 if (k == c) else 0 for k in range(n)]
                                for c in range(n) if T.labels[c] == vert])
        steps.append(largest_stable_inside(loop_xs, base.intersect(coord)))
    return steps


def _lambda1_greedy(T: _Total) -> bool:
    while T.n:
        step = next((U for U in _restricted_steps(T) if U.dim), None)
        if step is None:
            return False
        T = T.quotient(step)
    return True


def _lambda1_branching(T: _Total, memo: dict) -> bool:
    if not T.n:
        return True
    key = T.key()
    if key in memo:
        return memo[key]
    memo[key] = False
    res = any(_lambda1_branching(T.quotient(U), memo) for U in _restricted_steps(T) if U.dim)
    memo[key] = res
    return res


def is_semi_nilpotent(rep: Representation) -> bool:
    """Membership in the semi-nilpotent variety via the canonical kernel flag."""
    return _lambda0(_Total.from_rep(rep))


def is_strongly_semi_nilpotent(rep: Representation, branching: bool = False) -> bool:
    """Membership in the strongly semi-nilpotent variety.

    By default one vertex with a nonzero maximal step is taken greedily; this is
    complete because the class is closed under quotients by such steps. With
    ``branching=True`` every vertex choice is explored instead (memoized).
    """
    T = _Total.from_rep(rep)
    return _lambda1_branching(T, {}) if branching else _lambda1_greedy(T)


def epsilon_i(rep: Representation, vertex: str) -> int:
    """Codimension in V_i of the loop-stable closure of the images arriving from other vertices."""
    Q, F, v = rep.quiver, rep.field, rep.dim
    i = Q.index[vertex]
    n = v[i]
    gens = []
    loops = []
    for (s, t), a, b in zip(Q.arrow_indices(), rep.x, rep.xs):
        if s == t == i:
            loops += [a, b]
            continue
        if t == i and s != i:
            gens += [tuple(col) for col in zip(*a.data)] if a.rows else []
        if s == i and t != i:
            gens += [tuple(col) for col in zip(*b.data)] if b.rows else []
    U = Subspace(F, n, gens)
    return n - smallest_stable_containing(loops, U).dim


# -- exhaustive flag oracle -----------------------------------------------

def all_subspaces(F: PrimeField, n: int) -> list[Subspace]:
    """Every subspace of F^n, enumerated through RREF pivot patterns."""
    out = []
    for k in range(n + 1):
        for piv in itertools.combinations(range(n), k):
            free = [(r, c) for r, pc in enumerate(piv) for c in range(pc + 1, n) if c not in piv]
            for vals in itertools.product(range(F.p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, pc in enumerate(piv):
                    rows[r][pc] = 1
                for (r, c), val in zip(free, vals):
                    rows[r][c] = val
                out.append(Subspace(F, n, rows))
    return out


def exhaustive_flag_oracle(rep: Representation, restricted: bool) -> bool:
    """Search every chain of graded subspaces for an admissible flag (tiny cases only)."""
    F, v = rep.field, rep.dim
    if sum(v) > 4 or F.p > 3:
        raise ValueError("exhaustive flag search is capped at total dimension 4 and p <= 3")
    per_vertex = [all_subspaces(F, n) for n in v]
    graded = list(itertools.product(*per_vertex))
    arrows = rep.quiver.arrow_indices()
    top = tuple(Subspace.full(F, n) for n in v)

    def inside(U: Subspace, A: Matrix, W: Subspace) -> bool:
        return all(W.contains(A @ b) for b in U.basis)

    def admissible(W, Wn) -> bool:
        if any(not a.issubset(b) for a, b in zip(W, Wn)) or all(a.dim == b.dim for a, b in zip(W, Wn)):
            return False
        if restricted and sum(1 for a, b in zip(W, Wn) if a.dim != b.dim) != 1:
            return False
        for (s, t), a, b in zip(arrows, rep.x, rep.xs):
            if not inside(Wn[s], a, W[t]):
                return False
            if not inside(Wn[t], b, Wn[s]):
                return False
        return True

    dead: set = set()

    def search(W) -> bool:
        if W == top:
            return True
        if W in dead:
            return False
        for Wn in graded:
            if admissible(W, Wn) and search(Wn):
                return True
        dead.add(W)
        return False

    return search(tuple(Subspace.zero(F, n) for n in v))


# -- enumeration helpers ---------------------------------------------------

def x_dimension(Q: Quiver, v: tuple[int, ...]) -> int:
    return sum(v[s] * v[t] for s, t in Q.arrow_indices())


def _split(vec: Sequence[int], Q: Quiver, v: tuple[int, ...], reverse: bool) -> list[list[list[int]]]:
    out, k = [], 0
    for s, t in Q.arrow_indices():
        r, c = (v[s], v[t]) if reverse else (v[t], v[s])
        out.append([list(vec[k + i * c: k + (i + 1) * c]) for i in range(r)])
        k += r * c
    return out


def _digits(index: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        index, d = divmod(index, p)
        out.append(d)
    return out


def enumerate_representations(Q: Quiver, v: DimLike, p: int) -> Iterator[Representation]:
    """Every representation of the double quiver of dimension v over F_p."""
    v = Q.dim(v)
    d = x_dimension(Q, v)
    for k in range(p ** (2 * d)):
        dig = _digits(k, p, 2 * d)
        yield Representation.from_lists(Q, v, p, _split(dig[:d], Q, v, False), _split(dig[d:], Q, v, True))


def _moment_matrix(Q: Quiver, v: tuple[int, ...], xvec: Sequence[int], p: int) -> list[list[int]]:
    """Matrix of the linear map x* -> mu(x, x*) for fixed x (python ints)."""
    return _moment_matrices(Q, v, np.array([xvec], dtype=np.int64), p)[0].tolist()


def _moment_matrices(Q: Quiver, v: tuple[int, ...], X: np.ndarray, p: int) -> np.ndarray:
    """Batched version: X has shape (B, dim x); result (B, sum v_k^2, dim x*)."""
    B = X.shape[0]
    offs = list(itertools.accumulate((0,) + tuple(m * m for m in v[:-1])))
    rows = sum(m * m for m in v)
    cols = x_dimension(Q, v)
    L = np.zeros((B, rows, cols), dtype=np.int64)
    xk = 0
    col = 0
    for s, t in Q.arrow_indices():
        vs, vt = v[s], v[t]
        Xh = X[:, xk: xk + vt * vs].reshape(B, vt, vs)
        xk += vt * vs
        for a in range(vs):
            for b in range(vt):
                # x_h E_ab lands at vertex t, E_ab x_h at vertex s
                for c in range(vt):
                    L[:, offs[t] + c * vt + b, col] += Xh[:, c, a]
                for d in range(vs):
                    L[:, offs[s] + a * vs + d, col] -= Xh[:, b, d]
                col += 1
    return L % p


# -- counting --------------------------------------------------------------

@dataclass(frozen=True)
class CountRecord:
    quiver: Quiver
    dim: tuple[int, ...]
    prime: int
    kind: str
    raw: int
    stack: Fraction

    def to_json(self) -> dict:
        return {"quiver": self.quiver.to_json(), "dim": self.quiver.dim_dict(self.dim),
                "prime": self.prime, "kind": self.kind, "raw": str(self.raw),
                "stack": {"num": str(self.stack.numerator), "den": str(self.stack.denominator)}}


def order_G(v: Sequence[int], p: int) -> int:
    out = 1
    for n in v:
        for j in range(n):
            out *= p**n - p**j
    return out


def order_T(tau: int, p: int) -> int:
    return (p - 1) ** tau


def _count_M_chunk(args) -> int:
    Q_json, v, p, start, stop = args
    Q = Quiver.from_json(Q_json)
    d = x_dimension(Q, v)
    total = 0
    chunk = 4096
    powers = p ** np.arange(d, dtype=np.int64)
    for lo in range(start, stop, chunk):
        idx = np.arange(lo, min(stop, lo + chunk), dtype=np.int64)
        X = (idx[:, None] // powers[None, :]) % p
        L = _moment_matrices(Q, v, X, p)
        ranks = batch_rank_mod_p(L, p) if L.shape[1] and L.shape[2] else np.zeros(len(idx), dtype=np.int64)
        for r, c in zip(*np.unique(ranks, return_counts=True)):
            total += int(c) * p ** (d - int(r))
    return total


def _count_lambda_chunk(args) -> int:
    Q_json, v, p, kind, start, stop = args
    Q = Quiver.from_json(Q_json)
    F = PrimeField(p)
    d = x_dimension(Q, v)
    test = is_semi_nilpotent if kind == "lambda0" else is_strongly_semi_nilpotent
    total = 0
    for k in range(start, stop):
        xvec = _digits(k, p, d)
        L = Matrix(F, _moment_matrix(Q, v, xvec, p), d) if sum(m * m for m in v) else Matrix.zeros(F, 0, d)
        basis = kernel(L)
        xparts = _split(xvec, Q, v, False)
        for coeffs in itertools.product(range(p), repeat=len(basis)):
            xs = [sum(c * b[j] for c, b in zip(coeffs, basis)) % p for j in range(d)]
            rep = Representation.from_lists(Q, v, p, xparts, _split(xs, Q, v, True))
            if test(rep):
                total += 1
    return total


def _count_naive_M_chunk(args) -> int:
    Q_json, v, p, start, stop = args
    Q = Quiver.from_json(Q_json)
    d = x_dimension(Q, v)
    total = 0
    for k in range(start, stop):
        dig = _digits(k, p, 2 * d)
        rep = Representation.from_lists(Q, v, p, _split(dig[:d], Q, v, False), _split(dig[d:], Q, v, True))
        if all(m.is_zero() for m in moment_map(rep)):
            total += 1
    return total


def _run_partitioned(worker, make_args, size: int, threads: int) -> int:
    threads = max(1, int(threads))
    if threads == 1 or size < 2 * threads:
        return worker(make_args(0, size))
    bounds = [size * k // threads for k in range(threads + 1)]
    jobs = [make_args(lo, hi) for lo, hi in zip(bounds, bounds[1:])]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(worker, jobs))


def count_variety(Q: Quiver, v: DimLike, p: int, kind: str, budget: Optional[int] = None,
                  threads: int = 1, method: str = "fast") -> CountRecord:
    """Exact F_p-point count of M(v), the semi-nilpotent varieties, or Rep(kQ, v).

    ``method="naive"`` (kind M only) enumerates all pairs (x, x*) instead of the
    linear-fiber fast path; it exists to cross-check the fast path.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown variety kind {kind!r}; expected one of {KINDS}")
    PrimeField(p)
    v = Q.dim(v)
    d = x_dimension(Q, v)
    limit = enumeration_budget(budget)
    qj = Q.to_json()
    if kind == "rep":
        raw = p**d
    elif kind == "M" and method == "fast":
        size = p**d
        if size > limit:
            raise BudgetExceeded(size, limit, "x-part enumeration")
        raw = _run_partitioned(_count_M_chunk, lambda lo, hi: (qj, v, p, lo, hi), size, threads)
    elif kind == "M":
        size = p ** (2 * d)
        if size > limit:
            raise BudgetExceeded(size, limit, "naive pair enumeration")
        raw = _run_partitioned(_count_naive_M_chunk, lambda lo, hi: (qj, v, p, lo, hi), size, threads)
    else:
        size = p ** (2 * d)
        if size > limit:
            raise BudgetExceeded(size, limit, "membership enumeration")
        raw = _run_partitioned(_count_lambda_chunk, lambda lo, hi: (qj, v, p, kind, lo, hi), p**d, threads)
    return CountRecord(Q, v, p, kind, raw, Fraction(raw, order_G(v, p)))


def count_polynomial(Q: Quiver, v: DimLike, kind: str, primes: Sequence[int], degree_bound: int,
                     budget: Optional[int] = None, threads: int = 1):
    """Interpolate raw counts over the given primes; integer coefficients are enforced."""
    from .series import interpolate_poly

    if len(primes) < degree_bound + 1:
        raise ValueError(f"degree bound {degree_bound} needs at least {degree_bound + 1} primes")
    pts = [(p, count_variety(Q, v, p, kind, budget, threads).raw) for p in primes]
    return interpolate_poly(pts, degree_bound, require_integral=True)


def stack_count_series_coefficient(rec: CountRecord) -> Fraction:
    """stack count times p^<v,v>, the z^v coefficient of the counting series at q = p."""
    return rec.stack * Fraction(rec.prime) ** ringel_form(rec.quiver, rec.dim, rec.dim)
