"""Exact linear algebra over a prime field or the rational-function field Q(t, t*).

Matrices are immutable row tuples tagged with their field. Subspaces are kept
as reduced row echelon bases, which makes them canonical and hashable.
"""
from __future__ import annotations

from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.fields import field as _frac_field


class FieldMismatch(ValueError):
    pass


class PrimeField:
    """F_p with elements stored as ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p

    zero = 0
    one = 1

    def coerce(self, x) -> int:
        if hasattr(x, "numerator") and getattr(x, "denominator", 1) != 1:
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(x, -1, self.p)

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0

    def elements(self) -> range:
        return range(self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    def __repr__(self) -> str:
        return f"F_{self.p}"


class FunctionField:
    """Q(t, t*) with integer-polynomial numerators and denominators (sympy fraction field over ZZ).

    Elements are canonical: coprime numerator and denominator, denominator with
    positive leading coefficient.
    """

    def __init__(self):
        self.K, self.t, self.ts = _frac_field("t,ts", ZZ)
        self.ring = self.K.ring
        self.zero = self.K.zero
        self.one = self.K.one

    def coerce(self, x):
        if hasattr(x, "numerator") and hasattr(x, "denominator") and not hasattr(x, "numer"):
            return self.K(int(x.numerator)) / int(x.denominator)
        return self.K(x)

    @staticmethod
    def reduce(x):
        return x

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero in Q(t,t*)")
        return 1 / x

    @staticmethod
    def is_zero(x) -> bool:
        return not x

    def __eq__(self, other) -> bool:
        return isinstance(other, FunctionField)

    def __hash__(self) -> int:
        return hash("Q(t,ts)")

    def __repr__(self) -> str:
        return "Q(t,t*)"


FUNCTION_FIELD = FunctionField()


# -- row reduction ----------------------------------------------------------

def _rref(rows: list[list], F) -> tuple[list[list], list[int]]:
    """In-place reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(rows)) if not F.is_zero(rows[k][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        prow = [F.reduce(x * inv) for x in rows[r]]
        rows[r] = prow
        for k in range(len(rows)):
            if k != r:
                f = rows[k][c]
                if not F.is_zero(f):
                    row = rows[k]
                    rows[k] = [F.reduce(a - f * b) for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


class Matrix:
    """Immutable dense matrix over a PrimeField or the FunctionField."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, F, data: Iterable[Iterable], cols: Optional[int] = None):
        self.field = F
        self.data = tuple(tuple(F.coerce(x) for x in row) for row in data)
        self.rows = len(self.data)
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        if any(len(row) != cols for row in self.data):
            raise ValueError("ragged matrix")

    @classmethod
    def _raw(cls, F, data: tuple, cols: int) -> "Matrix":
        m = object.__new__(cls)
        m.field, m.data, m.rows, m.cols = F, data, len(data), cols
        return m

    @classmethod
    def zeros(cls, F, rows: int, cols: int) -> "Matrix":
        return cls._raw(F, tuple((F.zero,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, F, n: int) -> "Matrix":
        return cls._raw(F, tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n)), n)

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __matmul__(self, other):
        F = self.field
        if isinstance(other, Matrix):
            self._check(other)
            if self.cols != other.rows:
                raise ValueError("shape mismatch in product")
            cols = list(zip(*other.data)) if other.rows else [()] * other.cols
            data = tuple(tuple(F.reduce(sum(a * b for a, b in zip(row, col))) if row else F.zero
                               for col in cols) for row in self.data)
            return Matrix._raw(F, data, other.cols)
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch in matrix-vector product")
        return tuple(F.reduce(sum((a * b for a, b in zip(row, vec)), F.zero)) for row in self.data)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        F = self.field
        return Matrix._raw(F, tuple(tuple(F.reduce(a + b) for a, b in zip(r, s))
                                    for r, s in zip(self.data, other.data)), self.cols)

    def __neg__(self) -> "Matrix":
        F = self.field
        return Matrix._raw(F, tuple(tuple(F.reduce(-a) for a in r) for r in self.data), self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.field == other.field and \
            (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {[list(r) for r in self.data]})"

    def transpose(self) -> "Matrix":
        if not self.rows:
            return Matrix.zeros(self.field, self.cols, 0)
        return Matrix._raw(self.field, tuple(zip(*self.data)), self.rows)

    def is_zero(self) -> bool:
        return all(self.field.is_zero(x) for row in self.data for x in row)

    def rref(self) -> tuple[list[list], list[int]]:
        return _rref([list(r) for r in self.data], self.field)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list[tuple]:
        return kernel(self)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("non-square matrix")
        F, n = self.field, self.rows
        aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(self.data)]
        rows, piv = _rref(aug, F)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("singular matrix")
        return Matrix._raw(F, tuple(tuple(r[n:]) for r in rows), n)


def kernel(M: Matrix) -> list[tuple]:
    """Kernel basis: one vector per free column, with a 1 there and zeros at the other free columns."""
    F = M.field
    rows, pivots = M.rref()
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        vec = [F.zero] * M.cols
        vec[fcol] = F.one
        for row, pc in zip(rows, pivots):
            vec[pc] = F.reduce(-row[fcol])
        basis.append(tuple(vec))
    return basis


def rank(M: Matrix) -> int:
    return M.rank()


def solve(A: Matrix, b: Sequence) -> Optional[tuple]:
    """One solution of A x = b (free variables set to zero), or None when inconsistent."""
    F = A.field
    b = [F.coerce(x) for x in b]
    if len(b) != A.rows:
        raise ValueError("right-hand side has the wrong length")
    if isinstance(F, FunctionField):
        return solve_fraction_free(A, b)
    aug = [list(r) + [x] for r, x in zip(A.data, b)]
    rows, pivots = _rref(aug, F)
    if pivots and pivots[-1] == A.cols:
        return None
    x = [F.zero] * A.cols
    for row, pc in zip(rows, pivots):
        x[pc] = row[-1]
    return tuple(x)


def solve_fraction_free(A: Matrix, b: Sequence) -> Optional[tuple]:
    """Solve over Q(t,t*) by fraction-free Gauss-Jordan on integer polynomials.

    Each row is scaled to polynomial entries; elimination uses cross
    multiplication followed by removal of the row's polynomial content, so
    no rational functions appear until the final division by the pivots.
    """
    F = A.field
    R = F.ring
    rows = []
    for r, x in zip(A.data, b):
        entries = list(r) + [F.coerce(x)]
        den = reduce(lambda a, c: a.lcm(c), (e.denom for e in entries), R.one)
        rows.append(_primitive([R(e.numer * den.exquo(e.denom)) for e in entries], R))
    ncols = A.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        a = prow[c]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                f = rows[k][c]
                g = a.gcd(f)
                ca, cf = a.exquo(g), f.exquo(g)
                rows[k] = _primitive([ca * x - cf * y for x, y in zip(rows[k], prow)], R)
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    x = [F.zero] * ncols
    for row, pc in zip(rows, pivots):
        x[pc] = F.K(row[-1]) / F.K(row[pc])
    return tuple(x)


def _primitive(row: list, R) -> list:
    g = R.zero
    for e in row:
        if e:
            g = e if not g else g.gcd(e)
            if g == R.one or g == -R.one:
                return row
    if not g or g == R.one:
        return row
    return [e.exquo(g) for e in row]


# -- subspaces -----------------------------------------------------------

class Subspace:
    """Subspace of F^n stored as its RREF basis (canonical, hashable)."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, F, ambient: int, vectors: Iterable[Sequence] = ()):
        self.field = F
        self.ambient = ambient
        rows = [[F.coerce(x) for x in v] for v in vectors]
        if any(len(v) != ambient for v in rows):
            raise ValueError("vector length does not match the ambient dimension")
        rows, piv = _rref(rows, F)
        self.basis = tuple(tuple(r) for r in rows)
        self.pivots = tuple(piv)

    @classmethod
    def full(cls, F, n: int) -> "Subspace":
        return cls(F, n, Matrix.identity(F, n).data)

    @classmethod
    def zero(cls, F, n: int) -> "Subspace":
        return cls(F, n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, basis={[list(b) for b in self.basis]})"

    def reduce_vector(self, v: Sequence) -> list:
        F = self.field
        out = [F.coerce(x) for x in v]
        for row, pc in zip(self.basis, self.pivots):
            f = out[pc]
            if not F.is_zero(f):
                out = [F.reduce(a - f * b) for a, b in zip(out, row)]
        return out

    def contains(self, v: Sequence) -> bool:
        return all(self.field.is_zero(x) for x in self.reduce_vector(v))

    def issubset(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.ambient, self.basis + other.basis)

    def annihilator(self) -> list[tuple]:
        """Rows c with c . w = 0 for every w in the subspace."""
        if not self.basis:
            return list(Matrix.identity(self.field, self.ambient).data)
        return kernel(Matrix._raw(self.field, self.basis, self.ambient))

    def intersect(self, other: "Subspace") -> "Subspace":
        ann = self.annihilator() + other.annihilator()
        if not ann:
            return Subspace.full(self.field, self.ambient)
        return Subspace(self.field, self.ambient, kernel(Matrix._raw(self.field, tuple(ann), self.ambient)))

    def image(self, A: Matrix) -> "Subspace":
        return Subspace(self.field, A.rows, [A @ b for b in self.basis])

    def preimage(self, A: Matrix) -> "Subspace":
        """{v : A v in self}."""
        ann = self.annihilator()
        if not ann:
            return Subspace.full(self.field, A.cols)
        C = Matrix._raw(self.field, tuple(ann), self.ambient) @ A
        return Subspace(self.field, A.cols, kernel(C))

    def complement_columns(self) -> list[int]:
        piv = set(self.pivots)
        return [c for c in range(self.ambient) if c not in piv]

    def quotient_coords(self, v: Sequence) -> tuple:
        """Coordinates of v modulo the subspace, in the basis of non-pivot unit vectors."""
        red = self.reduce_vector(v)
        return tuple(red[c] for c in self.complement_columns())


def kernel_space(M: Matrix) -> Subspace:
    return Subspace(M.field, M.cols, kernel(M))


def largest_stable_inside(ops: Sequence[Matrix], K: Subspace) -> Subspace:
    """Largest subspace of K mapped into itself by every operator in ops."""
    W = K
    while True:
        nxt = W
        for A in ops:
            nxt = nxt.intersect(W.preimage(A))
        if nxt.dim == W.dim:
            break
        W = nxt
    assert W.issubset(K) and all(W.image(A).issubset(W) for A in ops), "stable-subspace self-check"
    return W


def smallest_stable_containing(ops: Sequence[Matrix], U: Subspace) -> Subspace:
    """Smallest subspace containing U and mapped into itself by every operator in ops."""
    W = U
    while True:
        nxt = W
        for A in ops:
            nxt = nxt + W.image(A)
        if nxt.dim == W.dim:
            break
        W = nxt
    assert U.issubset(W) and all(W.image(A).issubset(W) for A in ops), "stable-closure self-check"
    return W


# -- batched ranks over F_p ------------------------------------------------

def batch_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices (shape (B, m, n)) over F_p, vectorized across the stack."""
    M = np.array(mats, dtype=np.int64) % p
    B, m, n = M.shape
    if p <= 1 << 16:
        table = np.zeros(p, dtype=np.int64)
        table[1:] = [pow(a, -1, p) for a in range(1, p)]

        def inverse(a):
            return table[a]
    elif p < 1 << 31:
        def inverse(a):
            return _modpow(a, p - 2, p)
    else:
        raise ValueError("batched ranks need p < 2^31 to stay inside int64")
    rank = np.zeros(B, dtype=np.int64)
    rows = np.arange(m)
    bidx = np.arange(B)
    for c in range(n):
        if m == 0:
            break
        cand = (M[:, :, c] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        r = np.minimum(rank, m - 1)
        sel = bidx[has]
        top = M[sel, r[sel], :].copy()
        M[sel, r[sel], :] = M[sel, piv[sel], :]
        M[sel, piv[sel], :] = top
        prow = M[sel, r[sel], :] * inverse(M[sel, r[sel], c])[:, None] % p
        M[sel, r[sel], :] = prow
        below = rows[None, :] > r[sel][:, None]
        factors = np.where(below, M[sel, :, c], 0)
        M[sel] = (M[sel] - factors[:, :, None] * prow[:, None, :]) % p
        rank[sel] += 1
    return rank


def _modpow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result
