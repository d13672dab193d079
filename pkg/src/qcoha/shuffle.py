"""Shuffle algebra of the Jordan quiver with kernel
zeta(x) = (x - t - t*)(x + t)(x + t*) / x over Q(t, t*).

A SymPoly is stored as a dictionary from x-exponent tuples to polynomials in
ZZ[t, t*] over one common denominator in ZZ[t, t*] (reduced, positive leading
coefficient). Text literals use ``t``, ``ts`` for t*, ``x1 .. xn``, integers,
``+ - * / ^`` and parentheses; denominators may involve t and ts only.
"""
from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass
from math import comb
from typing import Mapping, Optional, Sequence

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .linalg import FUNCTION_FIELD, Matrix, solve

R = FUNCTION_FIELD.ring
K = FUNCTION_FIELD.K
T, TS = R.gens
S = T + TS
ZETA_ROOTS = (S, -T, -TS)


class ShuffleError(ArithmeticError):
    pass


def _clean(d: dict) -> dict:
    return {e: c for e, c in d.items() if c}


def _scalar_parts(c):
    """(numerator, denominator) in ZZ[t,ts] for an int, Fraction, ring or field element."""
    if hasattr(c, "numer") and hasattr(c, "denom"):
        return R(c.numer), R(c.denom)
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return R(int(c.numerator)), R(int(c.denominator))
    return R(c), R.one


class SymPoly:
    """Symmetric polynomial in x_1..x_n with coefficients in Q(t, t*)."""

    __slots__ = ("nvars", "num", "den")

    def __init__(self, nvars: int, terms: Mapping[tuple, object], den=None, check: bool = True):
        self.nvars = int(nvars)
        num: dict = {}
        common = R.one
        parts = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars or any(x < 0 for x in e):
                raise ShuffleError(f"bad exponent {e} for {self.nvars} variables")
            n, d = _scalar_parts(c)
            parts[e] = (n, d)
            common = common.lcm(d)
        for e, (n, d) in parts.items():
            num[e] = num.get(e, R.zero) + n * common.exquo(d)
        if den is not None:
            common = common * R(den)
        self.num, self.den = self._normalize(_clean(num), common)
        if check and not self.is_symmetric():
            raise ShuffleError("polynomial is not symmetric in its variables")

    @staticmethod
    def _normalize(num: dict, den):
        if not num:
            return {}, R.one
        g = den
        for c in num.values():
            g = g.gcd(c)
            if g == R.one:
                break
        if g != R.one:
            num = {e: c.exquo(g) for e, c in num.items()}
            den = den.exquo(g)
        if den.LC < 0:
            num = {e: -c for e, c in num.items()}
            den = -den
        return num, den

    @classmethod
    def _raw(cls, nvars: int, num: dict, den=None, check: bool = False) -> "SymPoly":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.num, obj.den = cls._normalize(_clean(num), R.one if den is None else den)
        if check and not obj.is_symmetric():
            raise ShuffleError("polynomial is not symmetric in its variables")
        return obj

    @classmethod
    def constant(cls, nvars: int, c=1) -> "SymPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def symmetrize(cls, nvars: int, terms: Mapping[tuple, object]) -> "SymPoly":
        """Sum over all permutations of the variables of the given (not necessarily symmetric) terms."""
        out: dict = {}
        for perm in itertools.permutations(range(nvars)):
            for e, c in terms.items():
                key = tuple(e[perm[k]] for k in range(nvars))
                out[key] = out.get(key, 0) + K(c) if not isinstance(c, int) else out.get(key, 0) + c
        return cls(nvars, out)

    # -- structure ----------------------------------------------------
    def _permuted(self, perm: Sequence[int]) -> dict:
        out = {}
        for e, c in self.num.items():
            ne = [0] * self.nvars
            for k, x in enumerate(e):
                ne[perm[k]] = x
            out[tuple(ne)] = c
        return out

    def is_symmetric(self) -> bool:
        n = self.nvars
        if n < 2:
            return True
        swap = [1, 0] + list(range(2, n))
        cycle = [(k + 1) % n for k in range(n)]
        return self._permuted(swap) == self.num and self._permuted(cycle) == self.num

    def is_zero(self) -> bool:
        return not self.num

    def coefficient(self, exp) -> object:
        return K(self.num.get(tuple(exp), R.zero)) / K(self.den)

    def x_degree(self) -> int:
        return max((sum(e) for e in self.num), default=-1)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymPoly) and self.nvars == other.nvars and \
            self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(sorted(self.num.items(), key=lambda kv: kv[0])), self.den))

    def __add__(self, other: "SymPoly") -> "SymPoly":
        if self.nvars != other.nvars:
            raise ShuffleError("adding polynomials in different numbers of variables")
        den = self.den.lcm(other.den)
        a, b = den.exquo(self.den), den.exquo(other.den)
        out = {e: c * a for e, c in self.num.items()}
        for e, c in other.num.items():
            out[e] = out.get(e, R.zero) + c * b
        return SymPoly._raw(self.nvars, out, den)

    def __neg__(self) -> "SymPoly":
        return SymPoly._raw(self.nvars, {e: -c for e, c in self.num.items()}, self.den)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def scale(self, c) -> "SymPoly":
        n, d = _scalar_parts(c)
        return SymPoly._raw(self.nvars, {e: x * n for e, x in self.num.items()}, self.den * d)

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        return shuffle_product(self, other)

    def evaluate(self, xs: Sequence, t, ts):
        """Numeric value at rational points (Fractions or ints)."""
        from fractions import Fraction

        def ev(poly):
            return sum((Fraction(int(c)) * Fraction(t) ** e[0] * Fraction(ts) ** e[1] for e, c in poly.terms()),
                       Fraction(0))
        total = Fraction(0)
        for e, c in self.num.items():
            m = ev(c)
            for x, k in zip(xs, e):
                m *= Fraction(x) ** k
            total += m
        return total / ev(self.den)

    # -- text ---------------------------------------------------------
    def to_expr(self) -> sympy.Expr:
        t, ts = sympy.symbols("t ts")
        xs = sympy.symbols(f"x1:{self.nvars + 1}") if self.nvars else ()
        numer = sympy.Add(*[c.as_expr(t, ts) * sympy.Mul(*[x**k for x, k in zip(xs, e)])
                            for e, c in self.num.items()])
        return numer / self.den.as_expr(t, ts)

    def to_text(self) -> str:
        return str(sympy.factor(self.to_expr())).replace("**", "^")

    def __repr__(self) -> str:
        return f"SymPoly[{self.nvars}]({self.to_text()})"

    @classmethod
    def from_text(cls, text: str, nvars: Optional[int] = None) -> "SymPoly":
        return parse_sympoly(text, nvars)


_ALLOWED = re.compile(r"^[\sA-Za-z0-9_+\-*/^().]*$")


def parse_sympoly(text: str, nvars: Optional[int] = None) -> SymPoly:
    """Parse the text grammar into a SymPoly; nvars defaults to the largest x-index used."""
    if not _ALLOWED.match(text):
        raise ValueError(f"unexpected character in polynomial literal {text!r}")
    names = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text))
    xnames = {n for n in names if re.fullmatch(r"x[1-9][0-9]*", n)}
    unknown = names - xnames - {"t", "ts"}
    if unknown:
        raise ValueError(f"unknown symbols {sorted(unknown)} (use t, ts and x1..xn)")
    top = max((int(n[1:]) for n in xnames), default=0)
    n = top if nvars is None else int(nvars)
    if n < top:
        raise ValueError(f"literal uses x{top} but only {n} variables were requested")
    t, ts = sympy.symbols("t ts")
    xs = sympy.symbols(f"x1:{n + 1}") if n else ()
    local = {"t": t, "ts": ts, **{str(x): x for x in xs}}
    try:
        expr = parse_expr(text, local_dict=local, transformations=standard_transformations + (convert_xor,),
                          evaluate=True)
    except (SyntaxError, TypeError, sympy.SympifyError) as exc:
        raise ValueError(f"cannot parse {text!r}: {exc}") from exc
    numer, denom = sympy.fraction(sympy.together(sympy.expand(expr)))
    if denom.free_symbols & set(xs):
        raise ValueError("denominators may only involve t and ts")
    gens = (t, ts) + tuple(xs)
    pn = sympy.Poly(numer, *gens, domain="QQ")
    pd = sympy.Poly(denom, t, ts, domain="QQ")
    # clear rational numbers into the denominator
    lcm = sympy.ilcm(*([c.q for c in pn.coeffs()] + [c.q for c in pd.coeffs()] + [1]))
    num: dict = {}
    for mon, c in pn.terms():
        key = tuple(mon[2:])
        num[key] = num.get(key, R.zero) + R({(mon[0], mon[1]): int(c * lcm)})
    den = R({mon: int(c * lcm) for mon, c in pd.terms()})
    poly = SymPoly._raw(n, num, den)
    if not poly.is_symmetric():
        raise ValueError(f"{text!r} is not symmetric in x1..x{n}")
    return poly


# -- dictionary polynomial helpers ----------------------------------------------

def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, R.zero) + ca * cb
    return _clean(out)


def _linear(n: int, i: int, j: int, const) -> dict:
    """x_i - x_j + const."""
    d = {}
    e = [0] * n
    e[i] = 1
    d[tuple(e)] = R.one
    e = [0] * n
    e[j] = 1
    d[tuple(e)] = -R.one
    if const:
        d[(0,) * n] = R(const)
    return d


def _divide_difference(a: dict, i: int, j: int) -> dict:
    """Exact quotient of a by (x_i - x_j); raises if the remainder a|_{x_i = x_j} is nonzero."""
    quo: dict = {}
    rem: dict = {}
    for e, c in a.items():
        k = e[i]
        base = list(e)
        base[i] = 0
        re_ = list(base)
        re_[j] += k
        re_ = tuple(re_)
        rem[re_] = rem.get(re_, R.zero) + c
        for m in range(k):
            ne = list(base)
            ne[i] = m
            ne[j] = e[j] + k - 1 - m
            ne = tuple(ne)
            quo[ne] = quo.get(ne, R.zero) + c
    if any(rem.values()):
        raise ShuffleError(f"x{i + 1} - x{j + 1} does not divide the symmetrized sum")
    return _clean(quo)


def _embed(poly: SymPoly, offset: int, n: int) -> dict:
    return {(0,) * offset + e + (0,) * (n - offset - poly.nvars): c for e, c in poly.num.items()}


def _sign(perm: Sequence[int]) -> int:
    s = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                s = -s
    return s


def shuffle_product(f: SymPoly, g: SymPoly) -> SymPoly:
    """SYM( f(x_1..x_v) g(x_{v+1}..x_{v+w}) prod_{i<=v<j} zeta(x_i - x_j) ) / (v! w!).

    Computed as an antisymmetrization over (v,w)-shuffles divided by the
    Vandermonde product; each division by x_i - x_j is checked to be exact,
    which is the polynomiality check.
    """
    v, w = f.nvars, g.nvars
    n = v + w
    if v == 0 or w == 0:
        poly = _mul(_embed(f, 0, n), _embed(g, v, n))
        return SymPoly._raw(n, poly, f.den * g.den)
    P = _mul(_embed(f, 0, n), _embed(g, v, n))
    for i in range(v):
        for j in range(v, n):
            for root in ZETA_ROOTS:
                P = _mul(P, _linear(n, i, j, -root))
    for i in range(v):
        for j in range(i + 1, v):
            P = _mul(P, _linear(n, i, j, 0))
    for i in range(v, n):
        for j in range(i + 1, n):
            P = _mul(P, _linear(n, i, j, 0))
    total: dict = {}
    for chosen in itertools.combinations(range(n), v):
        perm = list(chosen) + [k for k in range(n) if k not in chosen]
        sgn = _sign(perm)
        for e, c in P.items():
            ne = [0] * n
            for k in range(n):
                ne[perm[k]] = e[k]
            ne = tuple(ne)
            total[ne] = total.get(ne, R.zero) + (c if sgn > 0 else -c)
    total = _clean(total)
    for i in range(n):
        for j in range(i + 1, n):
            total = _divide_difference(total, i, j)
    return SymPoly._raw(n, total, f.den * g.den, check=True)


def shuffle_monomial(factors: Sequence[SymPoly]) -> SymPoly:
    out = factors[0]
    for f in factors[1:]:
        out = shuffle_product(out, f)
    return out


def x_l_image(l: int) -> SymPoly:
    """prod_{1<=i,j<=l} (t + x_i - x_j)."""
    if l < 1:
        raise ValueError("l must be positive")
    poly = {(0,) * l: R.one}
    for i in range(l):
        for j in range(l):
            if i == j:
                poly = {e: c * T for e, c in poly.items()}
            else:
                poly = _mul(poly, _linear(l, i, j, T))
    return SymPoly._raw(l, poly, check=True)


def d_k_image(k: int) -> SymPoly:
    """t * x_1^k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return SymPoly._raw(1, {(k,): T})


# -- wheel conditions ----------------------------------------------------

def _substitute_wheel(poly: SymPoly, a, b) -> dict:
    """x1 = X, x2 = X + a, x3 = X + a + b; returns a dict over (X, x4, ..., xn)."""
    out: dict = {}
    for e, c in poly.num.items():
        e1, e2, e3 = e[0], e[1], e[2]
        rest = e[3:]
        for k2 in range(e2 + 1):
            c2 = comb(e2, k2) * a ** (e2 - k2)
            for k3 in range(e3 + 1):
                c3 = comb(e3, k3) * (a + b) ** (e3 - k3)
                key = (e1 + k2 + k3,) + rest
                out[key] = out.get(key, R.zero) + c * c2 * c3
    return _clean(out)


def wheel_pairs() -> list[tuple]:
    return [(a, b) for a, b in itertools.permutations(ZETA_ROOTS, 2)]


def wheel_check(f: SymPoly) -> bool:
    """Vanishing on (X, X+a, X+a+b) for every ordered pair (a, b) of distinct kernel roots."""
    if f.nvars < 3:
        warnings.warn("wheel conditions are vacuous below three variables", stacklevel=2)
        return True
    return all(not _substitute_wheel(f, a, b) for a, b in wheel_pairs())


# -- membership -----------------------------------------------------------

@dataclass
class Membership:
    status: str  # "member" or "undetermined"
    certificate: Optional[dict]
    monomials: int

    @property
    def is_member(self) -> bool:
        return self.status == "member"


def _words(weights: dict, nvars: dict, target_vars: int, cap: int):
    names = sorted(weights)

    def rec(prefix, used_vars, used_weight):
        if used_vars == target_vars:
            yield tuple(prefix)
            return
        for name in names:
            if used_vars + nvars[name] <= target_vars and used_weight + weights[name] <= cap:
                prefix.append(name)
                yield from rec(prefix, used_vars + nvars[name], used_weight + weights[name])
                prefix.pop()

    yield from rec([], 0, 0)


def membership_in_generated(f: SymPoly, degree_cap: int, generators: Optional[dict] = None) -> Membership:
    """Look for f in the span of shuffle monomials of generators, over Q(t, t*).

    ``generators`` maps names to (SymPoly, weight); the default family is
    D_k = t x_1^k with weight k. Words use exactly f.nvars variables and total
    weight at most ``degree_cap``. A failed solve means "not in this window",
    reported as undetermined.
    """
    if generators is None:
        generators = {f"D{k}": (d_k_image(k), k) for k in range(degree_cap + 1)}
    weights = {name: wt for name, (_, wt) in generators.items()}
    nvars = {name: g.nvars for name, (g, _) in generators.items()}
    words = list(_words(weights, nvars, f.nvars, degree_cap))
    if not words:
        return Membership("undetermined", None, 0)
    images = [shuffle_monomial([generators[name][0] for name in word]) for word in words]
    monos = sorted(set(f.num).union(*(set(m.num) for m in images)))
    A = Matrix(FUNCTION_FIELD, [[m.coefficient(e) for m in images] for e in monos], len(images))
    b = [f.coefficient(e) for e in monos]
    sol = solve(A, b)
    if sol is None:
        return Membership("undetermined", None, len(words))
    cert = {word: c for word, c in zip(words, sol) if c}
    check = SymPoly.constant(f.nvars, 0)
    for word, c in cert.items():
        check = check + images[words.index(word)].scale(c)
    if check != f:
        raise ShuffleError("membership certificate failed to recombine")
    return Membership("member", cert, len(words))
