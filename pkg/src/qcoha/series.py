"""Truncated multivariate series with coefficients in Q(q), plethystic Exp/Log,
Euler-type infinite products, interpolation and matrix series inversion.

Truncation is by total z-degree. Coefficients are exact rational functions of q
(sympy fraction field over ZZ); :func:`laurent_window` projects them to a finite
range of powers of q^{-1} for display and positivity checks.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Optional, Sequence

import sympy
from sympy.functions.combinatorial.numbers import mobius
from sympy.polys.domains import ZZ
from sympy.polys.fields import field as _frac_field

QF, q = _frac_field("q", ZZ)
_QR = QF.ring
_qgen = _QR.gens[0]
u = 1 / q  # q^{-1}

Q_SYMBOL = sympy.Symbol("q")
T_SYMBOL = sympy.Symbol("t")


class SeriesDomainError(ValueError):
    pass


class InterpolationError(ValueError):
    pass


def coerce_coeff(c):
    if isinstance(c, Fraction):
        return QF(int(c.numerator)) / int(c.denominator)
    return QF(c)


def adams_coeff(c, l: int):
    """q -> q^l on a rational function of q."""
    if l == 1:
        return c
    num = c.numer.compose(_qgen, _qgen**l)
    den = c.denom.compose(_qgen, _qgen**l)
    return QF(num) / QF(den)


def eval_coeff(c, p) -> Fraction:
    """Value of a rational function of q at q = p (an int or Fraction)."""
    p = Fraction(p)
    num = sum(Fraction(int(a)) * p**e[0] for e, a in c.numer.terms())
    den = sum(Fraction(int(a)) * p**e[0] for e, a in c.denom.terms())
    if den == 0:
        raise ZeroDivisionError(f"coefficient {c} has a pole at q={p}")
    return num / den


class TruncSeries:
    """Series in z-variables (one per vertex) truncated at total degree ``order``."""

    __slots__ = ("variables", "order", "coeffs", "q_window")

    def __init__(self, variables: Sequence[str], order: int, coeffs: Mapping = (), q_window: Optional[int] = None):
        self.variables = tuple(variables)
        self.order = int(order)
        self.q_window = q_window
        n = len(self.variables)
        out = {}
        for exp, c in dict(coeffs).items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != n or any(x < 0 for x in exp):
                raise SeriesDomainError(f"bad exponent {exp}")
            if sum(exp) > self.order:
                continue
            c = coerce_coeff(c)
            if c:
                out[exp] = c
        self.coeffs = out

    # -- constructors ---------------------------------------------------
    @classmethod
    def one(cls, variables, order) -> "TruncSeries":
        return cls(variables, order, {(0,) * len(tuple(variables)): 1})

    @classmethod
    def monomial(cls, variables, order, exp, coeff=1) -> "TruncSeries":
        return cls(variables, order, {tuple(exp): coeff})

    def _like(self, coeffs) -> "TruncSeries":
        return TruncSeries(self.variables, self.order, coeffs, self.q_window)

    # -- access ---------------------------------------------------------
    def coefficient(self, exp) -> object:
        return self.coeffs.get(tuple(exp), QF.zero)

    def __getitem__(self, exp):
        return self.coefficient(exp)

    @property
    def constant(self):
        return self.coefficient((0,) * len(self.variables))

    def terms(self):
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncSeries) and self.variables == other.variables and \
            self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*z^{e}" for e, c in self.terms()) or "0"
        return f"TruncSeries[{self.order}]({body})"

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "TruncSeries"):
        if self.variables != other.variables:
            raise SeriesDomainError("series over different variables")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, QF.zero) + c
        return TruncSeries(self.variables, min(self.order, other.order), out)

    def __neg__(self) -> "TruncSeries":
        return self._like({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, c) -> "TruncSeries":
        c = coerce_coeff(c)
        return self._like({e: c * x for e, x in self.coeffs.items()})

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        order = min(self.order, other.order)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, QF.zero) + c1 * c2
        return TruncSeries(self.variables, order, out)

    __rmul__ = scale

    def adams(self, l: int) -> "TruncSeries":
        """psi_l: q -> q^l on coefficients and z^v -> z^{lv}."""
        return self._like({tuple(l * x for x in e): adams_coeff(c, l) for e, c in self.coeffs.items()
                           if l * sum(e) <= self.order})

    def map_coeffs(self, fn: Callable) -> "TruncSeries":
        return self._like({e: fn(c) for e, c in self.coeffs.items()})

    def evaluate(self, p) -> dict[tuple, Fraction]:
        return {e: eval_coeff(c, p) for e, c in self.terms()}

    def to_json(self) -> list[dict]:
        out = []
        for e, c in self.terms():
            out.append({"z": {name: x for name, x in zip(self.variables, e) if x},
                        "coeff": {"num": str(c.numer.as_expr()), "den": str(c.denom.as_expr())}})
        return out


def series_exp(f: TruncSeries) -> TruncSeries:
    if f.constant:
        raise SeriesDomainError("exp needs a zero constant term")
    out = TruncSeries.one(f.variables, f.order)
    power = TruncSeries.one(f.variables, f.order)
    for k in range(1, f.order + 1):
        power = power * f
        if not power.coeffs:
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return out


def series_log(g: TruncSeries) -> TruncSeries:
    if g.constant != QF.one:
        raise SeriesDomainError("log needs constant term 1")
    h = g - TruncSeries.one(g.variables, g.order)
    out = TruncSeries(g.variables, g.order)
    power = TruncSeries.one(g.variables, g.order)
    for k in range(1, g.order + 1):
        power = power * h
        if not power.coeffs:
            break
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def plethystic_exp(f: TruncSeries) -> TruncSeries:
    """exp(sum_l psi_l(f) / l)."""
    if f.constant:
        raise SeriesDomainError("plethystic Exp needs a zero constant term")
    acc = TruncSeries(f.variables, f.order)
    for l in range(1, f.order + 1):
        acc = acc + f.adams(l).scale(Fraction(1, l))
    return series_exp(acc)


def plethystic_log(g: TruncSeries) -> TruncSeries:
    """Inverse of plethystic_exp: sum_l mu(l)/l psi_l(log g)."""
    lg = series_log(g)
    acc = TruncSeries(g.variables, g.order)
    for l in range(1, g.order + 1):
        m = mobius(l)
        if m:
            acc = acc + lg.adams(l).scale(Fraction(int(m), l))
    return acc


# -- Euler products ----------------------------------------------------------

def _qpoch(n: int):
    """(u; u)_n with u = 1/q."""
    out = QF.one
    for j in range(1, n + 1):
        out *= 1 - u**j
    return out


def _euler_factor(variables, order, v, r, a) -> TruncSeries:
    """prod_{k>=0} (1 - q^{-k-r} z^v)^{-a}, summed in closed form (q-binomial identities)."""
    deg = sum(v)
    nmax = order // deg
    one_copy = {}
    for n in range(nmax + 1):
        if a > 0:
            c = u ** (r * n) / _qpoch(n)
        else:
            c = (-1) ** n * u ** (n * (n - 1) // 2 + r * n) / _qpoch(n)
        one_copy[tuple(n * x for x in v)] = c
    base = TruncSeries(variables, order, one_copy)
    out = TruncSeries.one(variables, order)
    for _ in range(abs(a)):
        out = out * base
    return out


def product_expansion(a: Mapping[tuple, int], variables: Sequence[str], order: int,
                      q_window: Optional[int] = None) -> TruncSeries:
    """prod_{v,r} prod_{k>=0} (1 - q^{-k-r} z^v)^{-a[(v, r)]}, truncated at z-degree ``order``.

    Keys of ``a`` are pairs (v, r) with v a dimension tuple and r >= 0.
    Without ``q_window`` the k-product is summed exactly. With ``q_window=K``
    the literal finite product over k + r <= K is expanded in q^{-1} and
    truncated after q^{-K}; the result is exact for those powers and carries
    ``q_window=K``.
    """
    variables = tuple(variables)
    if q_window is None:
        out = TruncSeries.one(variables, order)
        for (v, r), exp in sorted(a.items()):
            if exp and any(v) and sum(v) <= order:
                out = out * _euler_factor(variables, order, tuple(v), r, exp)
        return out
    K = int(q_window)
    # coefficients as {u-degree: int} with u = q^{-1}, truncated beyond K
    acc: dict[tuple, dict[int, int]] = {(0,) * len(variables): {0: 1}}

    def mul(x, y):
        out: dict = {}
        for e1, c1 in x.items():
            for e2, c2 in y.items():
                e = tuple(s + t for s, t in zip(e1, e2))
                if sum(e) > order:
                    continue
                slot = out.setdefault(e, {})
                for d1, a1 in c1.items():
                    for d2, a2 in c2.items():
                        if d1 + d2 <= K:
                            slot[d1 + d2] = slot.get(d1 + d2, 0) + a1 * a2
        return out

    for (v, r), exp in sorted(a.items()):
        if not exp or not any(v) or sum(v) > order:
            continue
        for k in range(0, K - r + 1):
            m = k + r
            factor = {}
            for n in range(order // sum(v) + 1):
                if m * n > K:
                    break
                factor[tuple(n * x for x in v)] = {m * n: comb(exp + n - 1, n) if exp > 0
                                                   else (-1) ** n * comb(-exp, n)}
            acc = mul(acc, factor)
    coeffs = {e: sum((c * u**d for d, c in poly.items() if c), QF.zero) for e, poly in acc.items()}
    return TruncSeries(variables, order, coeffs, q_window=K)


def laurent_window(c, K: int) -> dict[int, Fraction]:
    """Expansion of a rational function of q in descending powers, down to q^{-K}.

    Returns {exponent of q: coefficient}; the coefficient must be a Laurent
    series in q^{-1} (any rational function qualifies).
    """
    c = coerce_coeff(c)
    num = {e[0]: Fraction(int(a)) for e, a in c.numer.terms()}
    den = {e[0]: Fraction(int(a)) for e, a in c.denom.terms()}
    dn, dd = max(num, default=0), max(den)
    if not num:
        return {}
    # in u = 1/q: num = q^dn * N(u), den = q^dd * D(u) with N(0), D(0) nonzero
    N = [num.get(dn - k, Fraction(0)) for k in range(dn + 1)]
    D = [den.get(dd - k, Fraction(0)) for k in range(dd + 1)]
    top = dn - dd  # highest q-exponent
    length = top + K + 1
    if length <= 0:
        return {}
    out = []
    for k in range(length):
        s = N[k] if k < len(N) else Fraction(0)
        for j in range(1, min(k, len(D) - 1) + 1):
            s -= D[j] * out[k - j]
        out.append(s / D[0])
    return {top - k: x for k, x in enumerate(out) if x}


# -- interpolation -------------------------------------------------------------

def interpolate_poly(points: Iterable[tuple], degree_bound: int, require_integral: bool = False,
                     symbol: sympy.Symbol = Q_SYMBOL) -> sympy.Poly:
    """Exact Lagrange interpolation through the first degree_bound+1 points; the
    remaining points are used as consistency checks."""
    pts = [(sympy.Rational(Fraction(x).numerator, Fraction(x).denominator),
            sympy.Rational(Fraction(y).numerator, Fraction(y).denominator)) for x, y in points]
    if len({x for x, _ in pts}) != len(pts):
        raise InterpolationError("interpolation nodes must be distinct")
    if degree_bound < 0:
        poly = sympy.Poly(0, symbol, domain="QQ")
    else:
        if len(pts) < degree_bound + 1:
            raise InterpolationError(f"{len(pts)} points cannot fix a polynomial of degree {degree_bound}")
        base = pts[: degree_bound + 1]
        poly = sympy.Poly(sympy.interpolate(base, symbol), symbol, domain="QQ") if len(base) > 1 \
            else sympy.Poly(base[0][1], symbol, domain="QQ")
    for x, y in pts:
        if poly.eval(x) != y:
            raise InterpolationError(f"data point ({x}, {y}) disagrees with degree <= {degree_bound} fit {poly.as_expr()}")
    if require_integral and not all(c.is_integer for c in poly.all_coeffs()):
        raise InterpolationError(f"interpolated polynomial {poly.as_expr()} has non-integer coefficients")
    return poly


def poly_coefficients(poly: sympy.Poly) -> list:
    """Coefficients from the constant term upwards (empty list for zero)."""
    if poly.is_zero:
        return []
    return list(reversed(poly.all_coeffs()))


def poly_to_coeff(poly: sympy.Poly, substitute_inverse: bool = False):
    """Turn a polynomial in one variable into an element of Q(q), with t -> q or t -> q^{-1}."""
    base = u if substitute_inverse else q
    out = QF.zero
    for k, c in enumerate(poly_coefficients(poly)):
        out += coerce_coeff(Fraction(int(c.p), int(c.q))) * base**k
    return out


# -- matrix series ---------------------------------------------------------

def matrix_series_inverse(M: Sequence[Sequence[Sequence]], order: int) -> list[list[list[Fraction]]]:
    """Inverse of a square matrix of polynomials in t, as coefficient lists up to t^order.

    Entries of M are coefficient lists (constant term first).
    """
    n = len(M)
    deg = max((len(e) for row in M for e in row), default=1)
    Mk = [[[Fraction(M[i][j][k]) if k < len(M[i][j]) else Fraction(0) for j in range(n)] for i in range(n)]
          for k in range(deg)]
    M0 = sympy.Matrix(n, n, lambda i, j: sympy.Rational(Mk[0][i][j].numerator, Mk[0][i][j].denominator))
    if M0.det() == 0:
        raise SeriesDomainError("constant term of the matrix series is singular")
    inv0 = M0.inv()
    I0 = [[Fraction(int(inv0[i, j].p), int(inv0[i, j].q)) for j in range(n)] for i in range(n)]

    def mat_mul(A, B):
        return [[sum((A[i][k] * B[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]

    X = [I0]
    for k in range(1, order + 1):
        acc = [[Fraction(0)] * n for _ in range(n)]
        for j in range(1, min(k, deg - 1) + 1):
            prod = mat_mul(Mk[j], X[k - j])
            acc = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(acc, prod)]
        X.append([[-x for x in row] for row in mat_mul(I0, acc)])
    return [[[X[k][i][j] for k in range(order + 1)] for j in range(n)] for i in range(n)]


def exponent_grid(variables: Sequence[str], order: int, box: Optional[Sequence[int]] = None):
    """Nonzero exponents of total degree at most ``order`` (optionally inside a box), by degree."""
    n = len(tuple(variables))
    ranges = [range((box[k] if box else order) + 1) for k in range(n)]
    exps = [e for e in itertools.product(*ranges) if 0 < sum(e) <= order]
    return sorted(exps, key=lambda e: (sum(e), e))
