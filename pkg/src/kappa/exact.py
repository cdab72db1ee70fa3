"""Exact scalars, Laurent polynomials in named symbols, truncated power series
and rational linear algebra.

Everything here is immutable once built.  Coefficients of a series are either
``Fraction`` values or ``Poly`` values (polynomials in named indeterminates);
arithmetic between the two mixes freely.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union


class KappaError(Exception):
    """Base class for all errors raised by the package."""


class DimensionError(KappaError):
    pass


class NonInvertibleError(KappaError):
    pass


class PreconditionError(KappaError):
    pass


class InsufficientOrderError(KappaError):
    """Raised when a computation would need more jet order than available."""


def coeff(x):
    """Canonical exact coefficient: int when integral, else Fraction."""
    t = type(x)
    if t is int:
        return x
    if t is not Fraction:
        x = Q(x)
    return x.numerator if x.denominator == 1 else x


def Q(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if type(x) is int:
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.replace(" ", ""))
    return Fraction(x)


# --------------------------------------------------------------------------
# Laurent polynomials in named symbols
# --------------------------------------------------------------------------

Mono = Tuple[Tuple[str, int], ...]


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        e2 = d.get(v, 0) + e
        if e2:
            d[v] = e2
        else:
            d.pop(v, None)
    return tuple(sorted(d.items()))


class Poly:
    """Sparse Laurent polynomial over Q in named variables.

    Negative exponents are allowed so that monomials are invertible; this is
    how ``1/phi'(0)`` stays exact for generic jets.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Mono, Fraction]] = None):
        t = {}
        if terms:
            for m, c in terms.items():
                if c:
                    t[m] = Fraction(c)
        self.terms: Dict[Mono, Fraction] = t
        self._hash = None

    @staticmethod
    def var(name: str, power: int = 1) -> "Poly":
        return Poly({((name, power),): Fraction(1)})

    @staticmethod
    def const(c) -> "Poly":
        return Poly({(): Q(c)})

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return Poly.const(x)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def __add__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return self
            other = Poly.const(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Q(other)
            if not other:
                return Poly()
            return Poly({m: c * other for m, c in self.terms.items()})
        t: Dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = t.get(m, 0) + c1 * c2
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return Poly(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        r = Poly.const(1)
        for _ in range(k):
            r = r * self
        return r

    def inverse(self) -> "Poly":
        if len(self.terms) != 1:
            raise NonInvertibleError(f"cannot invert non-monomial {self}")
        (m, c), = self.terms.items()
        return Poly({tuple((v, -e) for v, e in m): 1 / c})

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return self * other.inverse()
        return self * (1 / Q(other))

    def __rtruediv__(self, other):
        return Poly.coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            o = Fraction(other)
            if not o:
                return not self.terms
            return self.terms == {(): o}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def subs(self, values: Mapping[str, object]):
        """Substitute variables by Fractions or Polys; returns Poly."""
        out = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v, e in m:
                if v in values:
                    term = term * (Poly.coerce(values[v]) ** e)
                else:
                    term = term * Poly.var(v, e)
            out = out + term
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: (len(mc[0]), mc[0])):
            mon = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


Coeff = Union[Fraction, Poly]


def czero(c) -> bool:
    if isinstance(c, Poly):
        return not c.terms
    return c == 0


def cinv(c) -> Coeff:
    if isinstance(c, Poly):
        if c.is_const():
            v = c.const_value()
            if not v:
                raise NonInvertibleError("zero constant")
            return 1 / v
        return c.inverse()
    if c == 0:
        raise NonInvertibleError("zero constant")
    return 1 / Q(c)


def clog(c) -> Poly:
    """Symbolic logarithm of an invertible coefficient.

    ``log(r * prod v^e) = log(r) + sum e log(v)``; the logs are fresh
    indeterminates named ``log(...)``.
    """
    if isinstance(c, Poly):
        if c.is_const():
            return clog(c.const_value())
        if len(c.terms) != 1:
            raise NonInvertibleError(f"log of non-monomial {c}")
        (m, r), = c.terms.items()
        out = clog(r)
        for v, e in m:
            out = out + Poly.var(f"log({v})") * e
        return out
    c = Q(c)
    if c <= 0:
        raise NonInvertibleError("log of non-positive rational")
    # log of a positive rational in the basis log(p), p prime
    out = Poly()
    for num, sgn in ((c.numerator, 1), (c.denominator, -1)):
        for p, e in _factorize(num).items():
            out = out + Poly.var(f"log({p})") * (sgn * e)
    return out


def _factorize(m: int) -> Dict[int, int]:
    from sympy import factorint
    return factorint(m)


# --------------------------------------------------------------------------
# Truncated power series
# --------------------------------------------------------------------------

Exp = Tuple[int, ...]


class TruncSeries:
    """Multivariate power series over Q (or Poly), truncated at total degree
    ``order``.  Order -1 means "no information" and only arises internally."""

    __slots__ = ("n_vars", "order", "coeffs", "_hash")

    def __init__(self, n_vars: int, order: int, coeffs: Optional[Mapping[Exp, Coeff]] = None):
        self.n_vars = n_vars
        self.order = order
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if len(e) != n_vars:
                    raise DimensionError("exponent length mismatch")
                if sum(e) <= order and not czero(v):
                    c[e] = v if isinstance(v, Poly) else Q(v)
        self.coeffs: Dict[Exp, Coeff] = c
        self._hash = None

    # constructors
    @staticmethod
    def const(c, n_vars: int, order: int) -> "TruncSeries":
        return TruncSeries(n_vars, order, {(0,) * n_vars: c})

    @staticmethod
    def var(i: int, n_vars: int, order: int) -> "TruncSeries":
        e = [0] * n_vars
        e[i] = 1
        return TruncSeries(n_vars, order, {tuple(e): 1})

    @staticmethod
    def from_univariate(cs: Sequence, order: Optional[int] = None) -> "TruncSeries":
        order = len(cs) - 1 if order is None else order
        return TruncSeries(1, order, {(k,): c for k, c in enumerate(cs)})

    def zero_like(self) -> "TruncSeries":
        return TruncSeries(self.n_vars, self.order)

    def coeff(self, e: Exp) -> Coeff:
        return self.coeffs.get(tuple(e), Fraction(0))

    def const_term(self) -> Coeff:
        return self.coeff((0,) * self.n_vars)

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise InsufficientOrderError(f"cannot raise order {self.order} to {order}")
        return TruncSeries(self.n_vars, order, self.coeffs)

    def with_order(self, order: int) -> "TruncSeries":
        """Reinterpret as exact polynomial at a (possibly larger) order."""
        return TruncSeries(self.n_vars, order, self.coeffs)

    def _check(self, other: "TruncSeries"):
        if self.n_vars != other.n_vars:
            raise DimensionError(f"n_vars {self.n_vars} != {other.n_vars}")

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return self + TruncSeries.const(other, self.n_vars, self.order)
        self._check(other)
        order = min(self.order, other.order)
        c = {e: v for e, v in self.coeffs.items() if sum(e) <= order}
        for e, v in other.coeffs.items():
            if sum(e) <= order:
                c[e] = c.get(e, 0) + v
        return TruncSeries(self.n_vars, order, c)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.n_vars, self.order, {e: -v for e, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "TruncSeries":
        return TruncSeries(self.n_vars, self.order, {e: v * k for e, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        order = min(self.order, other.order)
        c: Dict[Exp, Coeff] = {}
        for e1, v1 in self.coeffs.items():
            d1 = sum(e1)
            if d1 > order:
                continue
            for e2, v2 in other.coeffs.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                c[e] = c.get(e, 0) + v1 * v2
        return TruncSeries(self.n_vars, order, c)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        r = TruncSeries.const(1, self.n_vars, self.order)
        for _ in range(k):
            r = r * self
        return r

    def diff(self, k: int, times: int = 1) -> "TruncSeries":
        """Partial derivative along variable k; the result is known one order less."""
        out = self
        for _ in range(times):
            if out.order < 1:
                raise InsufficientOrderError("derivative of an order-0 jet is undetermined")
            c = {}
            for e, v in out.coeffs.items():
                if e[k]:
                    e2 = list(e)
                    e2[k] -= 1
                    c[tuple(e2)] = v * e[k]
            out = TruncSeries(out.n_vars, out.order - 1, c)
        return out

    def diff_multi(self, J: Iterable[int]) -> "TruncSeries":
        out = self
        for j in J:
            out = out.diff(j)
        return out

    def compose(self, inner: Sequence["TruncSeries"], shift: bool = False,
                order: Optional[int] = None) -> "TruncSeries":
        """Return self(inner_1, ..., inner_n).

        Inner series must have zero constant term unless ``shift`` is set, in
        which case ``self`` is treated as an exact polynomial.
        """
        if len(inner) != self.n_vars:
            raise DimensionError("compose: wrong number of inner series")
        m = inner[0].n_vars
        for g in inner:
            if g.n_vars != m:
                raise DimensionError("compose: inner series disagree on n_vars")
        if shift:
            res_order = min(g.order for g in inner)
        else:
            for g in inner:
                if not czero(g.const_term()):
                    raise PreconditionError("inner series has nonzero constant term")
            res_order = min([self.order] + [g.order for g in inner])
        if order is not None:
            if order > res_order:
                raise InsufficientOrderError(f"composite known to order {res_order} < {order}")
            res_order = order
        inner = [g.truncate(res_order) for g in inner]
        # powers cache per variable
        pows: List[Dict[int, TruncSeries]] = [{0: TruncSeries.const(1, m, res_order)} for _ in inner]

        def power(i, k):
            d = pows[i]
            if k not in d:
                d[k] = power(i, k - 1) * inner[i]
            return d[k]

        out = TruncSeries(m, res_order)
        acc: Dict[Exp, Coeff] = {}
        for e, v in self.coeffs.items():
            if not shift and sum(e) > res_order:
                continue
            term = None
            for i, k in enumerate(e):
                if k:
                    p = power(i, k)
                    term = p if term is None else term * p
            if term is None:
                term = TruncSeries.const(1, m, res_order)
            for e2, v2 in term.coeffs.items():
                acc[e2] = acc.get(e2, 0) + v * v2
        return TruncSeries(m, res_order, acc)

    def _unit_apply(self, coeffs_of_u: Sequence[Coeff], c0=None) -> "TruncSeries":
        """Evaluate sum_j coeffs[j] * u^j where self = c (1 + u)."""
        c = self.const_term()
        cinvv = cinv(c)
        one = TruncSeries.const(1, self.n_vars, self.order)
        u = self * cinvv - one
        out = TruncSeries(self.n_vars, self.order)
        for a in reversed(list(coeffs_of_u)):
            out = out * u + a
        return out

    def reciprocal(self) -> "TruncSeries":
        c = self.const_term()
        if czero(c):
            raise NonInvertibleError("reciprocal of series with zero constant term")
        N = self.order
        r = self._unit_apply([(-1) ** j for j in range(N + 1)])
        return r * cinv(c)

    def log(self) -> "TruncSeries":
        """log of a series with invertible constant term c: log(c) is kept as a
        symbolic constant (see clog)."""
        c = self.const_term()
        if czero(c):
            raise NonInvertibleError("log of series with zero constant term")
        N = self.order
        cs = [Fraction(0)] + [Fraction((-1) ** (j + 1), j) for j in range(1, N + 1)]
        r = self._unit_apply(cs)
        lc = clog(c)
        if lc:
            r = r + lc
        return r

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            if isinstance(other, (int, Fraction)):
                return self == TruncSeries.const(other, self.n_vars, self.order)
            return NotImplemented
        return (self.n_vars, self.order, self.coeffs) == (other.n_vars, other.order, other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_vars, self.order, frozenset(self.coeffs.items())))
        return self._hash

    def agrees(self, other: "TruncSeries", order: Optional[int] = None) -> bool:
        """Equality up to the common known order (or an explicit one)."""
        m = min(self.order, other.order) if order is None else order
        if m < 0:
            raise InsufficientOrderError("no common known order")
        return self.truncate(m) == other.truncate(m)

    def subs_coeffs(self, values: Mapping[str, object]) -> "TruncSeries":
        c = {}
        for e, v in self.coeffs.items():
            if isinstance(v, Poly):
                v = v.subs(values)
                if v.is_const():
                    v = v.const_value()
            c[e] = v
        return TruncSeries(self.n_vars, self.order, c)

    def __repr__(self):
        names = ["x", "y", "z", "w"] if self.n_vars <= 4 else [f"x{i}" for i in range(self.n_vars)]
        if not self.coeffs:
            return f"0 + O({self.order + 1})"
        out = ""
        for e in sorted(self.coeffs, key=lambda e: (sum(e), tuple(-a for a in e))):
            v = self.coeffs[e]
            neg = not isinstance(v, Poly) and v < 0
            if neg:
                v = -v
            mon = "*".join(names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
            sv = f"({v})" if isinstance(v, Poly) or (isinstance(v, Fraction) and v.denominator != 1) else str(v)
            body = sv if not mon else (mon if v == 1 else f"{sv}*{mon}")
            out += (("-" if neg else "") + body) if not out else ((" - " if neg else " + ") + body)
        return out + f" + O({self.order + 1})"


def revert(f: Sequence[TruncSeries], lin_inv: Optional[Sequence[Sequence[Coeff]]] = None) -> List[TruncSeries]:
    """Compositional inverse of a vector series with zero constant term.

    ``lin_inv`` may supply the inverse of the linear part (for symbolic jets
    whose Jacobian determinant is not a monomial)."""
    n = len(f)
    N = min(g.order for g in f)
    for g in f:
        if g.n_vars != n:
            raise DimensionError("revert needs n series in n variables")
        if not czero(g.const_term()):
            raise PreconditionError("revert: nonzero constant term")
    L = [[f[i].coeff(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)] for i in range(n)]
    if lin_inv is None:
        lin_inv = mat_inverse(L)
    nonlin = [TruncSeries(n, N, {e: v for e, v in g.coeffs.items() if sum(e) >= 2}) for g in f]
    x = [TruncSeries.var(i, n, N) for i in range(n)]
    g = [sum((x[j] * lin_inv[i][j] for j in range(n)), TruncSeries(n, N)) for i in range(n)]
    for _ in range(N):
        nl = [h.compose(g) for h in nonlin]
        rhs = [x[i] - nl[i] for i in range(n)]
        g = [sum((rhs[j] * lin_inv[i][j] for j in range(n)), TruncSeries(n, N)) for i in range(n)]
    return g


def mat_det(M: Sequence[Sequence[Coeff]]):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    tot = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        tot = tot + ((-1) ** j) * M[0][j] * mat_det(minor)
    return tot


def mat_adj(M: Sequence[Sequence[Coeff]]):
    """Adjugate: adj[i][j] = (-1)^(i+j) det(M without row j, column i)."""
    n = len(M)
    if n == 1:
        return [[Fraction(1)]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1:] for k, row in enumerate(M) if k != j]
            out[i][j] = ((-1) ** (i + j)) * mat_det(minor)
    return out


def mat_inverse(M):
    d = mat_det(M)
    if czero(d):
        raise NonInvertibleError("singular linear part")
    di = cinv(d)
    A = mat_adj(M)
    return [[A[i][j] * di for j in range(len(M))] for i in range(len(M))]


def multi_factorial(e: Exp) -> int:
    r = 1
    for k in e:
        r *= factorial(k)
    return r


def exps_of_multiset(J: Sequence[int], n: int) -> Exp:
    e = [0] * n
    for j in J:
        e[j] += 1
    return tuple(e)


# --------------------------------------------------------------------------
# Exact linear algebra
# --------------------------------------------------------------------------

Vec = Mapping[object, Fraction]


def in_image(target: Vec, generators: Sequence[Vec]) -> Optional[List[Fraction]]:
    """Coordinates c with sum c_i g_i == target, or None if target is not in the span."""
    # Gaussian elimination on sparse rows; each pivot row remembers its combination.
    pivots: Dict[object, Tuple[Dict[object, Fraction], Dict[int, Fraction]]] = {}
    order: List[object] = []
    for idx, g in enumerate(generators):
        row = {k: Q(v) for k, v in g.items() if v}
        comb = {idx: Fraction(1)}
        row, comb = _reduce(row, comb, pivots)
        if row:
            p = min(row, key=_label_key)
            inv = 1 / row[p]
            row = {k: v * inv for k, v in row.items()}
            comb = {k: v * inv for k, v in comb.items()}
            # keep the basis fully reduced against the new pivot
            for q, (r2, c2) in list(pivots.items()):
                f = r2.get(p)
                if f:
                    pivots[q] = (_axpy(r2, row, -f), _axpy(c2, comb, -f))
            pivots[p] = (row, comb)
            order.append(p)
    t = {k: Q(v) for k, v in target.items() if v}
    coords: Dict[int, Fraction] = {}
    for p, (row, comb) in pivots.items():
        f = t.get(p)
        if f:
            t = _axpy(t, row, -f)
            coords = _axpy(coords, comb, f)
    if t:
        return None
    return [coords.get(i, Fraction(0)) for i in range(len(generators))]


def _label_key(k):
    return repr(k)


def _axpy(a: Dict, b: Mapping, f: Fraction) -> Dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + f * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _reduce(row, comb, pivots):
    changed = True
    while changed:
        changed = False
        for p in list(row):
            if p in pivots:
                f = row.get(p)
                if f:
                    prow, pcomb = pivots[p]
                    row = _axpy(row, prow, -f)
                    comb = _axpy(comb, pcomb, -f)
                    changed = True
    return row, comb


def rank(vectors: Sequence[Vec]) -> int:
    pivots = {}
    r = 0
    for g in vectors:
        row, comb = _reduce({k: Q(v) for k, v in g.items() if v}, {}, pivots)
        if row:
            p = min(row, key=_label_key)
            inv = 1 / row[p]
            pivots[p] = ({k: v * inv for k, v in row.items()}, {})
            r += 1
    return r
