"""Hopf structure of K_n: coproduct, counit, antipode, the gamma cocycle, the
bicrossed product decomposition and the modular pair in involution."""
from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import DimensionError, Q, coeff, TruncSeries
from .jets import CrossedElement, JetDiffeo
from .kn_algebra import (AbKey, DomainError, Key, Kn, _add, _z, _mono_sort_key, ab_reduce, ad_X_elem,
                         apply_element, cofactor_terms, format_coeff_terms, format_monomial,
                         mul_monomials)


class KnTensor:
    """Element of K_n^{(x) q}."""

    __slots__ = ("n", "q", "terms")

    def __init__(self, n: int, q: int, terms: Optional[Mapping[Tuple[Key, ...], Fraction]] = None):
        self.n = n
        self.q = q
        self.terms: Dict[Tuple[Key, ...], Fraction] = {k: v if type(v) is int else coeff(v)
                                                        for k, v in (terms or {}).items() if v}

    @staticmethod
    def from_legs(legs: Sequence[Kn], coeff=1) -> "KnTensor":
        n = legs[0].n
        out: Dict[Tuple[Key, ...], Fraction] = {}
        items = [list(l.terms.items()) for l in legs]
        for combo in iproduct(*items):
            c = Q(coeff)
            for _, v in combo:
                c *= v
            _add(out, tuple(k for k, _ in combo), c)
        return KnTensor(n, len(legs), out)

    @staticmethod
    def unit(n: int, q: int) -> "KnTensor":
        return KnTensor.from_legs([Kn.one(n)] * q)

    def __add__(self, other: "KnTensor") -> "KnTensor":
        if self.q != other.q:
            raise DimensionError("tensor degree mismatch")
        t = dict(self.terms)
        for k, c in other.terms.items():
            _add(t, k, c)
        return KnTensor(self.n, self.q, t)

    def __neg__(self):
        return KnTensor(self.n, self.q, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "KnTensor":
        c = Q(c)
        return KnTensor(self.n, self.q, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "KnTensor") -> "KnTensor":
        if not isinstance(other, KnTensor):
            return self.scale(other)
        if self.q != other.q:
            raise DimensionError("tensor degree mismatch")
        out: Dict[Tuple[Key, ...], Fraction] = {}
        n = self.n
        rhs = [(k2, _z(c2)) for k2, c2 in other.terms.items()]
        for k1, c1 in self.terms.items():
            c1 = _z(c1)
            for k2, c2 in rhs:
                legs = [mul_monomials(n, a, b) for a, b in zip(k1, k2)]
                for combo in iproduct(*[list(l.items()) for l in legs]):
                    c = c1 * c2
                    for _, v in combo:
                        c *= v
                    _add(out, tuple(k for k, _ in combo), c)
        return KnTensor(n, self.q, out)

    def bracket(self, other: "KnTensor") -> "KnTensor":
        return self * other - other * self

    def leg_map(self, pos: int, f) -> "KnTensor":
        """Apply a linear map K -> K^{(x) r} (returning Kn or KnTensor) on one leg."""
        parts: Dict[Tuple[Key, ...], Fraction] = {}
        q_new = None
        for k, c in self.terms.items():
            img = f(Kn(self.n, {k[pos]: Fraction(1)}))
            if isinstance(img, Kn):
                img = KnTensor(self.n, 1, {(m,): v for m, v in img.terms.items()})
            q_new = self.q - 1 + img.q
            for mk, v in img.terms.items():
                _add(parts, k[:pos] + mk + k[pos + 1:], c * v)
        if q_new is None:
            # zero input: probe f on the unit to learn the output degree
            img = f(Kn.one(self.n))
            q_new = self.q - 1 + (1 if isinstance(img, Kn) else img.q)
        return KnTensor(self.n, q_new, parts)

    def flip(self) -> "KnTensor":
        return KnTensor(self.n, self.q, {tuple(reversed(k)): c for k, c in self.terms.items()})

    def multiply_legs(self) -> Kn:
        out = Kn.zero(self.n)
        for k, c in self.terms.items():
            t = Kn.one(self.n)
            for m in k:
                t = t * Kn(self.n, {m: Fraction(1)})
            out = out + t.scale(c)
        return out

    def __eq__(self, other):
        if not isinstance(other, KnTensor):
            return NotImplemented
        return (self.n, self.q, self.terms) == (other.n, other.q, other.terms)

    def __hash__(self):
        return hash((self.n, self.q, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return format_tensor(self)


def format_tensor(t: KnTensor) -> str:
    items = sorted(t.terms.items(), key=lambda kc: tuple(_mono_sort_key(m) for m in kc[0]))
    strs = []
    for k, c in items:
        legs = [format_monomial(t.n, m) for m in k]
        strs.append((" (x) ".join(legs), c))
    # a leading scalar coefficient multiplies the whole tensor; "1" legs stay explicit
    out = []
    for idx, (mon, c) in enumerate(strs):
        neg = c < 0
        a = -c if neg else c
        body = mon if a == 1 else f"{a} {mon}"
        out.append((("-" if neg else "") if idx == 0 else (" - " if neg else " + ")) + body)
    return "".join(out) if out else "0"


# --------------------------------------------------------------------------
# coproduct
# --------------------------------------------------------------------------

_GEN_COP: Dict[Tuple, KnTensor] = {}
_MONO_COP: Dict[Tuple[int, Key], KnTensor] = {}


def _sigma_key(n: int, i: int, J: Tuple[int, ...]) -> Kn:
    return Kn.sigma(n, i, J)


def cop_X(n: int, l: int) -> KnTensor:
    ck = ("X", n, l)
    if ck not in _GEN_COP:
        t = KnTensor.from_legs([Kn.X(n, l), Kn.one(n)])
        for k in range(n):
            t = t + KnTensor.from_legs([Kn.sigma(n, k, (l,)), Kn.X(n, k)])
        _GEN_COP[ck] = t
    return _GEN_COP[ck]


def cop_sigma(n: int, i: int, J: Tuple[int, ...]) -> KnTensor:
    J = tuple(sorted(J))
    ck = ("S", n, i, J)
    if ck in _GEN_COP:
        return _GEN_COP[ck]
    if len(J) == 1:
        j = J[0]
        t = KnTensor(n, 2)
        for k in range(n):
            t = t + KnTensor.from_legs([Kn.sigma(n, k, (j,)), Kn.sigma(n, i, (k,))])
    else:
        t = cop_X(n, J[-1]).bracket(cop_sigma(n, i, J[:-1]))
    _GEN_COP[ck] = t
    return t


def cop_det(n: int, p: int) -> KnTensor:
    return KnTensor.from_legs([Kn.det(n, p), Kn.det(n, p)])


def cop_log(n: int) -> KnTensor:
    return KnTensor.from_legs([Kn.logs(n), Kn.one(n)]) + KnTensor.from_legs([Kn.one(n), Kn.logs(n)])


def cop_monomial(n: int, key: Key) -> KnTensor:
    ck = (n, key)
    if ck in _MONO_COP:
        return _MONO_COP[ck]
    e, l, sig, xs = key
    t = cop_det(n, e) if e else KnTensor.unit(n, 2)
    for _ in range(l):
        t = t * cop_log(n)
    for (i, J) in sig:
        t = t * cop_sigma(n, i, J)
    for li, q in enumerate(xs):
        for _ in range(q):
            t = t * cop_X(n, li)
    _MONO_COP[ck] = t
    return t


def coproduct(k: Kn) -> KnTensor:
    out = KnTensor(k.n, 2)
    parts: Dict[Tuple[Key, ...], Fraction] = {}
    for key, c in k.terms.items():
        for kk, v in cop_monomial(k.n, key).terms.items():
            _add(parts, kk, c * v)
    return KnTensor(k.n, 2, parts)


def iterated_coproduct(k: Kn, times: int) -> KnTensor:
    """Delta^{times}: K -> K^{(x) times+1}; times = 0 gives k itself."""
    t = KnTensor(k.n, 1, {(m,): c for m, c in k.terms.items()})
    for _ in range(times):
        t = t.leg_map(t.q - 1, coproduct)
    return t


def tensor_coproduct(t: KnTensor) -> KnTensor:
    """Diagonal coproduct of a degree-q tensor, as an element of (K^{(x) q})^{(x) 2}
    reshuffled to K^{(x) 2q} in the order (a1 (x) .. (x) aq) (x) (b1 (x) .. (x) bq)."""
    out: Dict[Tuple[Key, ...], Fraction] = {}
    for k, c in t.terms.items():
        legs = [list(cop_monomial(t.n, m).terms.items()) for m in k]
        for combo in iproduct(*legs):
            v = c
            for _, w in combo:
                v *= w
            _add(out, tuple(kk[0] for kk, _ in combo) + tuple(kk[1] for kk, _ in combo), v)
    return KnTensor(t.n, 2 * t.q, out)


# --------------------------------------------------------------------------
# counit and antipode
# --------------------------------------------------------------------------

def counit_monomial(key: Key) -> Fraction:
    e, l, sig, xs = key
    if any(xs) or l:
        return Fraction(0)
    for (i, J) in sig:
        if len(J) > 1 or J[0] != i:
            return Fraction(0)
    return Fraction(1)


def counit(k: Kn) -> Fraction:
    return sum((c * counit_monomial(key) for key, c in k.terms.items()), Fraction(0))


_S_GEN: Dict[Tuple, Kn] = {}


def antipode_sigma(n: int, i: int, J: Tuple[int, ...]) -> Kn:
    J = tuple(sorted(J))
    ck = (n, i, J)
    if ck in _S_GEN:
        return _S_GEN[ck]
    if len(J) == 1:
        j = J[0]
        if n == 1:
            r = Kn.det(1, -1)
        else:
            # S(sigma^i_j) = (sigma matrix)^{-1} entry = sigma^{-1} cofactor_{j,i}
            ab: Dict[AbKey, Fraction] = {}
            for sgn, facs in cofactor_terms(n, j, i):
                _add(ab, (-1, 0, facs), Fraction(sgn))
            r = Kn.from_ab(n, ab_reduce(n, ab))
        _S_GEN[ck] = r
        return r
    # sum_m S(sigma^m_J) sigma^r_m = -m(S (x) id)(Delta sigma^r_J - sum_m sigma^m_J (x) sigma^r_m)
    Y = []
    for r_ in range(n):
        d = cop_sigma(n, r_, J)
        rest = Kn.zero(n)
        for (a, b), c in d.terms.items():
            if _is_single_sigma(n, a, J) is not None and _lin_index(n, b) == (r_, _is_single_sigma(n, a, J)):
                continue
            rest = rest + antipode(Kn(n, {a: Fraction(1)})) * Kn(n, {b: c})
        Y.append(-rest)
    for p in range(n):
        if n == 1:
            res = Y[0] * Kn.det(1, -1)
        else:
            res = Kn.zero(n)
            for r_ in range(n):
                res = res + Y[r_] * antipode_sigma(n, p, (r_,))
        _S_GEN[(n, p, J)] = res
    return _S_GEN[ck]


def _is_single_sigma(n: int, key: Key, J) -> Optional[int]:
    e, l, sig, xs = key
    if e or l or any(xs) or len(sig) != 1:
        return None
    (m, JJ), = sig
    return m if JJ == J else None


def _lin_index(n: int, key: Key):
    """(i, m) if key is the first-order sigma^i_m (sigma itself when n = 1)."""
    e, l, sig, xs = key
    if l or any(xs):
        return None
    if n == 1:
        return (0, 0) if (e == 1 and not sig) else None
    if e or len(sig) != 1:
        return None
    (i, JJ), = sig
    return (i, JJ[0]) if len(JJ) == 1 else None


def antipode_X(n: int, l: int) -> Kn:
    out = Kn.zero(n)
    for k in range(n):
        out = out - antipode_sigma(n, k, (l,)) * Kn.X(n, k)
    return out


_S_MONO: Dict[Tuple[int, Key], Kn] = {}


def antipode_monomial(n: int, key: Key) -> Kn:
    ck = (n, key)
    if ck in _S_MONO:
        return _S_MONO[ck]
    e, l, sig, xs = key
    # S is an anti-homomorphism: reverse the factor order
    r = Kn.one(n)
    for li in range(n - 1, -1, -1):
        for _ in range(xs[li]):
            r = r * antipode_X(n, li)
    r = r * _antipode_ab(n, (e, l, sig))
    _S_MONO[ck] = r
    return r


_S_AB: Dict[Tuple[int, AbKey], Kn] = {}


def _antipode_ab(n: int, key: AbKey) -> Kn:
    # commutative part; recursion on the factor list shares prefixes between monomials
    ck = (n, key)
    hit = _S_AB.get(ck)
    if hit is not None:
        return hit
    e, l, sig = key
    if sig:
        r = _antipode_ab(n, (e, l, sig[:-1])) * antipode_sigma(n, *sig[-1])
    else:
        r = Kn.det(n, -e)
        for _ in range(l):
            r = r * (-Kn.logs(n))
    _S_AB[ck] = r
    return r


def antipode(k: Kn) -> Kn:
    out: Dict[Key, Fraction] = {}
    for key, c in k.terms.items():
        c = _z(c)
        for m, v in antipode_monomial(k.n, key).terms.items():
            _add(out, m, _z(v) * c)
    return Kn(k.n, out)


# --------------------------------------------------------------------------
# gamma cocycle
# --------------------------------------------------------------------------

def gamma_K(f: Kn, psi: JetDiffeo) -> TruncSeries:
    """Function leg of f(1 U*_psi), for f in the commutative part."""
    if not f.is_ab():
        raise DomainError("gamma_K is defined on the commutative subalgebra only")
    one = TruncSeries.const(1, psi.n, psi.order)
    res = apply_element(f, CrossedElement.single(one, psi))
    if not res.terms:
        return TruncSeries(psi.n, max(psi.order - 1, 0))
    (phi, g), = res.terms.items()
    return g


# --------------------------------------------------------------------------
# bicrossed product
# --------------------------------------------------------------------------

def bicrossed_split(k: Kn) -> Dict[Tuple[int, ...], Kn]:
    """k = sum_u f_u u with u = X^xs; returns {xs: f_u}."""
    out: Dict[Tuple[int, ...], Dict[Key, Fraction]] = {}
    for (e, l, sig, xs), c in k.terms.items():
        out.setdefault(xs, {})[(e, l, sig, (0,) * k.n)] = c
    return {xs: Kn(k.n, t) for xs, t in out.items()}


def x_power(n: int, xs: Tuple[int, ...]) -> Kn:
    return Kn(n, {(0, 0, (), tuple(xs)): Fraction(1)})


def bicrossed_join(n: int, parts: Mapping[Tuple[int, ...], Kn]) -> Kn:
    out = Kn.zero(n)
    for xs, f in parts.items():
        out = out + f * x_power(n, xs)
    return out


def v_action(l: int, f: Kn) -> Kn:
    """X_l |> f = [X_l, f] for f in the commutative part."""
    if not f.is_ab():
        raise DomainError("X |> f needs f without X factors")
    return Kn.from_ab(f.n, ad_X_elem(f.n, f.ab_terms(), l))


def u_action(xs: Tuple[int, ...], f: Kn) -> Kn:
    r = f
    for l, q in enumerate(xs):
        for _ in range(q):
            r = v_action(l, r)
    return r


def uv_coproduct(xs: Tuple[int, ...]):
    """Coproduct of X^xs in U(V): sum binom X^a (x) X^(xs-a)."""
    from .kn_algebra import _multi_indices_below
    for a in _multi_indices_below(xs):
        c = 1
        for qi, ai in zip(xs, a):
            c *= comb(qi, ai)
        yield c, a, tuple(q - x for q, x in zip(xs, a))


def coaction_V(n: int, l: int) -> List[Tuple[int, Kn]]:
    """X_l -> sum_k X_k (x) sigma^k_l, as (k, sigma^k_l) pairs."""
    return [(k, Kn.sigma(n, k, (l,))) for k in range(n)]


# --------------------------------------------------------------------------
# modular pair in involution
# --------------------------------------------------------------------------

def mpi_report(n: int, generators: Sequence[Tuple[str, Kn]]) -> List[Tuple[str, bool, bool]]:
    """For each generator h: (name, S^2 h == s^-1 h s, S^2 h == s h s^-1)."""
    s = Kn.det(n, 1)
    si = Kn.det(n, -1)
    out = []
    for name, h in generators:
        s2 = antipode(antipode(h))
        out.append((name, s2 == si * h * s, s2 == s * h * si))
    return out


def generators_up_to(n: int, weight: int, with_log: bool = False) -> List[Tuple[str, Kn]]:
    """Generators X_l, sigma^{+-1}, sigma^i_J with |J| - 1 + [X] <= weight."""
    from itertools import combinations_with_replacement
    gens = [("s", Kn.det(n, 1)), ("sinv", Kn.det(n, -1))]
    for l in range(n):
        gens.append((f"X{l + 1}", Kn.X(n, l)))
    for k in range(1, weight + 2):
        for i in range(n):
            for J in combinations_with_replacement(range(n), k):
                if n == 1 and k == 1:
                    continue
                if k - 1 <= weight:
                    gens.append((f"s[{i + 1};{','.join(str(j + 1) for j in J)}]", Kn.sigma(n, i, J)))
    if with_log:
        gens.append(("logs", Kn.logs(n)))
    return gens
