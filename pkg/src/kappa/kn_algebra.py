"""The algebra K_n: PBW normal forms, multiplication, a word rewriting system
and the action on the jet-level crossed product.

PBW monomial key: ``(e, l, sig, xs)`` meaning

    sigma^e  logsigma^l  prod sig  X_1^xs[0] ... X_n^xs[n-1]

``sig`` is a sorted tuple of (i, J) pairs (0-based, J sorted, |J| >= 1) with
repetition.  For n = 1 the factor sigma^1_1 is always absorbed into sigma^e;
for n >= 2 the single relation det(sigma^i_j) = sigma is oriented as
``sigma^1_1 ... sigma^n_n -> sigma - (other permutation terms)``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import DimensionError, KappaError, Q, coeff, TruncSeries, czero
from .jets import CrossedElement, JetDiffeo

Sym = Tuple[int, Tuple[int, ...]]
AbKey = Tuple[int, int, Tuple[Sym, ...]]
Key = Tuple[int, int, Tuple[Sym, ...], Tuple[int, ...]]


class DomainError(KappaError):
    pass


def _perm_sign(p: Sequence[int]) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


@lru_cache(maxsize=None)
def det_terms(n: int) -> Tuple[Tuple[int, Tuple[Sym, ...]], ...]:
    """det(sigma^i_j) as signed sorted factor tuples."""
    out = []
    for p in permutations(range(n)):
        facs = tuple(sorted((i, (p[i],)) for i in range(n)))
        out.append((_perm_sign(p), facs))
    return tuple(out)


@lru_cache(maxsize=None)
def cofactor_terms(n: int, i: int, j: int) -> Tuple[Tuple[int, Tuple[Sym, ...]], ...]:
    """d det / d sigma^i_j as signed factor tuples."""
    out = []
    for p in permutations(range(n)):
        if p[i] != j:
            continue
        facs = tuple(sorted((k, (p[k],)) for k in range(n) if k != i))
        out.append((_perm_sign(p), facs))
    return tuple(out)


def _merge(a: Tuple[Sym, ...], b: Tuple[Sym, ...]) -> Tuple[Sym, ...]:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def _remove(sig: Tuple[Sym, ...], facs: Tuple[Sym, ...]) -> Optional[Tuple[Sym, ...]]:
    lst = list(sig)
    for f in facs:
        try:
            lst.remove(f)
        except ValueError:
            return None
    return tuple(lst)


def _z(c):
    # integral Fractions as ints: int arithmetic is far cheaper in the hot loops
    return c.numerator if c.denominator == 1 else c


def _add(d: Dict, k, c):
    s = d.get(k, 0) + c
    if s:
        d[k] = s
    else:
        d.pop(k, None)


def ab_reduce(n: int, terms: Mapping[AbKey, Fraction]) -> Dict[AbKey, Fraction]:
    """Normal form of a commutative (no X) combination."""
    out: Dict[AbKey, Fraction] = {}
    todo = list(terms.items())
    diag = tuple((i, (i,)) for i in range(n))
    dets = det_terms(n)
    while todo:
        (e, l, sig), c = todo.pop()
        if not c:
            continue
        if n == 1:
            k = sum(1 for s in sig if s == (0, (0,)))
            if k:
                sig = tuple(s for s in sig if s != (0, (0,)))
                e += k
            _add(out, (e, l, sig), c)
            continue
        rest = _remove(sig, diag)
        if rest is None:
            _add(out, (e, l, sig), c)
            continue
        todo.append(((e + 1, l, rest), c))
        for sgn, facs in dets:
            if facs == diag:
                continue
            todo.append(((e, l, _merge(rest, facs)), -sgn * c))
    return out


def ab_mul_keys(n: int, a: AbKey, b: AbKey) -> Dict[AbKey, Fraction]:
    key = (a[0] + b[0], a[1] + b[1], _merge(a[2], b[2]))
    if not all(d in key[2] for d in _diag(n)):
        return {key: 1}     # nothing to contract into a determinant
    return ab_reduce(n, {key: 1})


@lru_cache(maxsize=None)
def _reduce_key(n: int, key: AbKey) -> Dict[AbKey, int]:
    return ab_reduce(n, {key: 1})


@lru_cache(maxsize=None)
def _diag(n: int) -> Tuple[Sym, ...]:
    return tuple((i, (i,)) for i in range(n))


def _bracket_X_sigma(n: int, l: int) -> Dict[AbKey, Fraction]:
    """[X_l, sigma] = sum_{i,j} cof^i_j sigma^i_{j,l}."""
    out: Dict[AbKey, Fraction] = {}
    for i in range(n):
        for j in range(n):
            top = (i, tuple(sorted((j, l))))
            for sgn, facs in cofactor_terms(n, i, j):
                _add(out, (0, 0, _merge(facs, (top,))), sgn)
    return ab_reduce(n, out)


_AD_CACHE: Dict[Tuple[int, AbKey, int], Dict[AbKey, Fraction]] = {}


def ad_X(n: int, key: AbKey, l: int) -> Dict[AbKey, Fraction]:
    """[X_l, m] for a commutative monomial m (derivation)."""
    ck = (n, key, l)
    if ck in _AD_CACHE:
        return _AD_CACHE[ck]
    e, lg, sig = key
    out: Dict[AbKey, Fraction] = {}
    bs = None
    if e:
        bs = _bracket_X_sigma(n, l)
        for (e2, l2, s2), c in bs.items():
            for k, v in ab_reduce(n, {(e - 1 + e2, lg + l2, _merge(sig, s2)): c * e}).items():
                _add(out, k, v)
    if lg:
        bs = bs or _bracket_X_sigma(n, l)
        for (e2, l2, s2), c in bs.items():
            for k, v in ab_reduce(n, {(e - 1 + e2, lg - 1 + l2, _merge(sig, s2)): c * lg}).items():
                _add(out, k, v)
    for idx, (i, J) in enumerate(sig):
        if idx and sig[idx - 1] == (i, J):
            continue
        mult = sig.count((i, J))
        rest = list(sig)
        rest.remove((i, J))
        new = tuple(sorted(rest + [(i, tuple(sorted(J + (l,))))]))
        for k, v in ab_reduce(n, {(e, lg, new): mult}).items():
            _add(out, k, v)
    _AD_CACHE[ck] = out
    return out


def ad_X_elem(n: int, terms: Mapping[AbKey, Fraction], l: int) -> Dict[AbKey, Fraction]:
    out: Dict[AbKey, Fraction] = {}
    for k, c in terms.items():
        for k2, c2 in ad_X(n, k, l).items():
            _add(out, k2, c * c2)
    return out


def _multi_indices_below(q: Tuple[int, ...]):
    if not q:
        yield ()
        return
    for a in range(q[0] + 1):
        for rest in _multi_indices_below(q[1:]):
            yield (a,) + rest


def _mono_sort_key(k: Key):
    e, l, sig, xs = k
    return (-sum(xs), -len(sig), tuple(-x for x in xs), sig, -l, e)


class Kn:
    """Element of K_n (or of the extension with log sigma), exact coefficients."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Optional[Mapping[Key, Fraction]] = None):
        self.n = n
        # integral coefficients are kept as ints (much cheaper arithmetic)
        self.terms: Dict[Key, Fraction] = {k: v if type(v) is int else coeff(v)
                                           for k, v in (terms or {}).items() if v}
        self._hash = None

    # --- constructors ------------------------------------------------------
    @staticmethod
    def one(n: int) -> "Kn":
        return Kn(n, {(0, 0, (), (0,) * n): Fraction(1)})

    @staticmethod
    def zero(n: int) -> "Kn":
        return Kn(n)

    @staticmethod
    def scalar(n: int, c) -> "Kn":
        return Kn(n, {(0, 0, (), (0,) * n): Q(c)})

    @staticmethod
    def X(n: int, l: int) -> "Kn":
        xs = [0] * n
        xs[l] = 1
        return Kn(n, {(0, 0, (), tuple(xs)): Fraction(1)})

    @staticmethod
    def sigma(n: int, i: int, J: Sequence[int]) -> "Kn":
        J = tuple(sorted(J))
        if not J:
            raise ValueError("sigma^i_J needs nonempty J")
        return Kn.from_ab(n, ab_reduce(n, {(0, 0, ((i, J),)): Fraction(1)}))

    @staticmethod
    def det(n: int, p: int = 1) -> "Kn":
        return Kn(n, {(p, 0, (), (0,) * n): Fraction(1)})

    @staticmethod
    def logs(n: int) -> "Kn":
        return Kn(n, {(0, 1, (), (0,) * n): Fraction(1)})

    @staticmethod
    def from_ab(n: int, ab: Mapping[AbKey, Fraction], xs: Optional[Tuple[int, ...]] = None) -> "Kn":
        xs = (0,) * n if xs is None else xs
        return Kn(n, {(e, l, s, xs): c for (e, l, s), c in ab.items()})

    @staticmethod
    def det_expansion(n: int) -> "Kn":
        """sum_pi (-1)^pi sigma^1_pi(1) ... sigma^n_pi(n), as a product of generators."""
        out = Kn.zero(n)
        for sgn, facs in det_terms(n):
            t = Kn.one(n)
            for (i, J) in facs:
                t = t * Kn.sigma(n, i, J)
            out = out + t.scale(sgn)
        return out

    # --- structure ---------------------------------------------------------
    def is_ab(self) -> bool:
        return all(not any(k[3]) for k in self.terms)

    def ab_terms(self) -> Dict[AbKey, Fraction]:
        if not self.is_ab():
            raise DomainError("element has X factors")
        return {(e, l, s): c for (e, l, s, _), c in self.terms.items()}

    def has_log(self) -> bool:
        return any(k[1] for k in self.terms)

    def _check(self, other):
        if not isinstance(other, Kn) or other.n != self.n:
            raise DimensionError("K_n elements of different n")

    def __add__(self, other):
        if not isinstance(other, Kn):
            other = Kn.scalar(self.n, other)
        self._check(other)
        return kn_sum(self.n, (self, other))

    __radd__ = __add__

    def __neg__(self):
        return Kn(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Kn":
        c = Q(c)
        return Kn(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Kn):
            return self.scale(other)
        self._check(other)
        out: Dict[Key, Fraction] = {}
        n = self.n
        rhs = [(k2, _z(c2)) for k2, c2 in other.terms.items()]
        diag = _diag(n)
        raw: Dict[Key, Fraction] = {}
        for k1, c1 in self.terms.items():
            c1 = _z(c1)
            e1, l1, s1, q = k1
            free = not any(q)
            for k2, c2 in rhs:
                c12 = c1 * c2
                if free:
                    # no X to move past: merge now, contract determinants below
                    k = (e1 + k2[0], l1 + k2[1], _merge(s1, k2[2]), k2[3])
                    raw[k] = raw.get(k, 0) + c12
                    continue
                for k, c in mul_monomials(n, k1, k2).items():
                    out[k] = out.get(k, 0) + c * c12      # zeros dropped by Kn()
        for k, c in raw.items():
            if not c:
                continue
            if all(d in k[2] for d in diag):
                for ka, ca in _reduce_key(n, k[:3]).items():
                    kk = ka + (k[3],)
                    out[kk] = out.get(kk, 0) + ca * c
            else:
                out[k] = out.get(k, 0) + c
        return Kn(n, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        r = Kn.one(self.n)
        for _ in range(k):
            r = r * self
        return r

    def bracket(self, other: "Kn") -> "Kn":
        return self * other - other * self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == Kn.scalar(self.n, other)
        if not isinstance(other, Kn):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return format_kn(self)

    def __call__(self, a: CrossedElement) -> CrossedElement:
        return apply_element(self, a)


def kn_sum(n: int, items: Iterable["Kn"]) -> "Kn":
    """Sum of many elements with one accumulation pass."""
    acc: Dict[Key, Fraction] = {}
    get = acc.get
    for x in items:
        for k, c in x.terms.items():
            acc[k] = get(k, 0) + (c.numerator if c.denominator == 1 else c)
    return Kn(n, acc)


_MUL_CACHE: Dict[Tuple[int, Key, Key], Dict[Key, Fraction]] = {}


def mul_monomials(n: int, k1: Key, k2: Key) -> Dict[Key, Fraction]:
    """(A X^q)(B X^r) = sum_a binom(q, a) A (ad_X^a B) X^(q - a + r)."""
    ck = (n, k1, k2)
    hit = _MUL_CACHE.get(ck)
    if hit is not None:
        return hit
    e1, l1, s1, q = k1
    e2, l2, s2, r = k2
    out: Dict[Key, Fraction] = {}
    A = (e1, l1, s1)
    for kb, xq, cb in _x_past(n, q, (e2, l2, s2)):
        xs = tuple(a + b for a, b in zip(xq, r))
        for ka, ca in _ab_mul_cached(n, A, kb).items():
            k = ka + (xs,)
            out[k] = out.get(k, 0) + cb * ca
    out = {k: c for k, c in out.items() if c}
    _MUL_CACHE[ck] = out
    return out


_XPAST_CACHE: Dict = {}
_ABMUL_CACHE: Dict = {}


def _ab_mul_cached(n: int, a: AbKey, b: AbKey) -> Dict[AbKey, int]:
    ck = (n, a, b)
    hit = _ABMUL_CACHE.get(ck)
    if hit is None:
        hit = _ABMUL_CACHE[ck] = ab_mul_keys(n, a, b)
    return hit


def _x_past(n: int, q: Tuple[int, ...], B: AbKey) -> List[Tuple[AbKey, Tuple[int, ...], int]]:
    """X^q B rewritten as sum of c * B' X^q' (commutative part first)."""
    ck = (n, q, B)
    hit = _XPAST_CACHE.get(ck)
    if hit is not None:
        return hit
    out = []
    for alpha in _multi_indices_below(q):
        coef = 1
        for qi, ai in zip(q, alpha):
            coef *= comb(qi, ai)
        terms = {B: 1}
        for l, a in enumerate(alpha):
            for _ in range(a):
                terms = ad_X_elem(n, terms, l)
        xq = tuple(qi - ai for qi, ai in zip(q, alpha))
        out.extend((kb, xq, coef * cb) for kb, cb in terms.items())
    _XPAST_CACHE[ck] = out
    return out


# --------------------------------------------------------------------------
# text form
# --------------------------------------------------------------------------

def format_monomial(n: int, k: Key) -> str:
    e, l, sig, xs = k
    parts = []
    if e == 1:
        parts.append("s")
    elif e == -1:
        parts.append("sinv")
    elif e:
        parts.append(f"s^{e}")
    if l == 1:
        parts.append("logs")
    elif l:
        parts.append(f"logs^{l}")
    i_prev = None
    for idx, s in enumerate(sig):
        if idx and sig[idx - 1] == s:
            continue
        m = sig.count(s)
        i, J = s
        txt = f"s[{i + 1};{','.join(str(j + 1) for j in J)}]"
        parts.append(txt if m == 1 else f"{txt}^{m}")
    for li, q in enumerate(xs):
        if q == 1:
            parts.append(f"X{li + 1}")
        elif q:
            parts.append(f"X{li + 1}^{q}")
    return " ".join(parts) if parts else "1"


def format_coeff_terms(items: List[Tuple[str, Fraction]]) -> str:
    if not items:
        return "0"
    out = []
    for idx, (mon, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        if mon == "1":
            body = str(a)
        elif a == 1:
            body = mon
        else:
            body = f"{a} {mon}"
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_kn(k: Kn) -> str:
    items = [(format_monomial(k.n, m), c) for m, c in sorted(k.terms.items(), key=lambda mc: _mono_sort_key(mc[0]))]
    return format_coeff_terms(items)


# --------------------------------------------------------------------------
# word rewriting
# --------------------------------------------------------------------------

Letter = Tuple
Word = Tuple[Letter, ...]


def _rank(g: Letter):
    kind = g[0]
    if kind == "D":
        return (0,)
    if kind == "L":
        return (1,)
    if kind == "S":
        return (2, g[1], g[2])
    return (3, g[1])


def _commutator_X(n: int, l: int, g: Letter) -> List[Tuple[Word, Fraction]]:
    """[X_l, g] for a non-X letter g, as a list of words."""
    kind = g[0]
    if kind == "S":
        return [((("S", g[1], tuple(sorted(g[2] + (l,)))),), Fraction(1))]
    out = []
    for (e2, l2, s2), c in _bracket_X_sigma(n, l).items():
        base = tuple(("S",) + s for s in s2)
        if kind == "D":
            p = g[1]
            pre = (("D", p - 1),) if p - 1 else ()
            out.append((pre + base, c * p))
        else:
            out.append(((("D", -1),) + base, c))
    return out


def _find_redex(n: int, w: Word, rightmost: bool):
    rng = range(len(w) - 2, -1, -1) if rightmost else range(len(w) - 1)
    single = range(len(w) - 1, -1, -1) if rightmost else range(len(w))
    if n == 1:
        for i in single:
            if w[i] == ("S", 0, (0,)):
                return ("abs", i)
    for i in rng:
        a, b = w[i], w[i + 1]
        if a[0] == "D" and b[0] == "D":
            return ("merge", i)
        if _rank(a) > _rank(b):
            return ("swap", i)
    for i in single:
        if w[i] == ("D", 0):
            return ("unit", i)
    return None


def rewrite_step(n: int, w: Word, rightmost: bool = False) -> Optional[List[Tuple[Word, Fraction]]]:
    r = _find_redex(n, w, rightmost)
    if r is None:
        if n >= 2:
            diag = tuple(("S", i, (i,)) for i in range(n))
            rest = list(w)
            try:
                for d in diag:
                    rest.remove(d)
            except ValueError:
                return None
            out = [((("D", 1),) + tuple(rest), Fraction(1))]
            for sgn, facs in det_terms(n):
                fw = tuple(("S",) + f for f in facs)
                if fw == diag:
                    continue
                out.append((fw + tuple(rest), Fraction(-sgn)))
            return out
        return None
    kind, i = r
    if kind == "abs":
        return [(w[:i] + (("D", 1),) + w[i + 1:], Fraction(1))]
    if kind == "unit":
        return [(w[:i] + w[i + 1:], Fraction(1))]
    if kind == "merge":
        p = w[i][1] + w[i + 1][1]
        mid = (("D", p),) if p else ()
        return [(w[:i] + mid + w[i + 2:], Fraction(1))]
    a, b = w[i], w[i + 1]
    out = [(w[:i] + (b, a) + w[i + 2:], Fraction(1))]
    if a[0] == "X" and b[0] != "X":
        for cw, c in _commutator_X(n, a[1], b):
            out.append((w[:i] + cw + w[i + 2:], c))
    return out


def word_to_key(n: int, w: Word) -> Key:
    e = 0
    l = 0
    sig = []
    xs = [0] * n
    for g in w:
        if g[0] == "D":
            e += g[1]
        elif g[0] == "L":
            l += 1
        elif g[0] == "S":
            sig.append((g[1], g[2]))
        else:
            xs[g[1]] += 1
    return (e, l, tuple(sorted(sig)), tuple(xs))


def pbw_normalize(n: int, word: Sequence[Letter], coeff=1, strategy: str = "left",
                  max_steps: int = 10 ** 6) -> Kn:
    """Rewrite a word of generator letters to PBW normal form.

    Letters: ("X", l), ("S", i, J), ("D", p) for sigma^p, ("L",) for log sigma
    (all indices 0-based).  ``strategy`` chooses the leftmost or rightmost redex.
    """
    todo: Dict[Word, Fraction] = {_canon_letter_word(word): Q(coeff)}
    done: Dict[Key, Fraction] = {}
    steps = 0
    rightmost = strategy == "right"
    while todo:
        w, c = todo.popitem()
        if not c:
            continue
        res = rewrite_step(n, w, rightmost)
        steps += 1
        if steps > max_steps:
            raise KappaError("rewriting did not terminate within the step budget")
        if res is None:
            _add(done, word_to_key(n, w), c)
            continue
        for w2, c2 in res:
            _add(todo, w2, c * c2)
    return Kn(n, done)


def _canon_letter_word(word):
    out = []
    for g in word:
        if g[0] == "S":
            out.append(("S", g[1], tuple(sorted(g[2]))))
        else:
            out.append(tuple(g))
    return tuple(out)


def letter_element(n: int, g: Letter) -> Kn:
    if g[0] == "X":
        return Kn.X(n, g[1])
    if g[0] == "S":
        return Kn.sigma(n, g[1], g[2])
    if g[0] == "D":
        return Kn.det(n, g[1])
    return Kn.logs(n)


def word_product(n: int, word: Sequence[Letter], fold: str = "left") -> Kn:
    """Product of letters through kn multiplication (independent of rewriting)."""
    els = [letter_element(n, g) for g in word]
    if not els:
        return Kn.one(n)
    if fold == "left":
        r = els[0]
        for e in els[1:]:
            r = r * e
    else:
        r = els[-1]
        for e in reversed(els[:-1]):
            r = e * r
    return r


# --------------------------------------------------------------------------
# action on the crossed product
# --------------------------------------------------------------------------

def _func_of_jet(n: int, key: AbKey, phi: JetDiffeo) -> TruncSeries:
    """Multiplier of sigma^e logsigma^l prod sig on U*_phi."""
    e, l, sig = key
    comps = phi.components
    res = None
    if e or l:
        d = phi.jac_det()
        if e > 0:
            res = d ** e
        elif e < 0:
            res = d.reciprocal() ** (-e)
        if l:
            lg = d.log() ** l
            res = lg if res is None else res * lg
    for (i, J) in sig:
        f = comps[i].diff_multi(J)
        res = f if res is None else res * f
    return res


def apply_element(k: Kn, a: CrossedElement) -> CrossedElement:
    if k.n != a.n:
        raise DimensionError("apply: dimension mismatch")
    out = []
    n = k.n
    for (e, l, sig, xs), c in k.terms.items():
        for phi, f in a.terms.items():
            g = f
            for li, q in enumerate(xs):
                if q:
                    g = g.diff(li, q)
            m = _func_of_jet(n, (e, l, sig), phi)
            if m is not None:
                g = g * m
            out.append((g.scale(c), phi))
    return CrossedElement(n, out)


def apply_generator(g: Letter, a: CrossedElement) -> CrossedElement:
    return apply_element(letter_element(a.n, g), a)


# handy n = 1 names
def k1_generators():
    n = 1
    X = Kn.X(n, 0)
    s = Kn.det(n, 1)
    sinv = Kn.det(n, -1)
    s11 = Kn.sigma(n, 0, (0, 0))
    return X, s, sinv, s11
