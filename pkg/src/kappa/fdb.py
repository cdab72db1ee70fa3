"""Commutative Hopf algebras of Taylor coordinates: F(G-dagger), F(GL_n) and
F(N).  Coproducts and antipodes are computed from generic jets with
indeterminate coefficients (composition and reversion), never from tables.

Elements reuse the commutative normal form of ``kn_algebra``: a key
``(e, 0, sig)`` stands for beta^{-e}... more precisely ``e`` is the power of
the determinant ``det(beta^i_j) = beta``, so ``binv`` is e = -1.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product as iproduct
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import DimensionError, KappaError, Poly, Q, TruncSeries, czero, mat_adj, mat_det, multi_factorial
from .jets import JetDiffeo, n_action_of_gl, symbol_name, symbolic_jet
from .kn_algebra import AbKey, Kn, _add, ab_reduce, det_terms

KINDS = ("FGdagger", "FGL", "FN")
_LETTER = {"FGdagger": "b", "FGL": "a", "FN": "a"}


class FdB:
    """Polynomial in beta^i_J and beta^{-1} (or alpha's), normal form."""

    __slots__ = ("which", "n", "terms")

    def __init__(self, which: str, n: int, terms: Optional[Mapping[AbKey, Fraction]] = None):
        if which not in KINDS:
            raise ValueError(which)
        self.which = which
        self.n = n
        t = ab_reduce(n, {k: Q(v) for k, v in (terms or {}).items() if v})
        self.terms: Dict[AbKey, Fraction] = t
        for (e, l, sig) in t:
            if l:
                raise ValueError("no log in function algebras")
            if which == "FN" and (e or any(len(J) == 1 for _, J in sig)):
                raise ValueError("F(N) has no first order generators")
            if which == "FGL" and any(len(J) > 1 for _, J in sig):
                raise ValueError("F(GL) has only first order generators")

    @staticmethod
    def one(which: str, n: int) -> "FdB":
        return FdB(which, n, {(0, 0, ()): Fraction(1)})

    @staticmethod
    def gen(which: str, n: int, i: int, J: Sequence[int]) -> "FdB":
        return FdB(which, n, {(0, 0, ((i, tuple(sorted(J))),)): Fraction(1)})

    @staticmethod
    def inv(which: str, n: int, p: int = 1) -> "FdB":
        """binv^p (inverse determinant power)."""
        return FdB(which, n, {(-p, 0, ()): Fraction(1)})

    def _check(self, o):
        if not isinstance(o, FdB) or (o.which, o.n) != (self.which, self.n):
            raise DimensionError("FdB elements from different algebras")

    def __add__(self, o):
        if not isinstance(o, FdB):
            o = FdB.one(self.which, self.n).scale(o)
        self._check(o)
        t = dict(self.terms)
        for k, c in o.terms.items():
            _add(t, k, c)
        return FdB(self.which, self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        c = Q(c)
        return FdB(self.which, self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, o):
        if not isinstance(o, FdB):
            return self.scale(o)
        self._check(o)
        t: Dict[AbKey, Fraction] = {}
        for (e1, _, s1), c1 in self.terms.items():
            for (e2, _, s2), c2 in o.terms.items():
                _add(t, (e1 + e2, 0, tuple(sorted(s1 + s2))), c1 * c2)
        return FdB(self.which, self.n, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        r = FdB.one(self.which, self.n)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self == FdB.one(self.which, self.n).scale(o)
        if not isinstance(o, FdB):
            return NotImplemented
        return (self.which, self.n, self.terms) == (o.which, o.n, o.terms)

    def __hash__(self):
        return hash((self.which, self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return format_fdb(self)


def format_fdb(f: FdB) -> str:
    from .kn_algebra import format_coeff_terms
    L = _LETTER[f.which]
    items = []
    for (e, _, sig), c in sorted(f.terms.items(), key=lambda kc: (-len(kc[0][2]), kc[0][2], kc[0][0])):
        parts = []
        if e == -1:
            parts.append(f"{L}inv")
        elif e < 0:
            parts.append(f"{L}inv^{-e}")
        elif e == 1:
            parts.append(f"{L}")
        elif e > 1:
            parts.append(f"{L}^{e}")
        for idx, s in enumerate(sig):
            if idx and sig[idx - 1] == s:
                continue
            m = sig.count(s)
            i, J = s
            txt = f"{L}[{i + 1};{','.join(str(j + 1) for j in J)}]"
            parts.append(txt if m == 1 else f"{txt}^{m}")
        items.append((" ".join(parts) if parts else "1", c))
    return format_coeff_terms(items)


class FdBTensor:
    """Sum of tensor products of FdB legs (legs may live in different algebras)."""

    __slots__ = ("kinds", "n", "terms")

    def __init__(self, kinds: Tuple[str, ...], n: int, terms: Optional[Mapping] = None):
        self.kinds = tuple(kinds)
        self.n = n
        self.terms: Dict[Tuple[AbKey, ...], Fraction] = {k: Q(v) for k, v in (terms or {}).items() if v}

    @staticmethod
    def from_legs(legs: Sequence[FdB], coeff=1) -> "FdBTensor":
        out: Dict = {}
        for combo in iproduct(*[list(l.terms.items()) for l in legs]):
            c = Q(coeff)
            for _, v in combo:
                c *= v
            _add(out, tuple(k for k, _ in combo), c)
        return FdBTensor(tuple(l.which for l in legs), legs[0].n, out)

    def __add__(self, o):
        if o.kinds != self.kinds:
            raise DimensionError("tensor kinds differ")
        t = dict(self.terms)
        for k, c in o.terms.items():
            _add(t, k, c)
        return FdBTensor(self.kinds, self.n, t)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, c):
        return FdBTensor(self.kinds, self.n, {k: v * Q(c) for k, v in self.terms.items()})

    def __mul__(self, o: "FdBTensor") -> "FdBTensor":
        if o.kinds != self.kinds:
            raise DimensionError("tensor kinds differ")
        out: Dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                legs = [FdB(w, self.n, {a: 1}) * FdB(w, self.n, {b: 1}) for w, a, b in zip(self.kinds, k1, k2)]
                for combo in iproduct(*[list(l.terms.items()) for l in legs]):
                    c = c1 * c2
                    for _, v in combo:
                        c *= v
                    _add(out, tuple(k for k, _ in combo), c)
        return FdBTensor(self.kinds, self.n, out)

    def __eq__(self, o):
        if not isinstance(o, FdBTensor):
            return NotImplemented
        return (self.kinds, self.n, self.terms) == (o.kinds, o.n, o.terms)

    def __repr__(self):
        parts = []
        for k, c in sorted(self.terms.items(), key=lambda kc: repr(kc[0])):
            legs = [format_fdb(FdB(w, self.n, {m: 1})) for w, m in zip(self.kinds, k)]
            parts.append(f"{c}*(" + " (x) ".join(legs) + ")")
        return " + ".join(parts) if parts else "0"


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def beta_value(psi: JetDiffeo, i: int, J: Sequence[int]):
    e = [0] * psi.n
    for j in J:
        e[j] += 1
    e = tuple(e)
    if sum(e) > psi.order:
        from .exact import InsufficientOrderError
        raise InsufficientOrderError(f"need jet order {sum(e)}")
    return psi.components[i].coeff(e) * multi_factorial(e)


def fdb_eval(f: FdB, psi: JetDiffeo):
    """Value of f at psi; exact rational or symbolic polynomial."""
    if f.which == "FN" and not psi.in_N():
        raise ValueError("F(N) element evaluated off N")
    if f.which == "FGL" and not psi.is_linear():
        raise ValueError("F(GL) element evaluated off GL")
    if not psi.offset_is_zero():
        raise ValueError("Taylor coordinates are defined on G-dagger")
    d = mat_det(psi.linear_part())
    total = Fraction(0)
    for (e, _, sig), c in f.terms.items():
        v = Fraction(c)
        if e > 0:
            v = v * d ** e
        elif e < 0:
            v = v * (Poly.coerce(d).inverse() ** (-e) if isinstance(d, Poly) else Fraction(1) / d ** (-e))
        for (i, J) in sig:
            v = v * beta_value(psi, i, J)
        total = total + v
    return total


# --------------------------------------------------------------------------
# translating polynomials in jet indeterminates back into FdB elements
# --------------------------------------------------------------------------

def _parse_symbol(name: str):
    """'u[2;1,1]' -> ('u', 1, (0, 0)); 'Du' -> ('u', 'inv')."""
    if name.startswith("D"):
        return name[1:], "inv", None
    base, rest = name.split("[", 1)
    i, J = rest.rstrip("]").split(";")
    return base, int(i) - 1, tuple(int(j) - 1 for j in J.split(","))


def poly_to_tensor(p, prefixes: Sequence[str], kinds: Sequence[str], n: int) -> FdBTensor:
    """Read a polynomial in u/v/... indeterminates as an element of the tensor
    product, one leg per prefix.  'D<prefix>' is the inverse determinant."""
    p = Poly.coerce(p)
    out: Dict = {}
    for mono, c in p.terms.items():
        legs = [[0, []] for _ in prefixes]
        for v, e in mono:
            base, i, J = _parse_symbol(v)
            li = prefixes.index(base)
            if i == "inv":
                legs[li][0] -= e
            else:
                if e < 0:
                    if n == 1 and J == (0,):
                        legs[li][0] += e
                        continue
                    raise KappaError(f"negative power of {v}")
                legs[li][1].extend([(i, J)] * e)
        keys = []
        terms = [FdB(w, n, {(e, 0, tuple(sorted(s))): 1}) for w, (e, s) in zip(kinds, legs)]
        for combo in iproduct(*[list(t.terms.items()) for t in terms]):
            v = c
            for _, w in combo:
                v *= w
            _add(out, tuple(k for k, _ in combo), v)
    return FdBTensor(tuple(kinds), n, out)


def poly_to_fdb(p, prefix: str, which: str, n: int) -> FdB:
    t = poly_to_tensor(p, [prefix], [which], n)
    return FdB(which, n, {k[0]: c for k, c in t.terms.items()})


def _generic(n: int, order: int, name: str, which: str) -> JetDiffeo:
    if which == "FGL":
        return symbolic_jet(n, order, name, linear_only=True)
    if which == "FN":
        return symbolic_jet(n, order, name, linear_identity=True)
    return symbolic_jet(n, order, name)


def _generic_inverse(psi: JetDiffeo, name: str) -> JetDiffeo:
    """Inverse of a generic jet; 1/det is the indeterminate 'D<name>' (n >= 2)."""
    n = psi.n
    L = psi.linear_part()
    if n == 1:
        return psi.inverse()
    if all(not isinstance(v, Poly) for r in L for v in r):
        return psi.inverse()
    A = mat_adj(L)
    D = Poly.var(f"D{name}")
    return psi.inverse(lin_inv=[[A[i][j] * D for j in range(n)] for i in range(n)])


# --------------------------------------------------------------------------
# coproduct / antipode by generic composition and reversion
# --------------------------------------------------------------------------

_COP: Dict = {}
_ANT: Dict = {}


def fdb_coproduct_gen(which: str, n: int, i: int, J: Tuple[int, ...]) -> FdBTensor:
    ck = (which, n, i, J)
    if ck in _COP:
        return _COP[ck]
    k = len(J)
    u = _generic(n, k, "u", which)
    v = _generic(n, k, "v", which)
    comp = u.compose(v)      # f(psi1 o psi2): psi1 -> left leg
    val = beta_value(comp, i, J)
    t = poly_to_tensor(val, ["u", "v"], [which, which], n)
    _COP[ck] = t
    return t


def fdb_coproduct(f: FdB) -> FdBTensor:
    out = FdBTensor((f.which, f.which), f.n)
    for (e, _, sig), c in f.terms.items():
        t = FdBTensor.from_legs([FdB.inv(f.which, f.n, -e)] * 2) if e else \
            FdBTensor.from_legs([FdB.one(f.which, f.n)] * 2)
        for (i, J) in sig:
            t = t * fdb_coproduct_gen(f.which, f.n, i, J)
        out = out + t.scale(c)
    return out


def fdb_antipode_gen(which: str, n: int, i: int, J: Tuple[int, ...]) -> FdB:
    ck = (which, n, i, J)
    if ck in _ANT:
        return _ANT[ck]
    u = _generic(n, max(len(J), 1), "u", which)
    ui = _generic_inverse(u, "u")
    val = beta_value(ui, i, J)
    r = poly_to_fdb(val, "u", which, n)
    _ANT[ck] = r
    return r


def fdb_antipode(f: FdB) -> FdB:
    out = FdB(f.which, f.n)
    for (e, _, sig), c in f.terms.items():
        t = FdB.inv(f.which, f.n, e) if e else FdB.one(f.which, f.n)   # S(beta^e) = beta^-e
        for (i, J) in sig:
            t = t * fdb_antipode_gen(f.which, f.n, i, J)
        out = out + t.scale(c)
    return out


def fdb_counit(f: FdB) -> Fraction:
    return Fraction(fdb_eval(f, JetDiffeo.identity(f.n, max([len(J) for _, _, s in f.terms for _, J in s] + [1]))))


# --------------------------------------------------------------------------
# iota: K_ab^cop -> F(G-dagger)
# --------------------------------------------------------------------------

def iota(k: Kn) -> FdB:
    if k.has_log():
        raise ValueError("log sigma is not a Taylor coordinate")
    return FdB("FGdagger", k.n, k.ab_terms())


def iota_inv(f: FdB) -> Kn:
    return Kn.from_ab(f.n, f.terms)


# --------------------------------------------------------------------------
# projections, sections, Phi
# --------------------------------------------------------------------------

def _map_gens(f: FdB, target: str, img_gen, img_inv) -> FdB:
    out = FdB(target, f.n)
    for (e, _, sig), c in f.terms.items():
        t = img_inv(e)
        for (i, J) in sig:
            t = t * img_gen(i, J)
        out = out + t.scale(c)
    return out


def pi1(f: FdB) -> FdB:
    n = f.n
    return _map_gens(f, "FGL", lambda i, J: FdB.gen("FGL", n, i, J) if len(J) == 1 else FdB("FGL", n),
                     lambda e: FdB.inv("FGL", n, -e))


def pi2(f: FdB) -> FdB:
    n = f.n
    return _map_gens(f, "FN", lambda i, J: FdB.one("FN", n).scale(1 if i == J[0] else 0) if len(J) == 1
                     else FdB.gen("FN", n, i, J), lambda e: FdB.one("FN", n))


def I1(f: FdB) -> FdB:
    n = f.n
    return _map_gens(f, "FGdagger", lambda i, J: FdB.gen("FGdagger", n, i, J),
                     lambda e: FdB.inv("FGdagger", n, -e))


def I2(f: FdB) -> FdB:
    n = f.n
    return _map_gens(f, "FGdagger", lambda i, J: FdB.gen("FGdagger", n, i, J), lambda e: FdB.one("FGdagger", n))


def phi_iso(f: FdB) -> FdBTensor:
    """Phi: F(G-dagger) -> F(GL) (x) F(N), Phi(f)(lambda, nu) = f(lambda o nu)."""
    n = f.n
    out = FdBTensor(("FGL", "FN"), n)
    for (e, _, sig), c in f.terms.items():
        t = FdBTensor.from_legs([FdB.inv("FGL", n, -e), FdB.one("FN", n)])
        for (i, J) in sig:
            if len(J) == 1:
                g = FdBTensor.from_legs([FdB.gen("FGL", n, i, J), FdB.one("FN", n)])
            else:
                g = FdBTensor(("FGL", "FN"), n)
                for s in range(n):
                    g = g + FdBTensor.from_legs([FdB.gen("FGL", n, i, (s,)), FdB.gen("FN", n, s, J)])
            t = t * g
        out = out + t.scale(c)
    return out


def phi_inverse(t: FdBTensor) -> FdB:
    n = t.n
    out = FdB("FGdagger", n)
    for (ka, kb), c in t.terms.items():
        a = I1(FdB("FGL", n, {ka: 1}))
        b = _map_gens(FdB("FN", n, {kb: 1}), "FGdagger", lambda i, J: phi_inv_N_gen(n, i, J),
                      lambda e: FdB.one("FGdagger", n))
        out = out + (a * b).scale(c)
    return out


def phi_inv_N_gen(n: int, i: int, J) -> FdB:
    """Phi^{-1}(1 (x) alpha^i_J) = sum_s S(beta^i_s) beta^s_J."""
    r = FdB("FGdagger", n)
    for s in range(n):
        r = r + fdb_antipode(FdB.gen("FGdagger", n, i, (s,))) * FdB.gen("FGdagger", n, s, J)
    return r


# --------------------------------------------------------------------------
# coactions, gl_n pairing and actions
# --------------------------------------------------------------------------

_COACT: Dict = {}


def coaction_N_gen(n: int, i: int, J: Tuple[int, ...]) -> FdBTensor:
    """f(nu <| lambda) = f<0>(nu) f<1>(lambda), legs F(N) (x) F(GL)."""
    ck = (n, i, J)
    if ck in _COACT:
        return _COACT[ck]
    nu = _generic(n, len(J), "u", "FN")
    lam = _generic(n, len(J), "v", "FGL")
    L = lam.linear_part()
    if n == 1:
        ai = [[Poly.var("v[1;1]").inverse()]]
    else:
        A = mat_adj(L)
        D = Poly.var("Dv")
        ai = [[A[r][s] * D for s in range(n)] for r in range(n)]
    inner = nu.compose(lam)
    comps = [sum((inner.components[j] * ai[r][j] for j in range(n)), TruncSeries(n, nu.order)) for r in range(n)]
    val = beta_value(JetDiffeo(comps, check=False), i, J)
    t = poly_to_tensor(val, ["u", "v"], ["FN", "FGL"], n)
    _COACT[ck] = t
    return t


def coaction_N(f: FdB) -> FdBTensor:
    n = f.n
    out = FdBTensor(("FN", "FGL"), n)
    for (e, _, sig), c in f.terms.items():
        t = FdBTensor.from_legs([FdB.one("FN", n), FdB.one("FGL", n)])
        for (i, J) in sig:
            t = t * coaction_N_gen(n, i, J)
        out = out + t.scale(c)
    return out


def left_coaction_N(f: FdB) -> FdBTensor:
    """F(N) -> F(GL) (x) F(N), alpha^i_J -> alpha^i_s (x) alpha^s_J (via I2 and Phi)."""
    return phi_iso(I2(f))


def coaction_V(n: int, l: int) -> List[Tuple[int, FdB]]:
    """X_l -> sum_k X_k (x) beta^k_l."""
    return [(k, FdB.gen("FGdagger", n, k, (l,))) for k in range(n)]


def gl_unit(n: int, i: int, j: int) -> List[List[Fraction]]:
    """Matrix of Y^i_j: the basis element with Y^i_j(alpha^p_q) = delta^i_q delta^p_j."""
    return [[Fraction(1 if (p == j and q == i) else 0) for q in range(n)] for p in range(n)]


def pairing(f: FdB, Ys: Sequence[Tuple[int, int]]) -> Fraction:
    """<f, Y_1 ... Y_k> = d/dt_1 .. d/dt_k f(exp(t_1 Y_1) ... exp(t_k Y_k)) at 0."""
    if f.which != "FGL":
        raise ValueError("pairing is defined on F(GL)")
    n = f.n
    k = len(Ys)
    if k == 0:
        return fdb_counit(f)
    one = TruncSeries.const(1, k, k)
    M = [[one.scale(1 if a == b else 0) for b in range(n)] for a in range(n)]
    for r, (i, j) in enumerate(Ys):
        Y = gl_unit(n, i, j)
        t = TruncSeries.var(r, k, k)
        Y2 = [[sum(Y[a][c] * Y[c][b] for c in range(n)) for b in range(n)] for a in range(n)]
        E = [[one.scale(1 if a == b else 0) + t.scale(Y[a][b]) + (t * t).scale(Y2[a][b] / 2)
              for b in range(n)] for a in range(n)]
        M = [[sum((M[a][c] * E[c][b] for c in range(n)), TruncSeries(k, k)) for b in range(n)] for a in range(n)]
    d = mat_det(M)
    total = TruncSeries(k, k)
    for (e, _, sig), c in f.terms.items():
        v = TruncSeries.const(c, k, k)
        if e:
            v = v * (d ** e if e > 0 else d.reciprocal() ** (-e))
        for (i, J) in sig:
            v = v * M[i][J[0]]
        total = total + v
    return Fraction(total.coeff((1,) * k))


def gl_action(Y: Tuple[int, int], f: FdB) -> FdB:
    """Y |> f = f<0> Y(f<1>) on F(N)."""
    t = coaction_N(f)
    out = FdB("FN", f.n)
    for (k0, k1), c in t.terms.items():
        p = pairing(FdB("FGL", f.n, {k1: 1}), [Y])
        if p:
            out = out + FdB("FN", f.n, {k0: c * p})
    return out


def gl_action_formula(Y: Tuple[int, int], f: FdB) -> FdB:
    """Explicit derivation formula on generators, extended by Leibniz."""
    i, j = Y
    n = f.n
    out = FdB("FN", n)
    for (e, _, sig), c in f.terms.items():
        for idx, (p, Q_) in enumerate(sig):
            rest = sig[:idx] + sig[idx + 1:]
            img = FdB("FN", n)
            for s, q in enumerate(Q_):
                if q == i:
                    newJ = tuple(sorted(Q_[:s] + (j,) + Q_[s + 1:]))
                    img = img + FdB.gen("FN", n, p, newJ)
            if p == j:
                img = img - FdB.gen("FN", n, i, Q_)
            out = out + img * FdB("FN", n, {(0, 0, rest): c})
    return out


def gl_on_V(Y: Tuple[int, int], k: int, n: int) -> Dict[int, Fraction]:
    """Y |> X_k = sum_s Y(alpha^s_k) X_s."""
    out = {}
    for s in range(n):
        p = pairing(FdB.gen("FGL", n, s, (k,)), [Y])
        if p:
            out[s] = p
    return out
