"""Hopf cyclic complex of K_n with coefficients in the modular pair
(delta = counit, sigma^{-1}), and the Chevalley-Eilenberg bicomplexes over
F_K = F(G-dagger) and F_H = F(N).

Cochains of degree q are elements 1 (x) k^1 (x) ... (x) k^q; the leading
coefficient leg is implicit and a cochain is stored as a KnTensor with q legs
(q = 0: the single key ()).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product as iproduct
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import PreconditionError, Q
from .fdb import (FdB, FdBTensor, coaction_V as fdb_coaction_V, fdb_antipode, fdb_coproduct,
                  fdb_counit, iota, iota_inv, phi_inv_N_gen, _map_gens)
from .kn_algebra import Key, Kn, _add
from .kn_hopf import KnTensor, antipode, coproduct, counit, counit_monomial, iterated_coproduct, v_action


def _one_key(n: int) -> Key:
    return (0, 0, (), (0,) * n)


def _sinv_key(n: int) -> Key:
    return (-1, 0, (), (0,) * n)


def cochain(n: int, *legs: Kn, coeff=1) -> KnTensor:
    """1 (x) legs[0] (x) ... ; with no legs the scalar coeff in degree 0."""
    if not legs:
        return KnTensor(n, 0, {(): Q(coeff)})
    return KnTensor.from_legs(list(legs), coeff)


def _terms(t: KnTensor):
    return t.terms.items()


def _mono_tensor(n: int, keys: Tuple[Key, ...]) -> KnTensor:
    return KnTensor(n, len(keys), {keys: Fraction(1)})


# --------------------------------------------------------------------------
# cocyclic module
# --------------------------------------------------------------------------

def face(phi: KnTensor, i: int) -> KnTensor:
    """delta_i : C^q -> C^{q+1}, 0 <= i <= q+1."""
    n, q = phi.n, phi.q
    if i == 0:
        return KnTensor(n, q + 1, {(_one_key(n),) + k: c for k, c in _terms(phi)})
    if i == q + 1:
        return KnTensor(n, q + 1, {k + (_sinv_key(n),): c for k, c in _terms(phi)})
    return phi.leg_map(i - 1, coproduct)


def degeneracy(phi: KnTensor, j: int) -> KnTensor:
    """sigma_j : C^q -> C^{q-1}, counit on leg j+1 (0 <= j < q)."""
    n, q = phi.n, phi.q
    out: Dict = {}
    for k, c in _terms(phi):
        e = counit_monomial(k[j])
        if e:
            _add(out, k[:j] + k[j + 1:], c * e)
    return KnTensor(n, q - 1, out)


def hochschild_b(phi: KnTensor) -> KnTensor:
    q = phi.q
    out = KnTensor(phi.n, q + 1)
    for i in range(q + 2):
        f = face(phi, i)
        out = out + (f if i % 2 == 0 else -f)
    return out


def cyclic_tau(phi: KnTensor) -> KnTensor:
    """tau_q(1 (x) k1 (x) .. (x) kq) = 1 (x) Delta^{q-1}(S k1) (k2 (x) .. (x) kq (x) sinv)."""
    n, q = phi.n, phi.q
    if q < 1:
        raise PreconditionError("tau needs degree >= 1")
    out = KnTensor(n, q)
    for k, c in _terms(phi):
        head = iterated_coproduct(antipode(Kn(n, {k[0]: Fraction(1)})), q - 1)
        rest = _mono_tensor(n, k[1:] + (_sinv_key(n),))
        out = out + (head * rest).scale(c)
    return out


def is_normalized(phi: KnTensor) -> bool:
    """Every leg in ker(eps): all codegeneracies vanish."""
    return all(degeneracy(phi, j).is_zero() for j in range(phi.q))


def normalize(phi: KnTensor) -> KnTensor:
    """Project every leg onto ker(counit): k -> k - eps(k) 1."""
    n = phi.n
    out = KnTensor(n, phi.q)
    for k, c in _terms(phi):
        legs = []
        for m in k:
            leg = Kn(n, {m: Fraction(1)})
            legs.append(leg - Kn.one(n).scale(counit_monomial(m)))
        if phi.q == 0:
            out = out + KnTensor(n, 0, {(): c})
        else:
            out = out + KnTensor.from_legs(legs, c)
    return out


def B0(phi: KnTensor) -> KnTensor:
    """1 (x) k1 .. kq -> 1 (x) Delta^{q-2}(S k1) (k2 (x) .. (x) kq)."""
    n, q = phi.n, phi.q
    if q == 1:
        return KnTensor(n, 0, {(): sum((c * counit(antipode(Kn(n, {k[0]: Fraction(1)}))) for k, c in _terms(phi)),
                                       Fraction(0))})
    out = KnTensor(n, q - 1)
    for k, c in _terms(phi):
        head = iterated_coproduct(antipode(Kn(n, {k[0]: Fraction(1)})), q - 2)
        out = out + (head * _mono_tensor(n, k[1:])).scale(c)
    return out


def _A(psi: KnTensor) -> KnTensor:
    """sum_{i=0}^{p} lambda^i with lambda = (-1)^p tau_p on degree p."""
    p = psi.q
    if p == 0:
        return psi
    sgn = -1 if p % 2 else 1
    out = psi
    cur = psi
    for _ in range(p):
        cur = cyclic_tau(cur).scale(sgn)
        out = out + cur
    return out


def connes_B(phi: KnTensor) -> KnTensor:
    """B = -A o B0 on the normalized complex (sign fixed by B(u1) = C1)."""
    if not is_normalized(phi):
        raise PreconditionError("B needs a normalized cochain (every leg in ker eps)")
    if phi.q == 0:
        return KnTensor(phi.n, 0)   # no degree -1
    return -_A(B0(phi))


def connes_B_oracle(phi: KnTensor) -> KnTensor:
    """B from the cocyclic structure maps only: -A o (sigma_{q-1} tau_q - (-1)^q sigma_{q-1})."""
    q = phi.q
    if q == 0:
        return KnTensor(phi.n, 0)
    b0 = degeneracy(cyclic_tau(phi), q - 1) - degeneracy(phi, q - 1).scale((-1) ** q)
    p = q - 1
    acc = b0
    cur = b0
    for _ in range(p):
        cur = cyclic_tau(cur).scale((-1) ** p) if p else cur
        acc = acc + cur
    return -acc


def certify_cyclic_cocycle(phi: KnTensor) -> List[Tuple[str, bool, str]]:
    """[(check name, pass, witness)] for b phi = 0 and tau phi = (-1)^q phi."""
    out = []
    b = hochschild_b(phi)
    out.append(("b=0", b.is_zero(), "" if b.is_zero() else repr(b)))
    if phi.q >= 1:
        d = cyclic_tau(phi) - phi.scale((-1) ** phi.q)
        out.append(("cyclic", d.is_zero(), "" if d.is_zero() else repr(d)))
    return out


# --------------------------------------------------------------------------
# named cochains for K_1 and its log extension
# --------------------------------------------------------------------------

def golden_cochains() -> Dict[str, KnTensor]:
    n = 1
    s11 = Kn.sigma(1, 0, (0, 0))
    sinv = Kn.det(1, -1)
    s2 = Kn.det(1, -2)
    X = Kn.X(1, 0)
    L = Kn.logs(1)
    C0 = cochain(n, sinv * X)
    C1 = cochain(n, s2 * s11)
    GV = cochain(n, L, s2 * s11) - cochain(n, s2 * s11, sinv * L)
    u1 = cochain(n, sinv * X, sinv * L)
    return {"C0": C0, "C1": C1, "GV": GV, "u1": u1}


# --------------------------------------------------------------------------
# Chevalley-Eilenberg side
# --------------------------------------------------------------------------
# A CE cochain is {(alpha, legs): coeff} with alpha a strictly increasing tuple
# of theta indices and legs a strictly ordered tuple of FdB monomial keys
# (wedge of q+1 elements).

FK = "FGdagger"
FH = "FN"


def _wedge_normal(idx: Sequence) -> Tuple[int, Optional[Tuple]]:
    """Sort with sign; (0, None) on repetition."""
    lst = list(idx)
    if len(set(lst)) != len(lst):
        return 0, None
    sgn = 1
    # bubble sort keeps track of the permutation sign
    for a in range(len(lst)):
        for b in range(len(lst) - 1 - a):
            if lst[b] > lst[b + 1]:
                lst[b], lst[b + 1] = lst[b + 1], lst[b]
                sgn = -sgn
    return sgn, tuple(lst)


def _fkey(k):
    # total order on FdB monomial keys; constants first
    return (len(k[2]), k[2], k[0], k[1])


class CECochain:
    __slots__ = ("which", "n", "p", "q", "terms")

    def __init__(self, which: str, n: int, p: int, q: int, terms: Optional[Mapping] = None):
        self.which, self.n, self.p, self.q = which, n, p, q
        self.terms: Dict = {}
        for (alpha, legs), c in (terms or {}).items():
            c = Q(c)
            if not c:
                continue
            s1, a = _wedge_normal(alpha)
            s2, l = _wedge_normal_keys(legs)
            if not s1 or not s2:
                continue
            _add(self.terms, (a, l), c * s1 * s2)

    @staticmethod
    def make(which: str, n: int, alpha: Sequence[int], legs: Sequence[FdB], coeff=1) -> "CECochain":
        """alpha (x) legs[0] ^ ... ^ legs[q], expanded multilinearly."""
        out: Dict = {}
        for combo in iproduct(*[list(f.terms.items()) for f in legs]):
            c = Q(coeff)
            for _, v in combo:
                c *= v
            _add(out, (tuple(alpha), tuple(k for k, _ in combo)), c)
        return CECochain(which, n, len(alpha), len(legs) - 1, out)

    def __add__(self, o: "CECochain"):
        t = dict(self.terms)
        for k, c in o.terms.items():
            _add(t, k, c)
        return CECochain(self.which, self.n, self.p, self.q, t)

    def scale(self, c):
        return CECochain(self.which, self.n, self.p, self.q, {k: v * Q(c) for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + o.scale(-1)

    def is_zero(self):
        return not self.terms

    def __eq__(self, o):
        return isinstance(o, CECochain) and (self.which, self.n, self.p, self.q, self.terms) == \
            (o.which, o.n, o.p, o.q, o.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, legs), c in sorted(self.terms.items(), key=lambda kc: repr(kc[0])):
            th = "^".join(f"th{i + 1}" for i in a) or "1"
            ws = " ^ ".join(repr(FdB(self.which, self.n, {k: 1})) for k in legs)
            parts.append(f"{c}*[{th} (x) {ws}]")
        return " + ".join(parts)


def _wedge_normal_keys(legs):
    order = sorted(range(len(legs)), key=lambda i: _fkey(legs[i]))
    if len({legs[i] for i in order}) != len(legs):
        return 0, None
    sgn, _ = _wedge_normal(order)
    return sgn, tuple(legs[i] for i in order)


def ce_b_wedge(c: CECochain) -> CECochain:
    """alpha (x) f0^..^fq -> alpha (x) 1^f0^..^fq."""
    one = (0, 0, ())
    return CECochain(c.which, c.n, c.p, c.q + 1,
                     {(a, (one,) + legs): v for (a, legs), v in c.terms.items()})


def x_action(which: str, n: int, l: int, f: FdB) -> FdB:
    """X_l |> f.  On F_K this is the generator shift (Leibniz); on F_H it is
    r_H(X_l |> iota_H(f))."""
    if which == FK:
        return iota(v_action(l, iota_inv(f)))
    g = iota_H(f)
    return r_H(iota(v_action(l, iota_inv(g))))


def ce_partial_wedge(c: CECochain) -> CECochain:
    """-sum_i theta^i ^ alpha (x) X_i |> (f0 ^ .. ^ fq), diagonal action."""
    out = CECochain(c.which, c.n, c.p + 1, c.q)
    for (a, legs), v in c.terms.items():
        for i in range(c.n):
            for pos in range(len(legs)):
                img = x_action(c.which, c.n, i, FdB(c.which, c.n, {legs[pos]: 1}))
                for mk, w in img.terms.items():
                    nl = legs[:pos] + (mk,) + legs[pos + 1:]
                    out = out + CECochain(c.which, c.n, c.p + 1, c.q, {((i,) + a, nl): -v * w})
    return out


def ce_total_d(c: CECochain) -> Tuple[CECochain, CECochain]:
    """Total differential components (b_wedge, (-1)^q partial_wedge)."""
    return ce_b_wedge(c), ce_partial_wedge(c).scale((-1) ** (c.q + 1))


def _theta_coaction(which: str, n: int, alpha: Tuple[int, ...]):
    """Left coaction alpha -> sum f (x) alpha'; theta^i -> beta^i_j (x) theta^j
    (trivial on F_H)."""
    res = [(FdB.one(which, n), ())]
    for i in alpha:
        nxt = []
        for f, a in res:
            for j in range(n):
                g = FdB.gen(FK, n, i, (j,)) if which == FK else FdB.one(FH, n).scale(1 if i == j else 0)
                if g.terms:
                    nxt.append((f * g, a + (j,)))
        res = nxt
    return res


def ce_coinvariance_sides(c: CECochain) -> Tuple[Dict, Dict]:
    """Both sides of the coinvariance identity as {(alpha, legs, fkey): coeff}."""
    lhs: Dict = {}
    rhs: Dict = {}
    for (a, legs), v in c.terms.items():
        # alpha<0> (x) f (x) S(alpha<1>), alpha<1> = S(alpha<-1>): S^2 = id
        for f, a2 in _theta_coaction(c.which, c.n, a):
            s, an = _wedge_normal(a2)
            if not s:
                continue
            for fk, w in f.terms.items():
                _add(lhs, (an, legs, fk), v * w * s)
        cops = [fdb_coproduct(FdB(c.which, c.n, {k: 1})) for k in legs]
        for combo in iproduct(*[list(t.terms.items()) for t in cops]):
            w = v
            for _, x in combo:
                w *= x
            left = tuple(kk[0] for kk, _ in combo)
            prod = FdB.one(c.which, c.n)
            for kk, _ in combo:
                prod = prod * FdB(c.which, c.n, {kk[1]: 1})
            s, ln = _wedge_normal_keys(left)
            if not s:
                continue
            for fk, x in prod.terms.items():
                _add(rhs, (a, ln, fk), w * x * s)
    return lhs, rhs


def ce_coinvariance_check(c: CECochain) -> bool:
    lhs, rhs = ce_coinvariance_sides(c)
    return lhs == rhs


def C0_dagger(n: int = 1) -> CECochain:
    return CECochain.make(FK, n, (), [FdB.one(FK, n)])


def C1_dagger() -> CECochain:
    return CECochain.make(FK, 1, (0,), [FdB.one(FK, 1), FdB.inv(FK, 1) * FdB.gen(FK, 1, 0, (0, 0))])


def C0_H(n: int = 1) -> CECochain:
    return CECochain.make(FH, n, (), [FdB.one(FH, n)])


def C1_H() -> CECochain:
    return CECochain.make(FH, 1, (0,), [FdB.one(FH, 1), FdB.gen(FH, 1, 0, (0, 0))])


# --------------------------------------------------------------------------
# restriction F_K -> F_H and the section iota_H
# --------------------------------------------------------------------------

def r_H(f: FdB) -> FdB:
    """Restriction of a Taylor-coordinate function to N."""
    n = f.n
    return _map_gens(f, FH, lambda i, J: FdB.one(FH, n).scale(1 if i == J[0] else 0) if len(J) == 1
                     else FdB.gen(FH, n, i, J), lambda e: FdB.one(FH, n))


def iota_H(f: FdB) -> FdB:
    """Phi^{-1}(1 (x) f)."""
    n = f.n
    return _map_gens(f, FK, lambda i, J: phi_inv_N_gen(n, i, J), lambda e: FdB.one(FK, n))


def r_H_cochain(c: CECochain) -> CECochain:
    out = CECochain(FH, c.n, c.p, c.q)
    for (a, legs), v in c.terms.items():
        out = out + CECochain.make(FH, c.n, a, [r_H(FdB(FK, c.n, {k: 1})) for k in legs], v)
    return out


# --------------------------------------------------------------------------
# unsymmetrized bicomplex: b*_F and partial_{V*}
# --------------------------------------------------------------------------
# Elements of wedge^p V* (x) F^{(x) q}: {(alpha, legs): coeff} with legs a
# plain tuple of q FdB keys.

class BiCochain:
    __slots__ = ("which", "n", "p", "q", "terms")

    def __init__(self, which, n, p, q, terms=None):
        self.which, self.n, self.p, self.q = which, n, p, q
        self.terms: Dict = {}
        for (alpha, legs), c in (terms or {}).items():
            s, a = _wedge_normal(alpha)
            if s and c:
                _add(self.terms, (a, tuple(legs)), Q(c) * s)

    @staticmethod
    def make(which, n, alpha, legs: Sequence[FdB], coeff=1) -> "BiCochain":
        out: Dict = {}
        for combo in iproduct(*[list(f.terms.items()) for f in legs]):
            c = Q(coeff)
            for _, v in combo:
                c *= v
            _add(out, (tuple(alpha), tuple(k for k, _ in combo)), c)
        return BiCochain(which, n, len(alpha), len(legs), out)

    def __add__(self, o):
        t = dict(self.terms)
        for k, c in o.terms.items():
            _add(t, k, c)
        return BiCochain(self.which, self.n, self.p, self.q, t)

    def scale(self, c):
        return BiCochain(self.which, self.n, self.p, self.q, {k: v * Q(c) for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + o.scale(-1)

    def is_zero(self):
        return not self.terms

    def __eq__(self, o):
        return isinstance(o, BiCochain) and (self.p, self.q, self.terms) == (o.p, o.q, o.terms)

    def __repr__(self):
        return repr(self.terms)


def b_star(c: BiCochain, variant: str = "left") -> BiCochain:
    """Horizontal coboundary.  The last face appends the coaction leg of alpha:
    variant 'left' uses alpha<-1> (theta^i -> beta^i_j (x) theta^j) as is,
    'right' uses S(alpha<-1>)."""
    n, w = c.n, c.which
    one = (0, 0, ())
    out = BiCochain(w, n, c.p, c.q + 1)
    q = c.q
    for (a, legs), v in c.terms.items():
        out = out + BiCochain(w, n, c.p, q + 1, {(a, (one,) + legs): v})
        for i in range(q):
            t = fdb_coproduct(FdB(w, n, {legs[i]: 1}))
            for kk, x in t.terms.items():
                out = out + BiCochain(w, n, c.p, q + 1,
                                      {(a, legs[:i] + kk + legs[i + 1:]): v * x * (-1) ** (i + 1)})
        for f, a2 in _theta_coaction(w, n, a):
            if variant == "right":
                f = fdb_antipode(f)
            for fk, x in f.terms.items():
                out = out + BiCochain(w, n, c.p, q + 1, {(a2, legs + (fk,)): v * x * (-1) ** (q + 1)})
    return out


def partial_V(c: BiCochain) -> BiCochain:
    """Lie algebra coboundary of the abelian V with the action f <| X = -X |> f
    (diagonal on tensor legs)."""
    n, w = c.n, c.which
    out = BiCochain(w, n, c.p + 1, c.q)
    for (a, legs), v in c.terms.items():
        for i in range(n):
            for pos in range(len(legs)):
                img = x_action(w, n, i, FdB(w, n, {legs[pos]: 1}))
                for mk, x in img.terms.items():
                    out = out + BiCochain(w, n, c.p + 1, c.q,
                                          {((i,) + a, legs[:pos] + (mk,) + legs[pos + 1:]): -v * x})
    return out


def antisym_embed(c: CECochain) -> BiCochain:
    """Homogeneous-to-inhomogeneous transfer of the antisymmetrization:
    alpha (x) f0^..^fq -> alpha (x) sum_pi sgn(pi) eps(f_pi0) D(f_pi1, .., f_piq),
    where f_pik is spread over the first k legs by the iterated coproduct
    (the cochain evaluated at (1, g1, g1 g2, ...))."""
    n, w = c.n, c.which
    q = c.q
    out = BiCochain(w, n, c.p, q)
    for (a, legs), v in c.terms.items():
        for perm in permutations(range(q + 1)):
            sgn, _ = _wedge_normal(perm)
            fs = [FdB(w, n, {legs[i]: 1}) for i in perm]
            e0 = fdb_counit(fs[0])
            if not e0:
                continue
            # tensor over q legs, start with 1
            acc = {tuple([(0, 0, ())] * q): Fraction(1)}
            for k in range(1, q + 1):
                spread = _iterated_fdb(fs[k], k)    # k legs
                new: Dict = {}
                for key, x in acc.items():
                    for sk, y in spread.items():
                        legsk = []
                        coeffs = [Fraction(1)]
                        pieces = []
                        for pos in range(k):
                            pieces.append(list((FdB(w, n, {key[pos]: 1}) * FdB(w, n, {sk[pos]: 1})).terms.items()))
                        for combo in iproduct(*pieces):
                            z = x * y
                            for _, u in combo:
                                z *= u
                            _add(new, tuple(m for m, _ in combo) + key[k:], z)
                acc = new
            for key, x in acc.items():
                out = out + BiCochain(w, n, c.p, q, {(a, key): v * sgn * e0 * x})
    return out


def _iterated_fdb(f: FdB, k: int) -> Dict:
    """Delta^{k-1}(f) as {tuple of k keys: coeff}."""
    cur = {(m,): c for m, c in f.terms.items()}
    for _ in range(k - 1):
        nxt: Dict = {}
        for key, c in cur.items():
            t = fdb_coproduct(FdB(f.which, f.n, {key[-1]: 1}))
            for kk, x in t.terms.items():
                _add(nxt, key[:-1] + kk, c * x)
        cur = nxt
    return cur
