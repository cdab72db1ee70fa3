"""Verification suites.

Each suite is a function ``(cfg) -> list[Check]``.  Checks are exact: a check
passes only on bit-exact equality of rationals/polynomials.  Batched random
checks report how many cases ran and the first failing case.
"""
from __future__ import annotations

import gc
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement as cwr
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import bott
from .cyclic import (C0_H, C0_dagger, C1_H, C1_dagger, CECochain, BiCochain, FH, FK, B0, antisym_embed,
                     b_star, ce_b_wedge, ce_coinvariance_check, ce_partial_wedge, certify_cyclic_cocycle,
                     cochain, connes_B, connes_B_oracle, cyclic_tau, golden_cochains, hochschild_b, normalize,
                     partial_V, r_H_cochain)
from .exact import Poly, TruncSeries, clog
from .fdb import (FdB, FdBTensor, I1, I2, coaction_N, fdb_antipode, fdb_coproduct, fdb_counit, fdb_eval,
                  gl_action, gl_action_formula, iota, iota_inv, pairing, phi_inverse, phi_iso, pi1, pi2)
from .jets import (CrossedElement, JetDiffeo, crossed_mul, matched_pair_T, n_action_of_gl, random_crossed,
                   random_jet, random_rational, random_series, symbolic_jet)
from .kn_algebra import Kn, apply_element, kn_sum, letter_element, pbw_normalize, word_product
from .kn_hopf import (KnTensor, antipode, bicrossed_join, bicrossed_split, coaction_V, coproduct, counit,
                      gamma_K, generators_up_to, mpi_report, u_action, v_action, x_power)

DEFAULT_SEED = 20240601


@dataclass
class Config:
    n: int = 1
    order: int = 5
    seed: int = DEFAULT_SEED

    def rng(self, tag: str) -> random.Random:
        # independent deterministic stream per suite
        return random.Random(f"{self.seed}:{tag}")

    def dims(self) -> List[int]:
        return sorted({1, 2, self.n})


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    cases: int = 1

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "cases": self.cases, "detail": self.detail}


def _batch(name: str, cases, pred: Callable) -> Check:
    """Run pred on every case; pred returns True or a failure witness string."""
    count = 0
    for case in cases:
        count += 1
        r = pred(case)
        if r is not True:
            return Check(name, False, f"case {count}: {r}", count)
    return Check(name, True, "", count)


def _eq(a, b, what="") -> object:
    return True if a == b else f"{what}lhs={a!r} rhs={b!r}"


# --------------------------------------------------------------------------
# random K_n elements
# --------------------------------------------------------------------------

def _letters(n: int, max_weight: int, with_log: bool = False):
    out = [(("D", 1), 0), (("D", -1), 0)]
    out += [(("X", l), 1) for l in range(n)]
    for k in range(1 if n > 1 else 2, max_weight + 2):
        for i in range(n):
            for J in cwr(range(n), k):
                out.append((("S", i, J), k - 1))
    if with_log:
        out.append((("L",), 0))
    return out


def random_word(rng: random.Random, n: int, max_weight: int, max_len: int = 4, with_log: bool = False):
    letters = _letters(n, max_weight, with_log)
    word, w = [], 0
    for _ in range(rng.randint(1, max_len)):
        cands = [(g, gw) for g, gw in letters if w + gw <= max_weight]
        g, gw = rng.choice(cands)
        word.append(g)
        w += gw
    return word


def random_kn(rng: random.Random, n: int, max_weight: int, terms: int = 1, with_log: bool = False) -> Kn:
    out = Kn.zero(n)
    for _ in range(terms):
        c = random_rational(rng, -3, 3, 2) or Fraction(1)
        out = out + word_product(n, random_word(rng, n, max_weight, 3, with_log)).scale(c)
    return out


def _counit_leg(k: Kn) -> KnTensor:
    return KnTensor(k.n, 0, {(): counit(k)})


def _grouped(h: Kn, keep: int) -> Dict:
    # bilinearity: collect the other leg for each distinct monomial in leg `keep`
    groups: Dict = {}
    for legs, c in coproduct(h).terms.items():
        groups.setdefault(legs[keep], {})[legs[1 - keep]] = c
    return groups


def _m_S_id(h: Kn) -> Kn:
    return kn_sum(h.n, (antipode(Kn(h.n, rest)) * Kn(h.n, {b: 1})
                        for b, rest in _grouped(h, 1).items()))


def _m_id_S(h: Kn) -> Kn:
    return kn_sum(h.n, (Kn(h.n, {a: 1}) * antipode(Kn(h.n, rest))
                        for a, rest in _grouped(h, 0).items()))


def _hopf_checks(h: Kn):
    """All Hopf axioms on one element; True or a witness."""
    n = h.n
    D = coproduct(h)
    if D.leg_map(0, coproduct) != D.leg_map(1, coproduct):
        return f"coassociativity fails on {h!r}"
    single = KnTensor.from_legs([h]) if h else KnTensor(n, 1)
    if D.leg_map(0, _counit_leg) != single or D.leg_map(1, _counit_leg) != single:
        return f"counit fails on {h!r}"
    e = Kn.scalar(n, counit(h))
    if _m_S_id(h) != e or _m_id_S(h) != e:
        return f"antipode axiom fails on {h!r}"
    return True


# --------------------------------------------------------------------------
# hopf-axioms
# --------------------------------------------------------------------------

def suite_hopf_axioms(cfg: Config) -> List[Check]:
    out = []
    for n in cfg.dims():
        gens = generators_up_to(n, 3, with_log=(n == 1))
        for name, g in gens:
            r = _hopf_checks(g)
            out.append(Check(f"hopf-axioms/n={n}/generator/{name}", r is True, "" if r is True else r))
        rng = cfg.rng(f"hopf{n}")
        prods = [random_kn(rng, n, 4, terms=1) for _ in range(100)]
        out.append(_batch(f"hopf-axioms/n={n}/random-products/axioms", prods, _hopf_checks))

        pairs = []
        for _ in range(100):
            wa = rng.randint(0, 4)      # split the weight budget; either factor may take all of it
            pairs.append((random_kn(rng, n, wa), random_kn(rng, n, 4 - wa)))
        out.append(_batch(f"hopf-axioms/n={n}/random-products/cop-multiplicative", pairs,
                          lambda ab: _eq(coproduct(ab[0] * ab[1]), coproduct(ab[0]) * coproduct(ab[1]))))
        out.append(_batch(f"hopf-axioms/n={n}/random-products/antipode-antimultiplicative", pairs[:20],
                          lambda ab: _eq(antipode(ab[0] * ab[1]), antipode(ab[1]) * antipode(ab[0]))))
        out.append(_batch(f"hopf-axioms/n={n}/random-products/counit-multiplicative", pairs,
                          lambda ab: _eq(counit(ab[0] * ab[1]), counit(ab[0]) * counit(ab[1]))))
    return out


# --------------------------------------------------------------------------
# pbw: rewriting, representation, faithfulness
# --------------------------------------------------------------------------

def _pbw_basis(n: int, max_weight: int) -> List[Kn]:
    """PBW monomials sigma^e prod sigma^i_J X^q with e in {-1,0,1}, weight <= max_weight."""
    from .kn_algebra import ab_reduce
    gens = []
    for k in range(2, max_weight + 2):
        for i in range(n):
            for J in cwr(range(n), k):
                gens.append(((i, J), k - 1))
    if n > 1:
        gens += [((i, (j,)), 0) for i in range(n) for j in range(n)]
    out = []

    def rec(start, sig, w, first_order):
        yield tuple(sig), w
        for idx in range(start, len(gens)):
            g, gw = gens[idx]
            fo = first_order + (gw == 0)
            if w + gw <= max_weight and (gw > 0 or fo <= 1):
                yield from rec(idx, sig + [g], w + gw, fo)

    seen = set()
    for sig, w in rec(0, [], 0, 0):
        for xw in range(0, max_weight - w + 1):
            for xs in cwr(range(n), xw):
                q = [0] * n
                for l in xs:
                    q[l] += 1
                for e in (-1, 0, 1):
                    red = ab_reduce(n, {(e, 0, sig): Fraction(1)})
                    if len(red) != 1:
                        continue
                    (key, c), = red.items()
                    full = key + (tuple(q),)
                    if full not in seen:
                        seen.add(full)
                        out.append(Kn(n, {full: 1}))
    return out


def _generic_series(n: int, order: int, name: str) -> TruncSeries:
    from itertools import product
    c = {e: Poly.var(f"{name}{list(e)}") for e in product(range(order + 1), repeat=n) if sum(e) <= order}
    return TruncSeries(n, order, c)


def _flatten_symbolic(x: CrossedElement) -> Dict:
    """Coordinates of a crossed element whose coefficients are polynomials."""
    v = {}
    for phi, f in x.terms.items():
        for e, c in f.coeffs.items():
            for mono, a in Poly.coerce(c).terms.items():
                v[(e, mono)] = a
    return v


def suite_pbw(cfg: Config) -> List[Check]:
    out = []
    order = min(cfg.order, 5)
    for n in cfg.dims():
        rng = cfg.rng(f"pbw{n}")
        words = [random_word(rng, n, 3, 5) for _ in range(60)]

        def confl(w, n=n):
            a = pbw_normalize(n, w, strategy="left")
            b = pbw_normalize(n, w, strategy="right")
            c = word_product(n, w, fold="left")
            d = word_product(n, w, fold="right")
            return True if a == b == c == d else f"word {w}: {a!r} | {b!r} | {c!r} | {d!r}"
        out.append(_batch(f"pbw/n={n}/confluence", words, confl))

        # representation: k(ab) = k(1)(a) k(2)(b)
        jorder = order if n == 1 else min(order, 4)
        triples = []
        for _ in range(100):
            k = random_kn(rng, n, 2 if n == 1 else 1, terms=1)
            a = random_crossed(rng, n, jorder, terms=1)
            b = random_crossed(rng, n, jorder, terms=1)
            triples.append((k, a, b))

        def rep(t):
            k, a, b = t
            lhs = apply_element(k, crossed_mul(a, b))
            rhs = CrossedElement(n)
            for (m1, m2), c in coproduct(k).terms.items():
                rhs = rhs + crossed_mul(apply_element(Kn(n, {m1: c}), a), apply_element(Kn(n, {m2: 1}), b))
            return True if lhs.agrees(rhs) else f"k={k!r}"
        out.append(_batch(f"pbw/n={n}/representation k(ab)=k(1)(a)k(2)(b)", triples, rep))

        # module property: (ab)(x) = a(b(x))
        mods = [(random_kn(rng, n, 1), random_kn(rng, n, 1), random_crossed(rng, n, jorder, terms=1))
                for _ in range(30)]
        out.append(_batch(f"pbw/n={n}/module (ab)x=a(bx)", mods,
                          lambda t: True if apply_element(t[0] * t[1], t[2]).agrees(
                              apply_element(t[0], apply_element(t[1], t[2]))) else f"a={t[0]!r} b={t[1]!r}"))

        # det expansion acts as det J
        xs = [random_crossed(rng, n, jorder, terms=1) for _ in range(10)]
        det = Kn.det_expansion(n)
        out.append(_batch(f"pbw/n={n}/det-expansion acts as det J", xs,
                          lambda x: True if apply_element(det, x).agrees(apply_element(Kn.det(n, 1), x))
                          else "mismatch"))

        # faithfulness: equal normal forms act equally; distinct PBW monomials are independent
        # a word acting letter by letter agrees with its normal form
        wx = [(random_word(rng, n, 2, 4), random_crossed(rng, n, jorder, terms=1)) for _ in range(20)]

        def word_action(t, n=n):
            w, x = t
            y = x
            for g in reversed(w):
                y = apply_element(letter_element(n, g), y)
            return True if y.agrees(apply_element(pbw_normalize(n, w), x)) else f"word {w}"
        out.append(_batch(f"pbw/n={n}/faithfulness word action = normal form action", wx, word_action))

        # distinct PBW monomials give linearly independent operators on a generic element
        basis = _pbw_basis(n, 2 if n == 1 else 1)
        # order 5 leaves derivative demand + 2 of headroom at these weights
        gen_jet = symbolic_jet(n, 5, "u", linear_identity=(n > 1))
        gen_f = _generic_series(n, 5, "f")
        x = CrossedElement.single(gen_f, gen_jet)
        vecs = [_flatten_symbolic(apply_element(b, x)) for b in basis]
        from .exact import rank
        r = rank(vecs)
        out.append(Check(f"pbw/n={n}/faithfulness operator-rank", r == len(basis),
                         f"rank {r} of {len(basis)} PBW monomials", len(basis)))

    # log extension relations (n = 1)
    X, L, si = Kn.X(1, 0), Kn.logs(1), Kn.det(1, -1)
    s11 = Kn.sigma(1, 0, (0, 0))
    out.append(Check("pbw/n=1/log X1*logs", X * L == L * X + si * s11, repr(X * L)))
    out.append(Check("pbw/n=1/log logs*sinv", L * si == si * L, repr(L * si)))
    out.append(Check("pbw/n=1/log antipode", antipode(L) == -L and _m_S_id(L).is_zero(), repr(antipode(L))))
    out.append(Check("pbw/n=1/X1*sinv", X * si == si * X - Kn.det(1, -2) * s11, repr(X * si)))
    return out


# --------------------------------------------------------------------------
# mpi
# --------------------------------------------------------------------------

def suite_mpi(cfg: Config) -> List[Check]:
    out = []
    rep = mpi_report(1, generators_up_to(1, 3, with_log=True))
    left = sum(1 for _, a, _ in rep if a)
    right = sum(1 for _, _, b in rep if b)
    for name, a, b in rep:
        out.append(Check(f"mpi/n=1/S^2=Ad(sinv)/{name}", a,
                         f"S^2 h = sinv h s: {a}; S^2 h = s h sinv: {b}"))
    out.append(Check("mpi/n=1/orientation", left == len(rep),
                     f"S^2 = sinv(.)s holds on {left}/{len(rep)}; s(.)sinv holds on {right}/{len(rep)}",
                     len(rep)))
    s = Kn.det(1, 1)
    out.append(Check("mpi/n=1/sigma group-like", coproduct(s) == KnTensor.from_legs([s, s]) and counit(s) == 1))
    # delta = eps on K_1: the character is the counit; delta(sigma) = 1
    out.append(Check("mpi/n=1/delta(sigma)=1", counit(s) == 1))
    for n in cfg.dims():
        if n == 1:
            continue
        rep = mpi_report(n, generators_up_to(n, 1))
        ok = all(a for _, a, _ in rep)
        out.append(Check(f"mpi/n={n}/S^2=Ad(sinv)", ok, "" if ok else repr([x for x in rep if not x[1]]),
                         len(rep)))
    return out


# --------------------------------------------------------------------------
# faadibruno
# --------------------------------------------------------------------------

def _map_tensor(t: FdBTensor, maps, kinds) -> FdBTensor:
    out = FdBTensor(tuple(kinds), t.n)
    for key, c in t.terms.items():
        legs = [m(FdB(w, t.n, {k: 1})) for m, w, k in zip(maps, t.kinds, key)]
        out = out + FdBTensor.from_legs(legs, c)
    return out


def _flip_keys(t: KnTensor) -> Dict:
    return {tuple(k[:3] for k in reversed(key)): c for key, c in t.terms.items()}


def suite_faadibruno(cfg: Config) -> List[Check]:
    out = []
    for n in cfg.dims():
        maxJ = 4 if n == 1 else 3
        if n > 2:
            maxJ = 2
        gens = [(i, J) for k in range(1, maxJ + 1) for J in cwr(range(n), k) for i in range(n)]
        for i, J in gens:
            s = Kn.sigma(n, i, J)
            tag = f"b[{i + 1};{','.join(str(j + 1) for j in J)}]"
            fd = fdb_coproduct(iota(s))
            out.append(Check(f"faadibruno/n={n}/cop=flip(cop_K)/{tag}", fd.terms == _flip_keys(coproduct(s))))
            out.append(Check(f"faadibruno/n={n}/antipode=iota(S_K)/{tag}",
                             iota(antipode(s)) == fdb_antipode(iota(s))))
        binv = FdB.inv(FK, n)
        out.append(Check(f"faadibruno/n={n}/cop(binv) group-like",
                         fdb_coproduct(binv) == FdBTensor.from_legs([binv, binv])))

        rng = cfg.rng(f"fdb{n}")
        order = min(cfg.order, maxJ + 1)
        sample = [(i, J) for i, J in gens if len(J) <= order]
        pairs = [(random_jet(rng, n, order, group="Gdag"), random_jet(rng, n, order, group="Gdag"))
                 for _ in range(8)]

        def ev_hom(p):
            p1, p2 = p
            comp = p1.compose(p2)
            for i, J in sample:
                f = FdB.gen(FK, n, i, J)
                t = fdb_coproduct(f)
                lhs = sum((c * fdb_eval(FdB(FK, n, {a: 1}), p1) * fdb_eval(FdB(FK, n, {b: 1}), p2)
                           for (a, b), c in t.terms.items()), Fraction(0))
                if lhs != fdb_eval(f, comp):
                    return f"beta{i, J}"
            return True
        out.append(_batch(f"faadibruno/n={n}/evaluation homomorphism", pairs, ev_hom))
        out.append(_batch(f"faadibruno/n={n}/antipode = inverse jet", [p[0] for p in pairs],
                          lambda p: True if all(fdb_eval(fdb_antipode(FdB.gen(FK, n, i, J)), p)
                                                == fdb_eval(FdB.gen(FK, n, i, J), p.inverse())
                                                for i, J in sample) else "mismatch"))

        def coassoc(g):
            f = FdB.gen(FK, n, *g)
            t = fdb_coproduct(f)
            left = FdBTensor((FK,) * 3, n)
            right = FdBTensor((FK,) * 3, n)
            for (a, b), c in t.terms.items():
                for (a1, a2), x in fdb_coproduct(FdB(FK, n, {a: 1})).terms.items():
                    left = left + FdBTensor((FK,) * 3, n, {(a1, a2, b): c * x})
                for (b1, b2), x in fdb_coproduct(FdB(FK, n, {b: 1})).terms.items():
                    right = right + FdBTensor((FK,) * 3, n, {(a, b1, b2): c * x})
            return _eq(left, right)
        out.append(_batch(f"faadibruno/n={n}/coassociativity", [g for g in gens if len(g[1]) <= 3], coassoc))

        # Phi and its inverse
        def roundtrip(g):
            f = FdB.gen(FK, n, *g)
            return _eq(phi_inverse(phi_iso(f)), f)
        out.append(_batch(f"faadibruno/n={n}/Phi^-1 Phi = id", gens, roundtrip))
        ngens = [(i, J) for i, J in gens if len(J) >= 2]

        def roundtrip2(g):
            t = FdBTensor.from_legs([FdB.one("FGL", n), FdB.gen(FH, n, *g)])
            return _eq(phi_iso(phi_inverse(t)), t)
        out.append(_batch(f"faadibruno/n={n}/Phi Phi^-1 = id", ngens, roundtrip2))

        lam_nu = [(random_jet(rng, n, order, group="GL"), random_jet(rng, n, order, group="N")) for _ in range(5)]

        def phi_eval(p):
            lam, nu = p
            for i, J in sample:
                t = phi_iso(FdB.gen(FK, n, i, J))
                v = sum((c * fdb_eval(FdB("FGL", n, {a: 1}), lam) * fdb_eval(FdB(FH, n, {b: 1}), nu)
                         for (a, b), c in t.terms.items()), Fraction(0))
                if v != fdb_eval(FdB.gen(FK, n, i, J), lam.compose(nu)):
                    return f"beta{i, J}"
            return True
        out.append(_batch(f"faadibruno/n={n}/Phi(f)(lambda,nu)=f(lambda nu)", lam_nu, phi_eval))

        # beta^i_J = check-alpha^i_s hat-alpha^s_J, by evaluation on lambda nu
        def factor_id(p):
            lam, nu = p
            psi = lam.compose(nu)
            L = lam.linear_part()
            for i, J in ngens:
                v = sum((L[i][s] * fdb_eval(FdB.gen(FH, n, s, J), nu) for s in range(n)), Fraction(0))
                if v != fdb_eval(FdB.gen(FK, n, i, J), psi):
                    return f"beta{i, J}"
            return True
        out.append(_batch(f"faadibruno/n={n}/beta = alpha-check alpha-hat", lam_nu, factor_id))

        # projections and sections are Hopf maps
        for nm, m, tgt in (("pi1", pi1, "FGL"), ("pi2", pi2, FH)):
            def hopf_map(g, m=m, tgt=tgt):
                f = FdB.gen(FK, n, *g)
                if tgt == FH and len(g[1]) == 1:
                    img = m(f)
                    return _eq(fdb_counit(img) if img.terms else Fraction(0), fdb_counit(f) if g[0] == g[1][0]
                               else Fraction(0))
                if tgt == "FGL" and len(g[1]) > 1:
                    return _eq(m(f), FdB(tgt, n))
                lhs = fdb_coproduct(m(f))
                rhs = _map_tensor(fdb_coproduct(f), [m, m], [tgt, tgt])
                return _eq(lhs, rhs)
            out.append(_batch(f"faadibruno/n={n}/{nm} is a coalgebra map", gens, hopf_map))
        out.append(_batch(f"faadibruno/n={n}/pi1 I1 = id", [(i, J) for i, J in gens if len(J) == 1],
                          lambda g: _eq(pi1(I1(FdB.gen("FGL", n, *g))), FdB.gen("FGL", n, *g))))
        out.append(_batch(f"faadibruno/n={n}/pi2 I2 = id", ngens,
                          lambda g: _eq(pi2(I2(FdB.gen(FH, n, *g))), FdB.gen(FH, n, *g))))

        # restriction to N
        nus = [p[1] for p in lam_nu]
        out.append(_batch(f"faadibruno/n={n}/beta restricted to N = alpha", nus,
                          lambda nu: True if all(fdb_eval(FdB.gen(FK, n, i, J), nu) ==
                                                 fdb_eval(FdB.gen(FH, n, i, J), nu) for i, J in ngens)
                          else "mismatch"))

        # coaction of GL on F(N): f(nu <| lambda) = f<0>(nu) f<1>(lambda)
        def coact(p):
            lam, nu = p
            act = n_action_of_gl(nu, lam)
            for i, J in ngens:
                if len(J) > order:
                    continue
                f = FdB.gen(FH, n, i, J)
                t = coaction_N(f)
                v = sum((c * fdb_eval(FdB(FH, n, {a: 1}), nu) * fdb_eval(FdB("FGL", n, {b: 1}), lam)
                         for (a, b), c in t.terms.items()), Fraction(0))
                if v != fdb_eval(f, act):
                    return f"alpha{i, J}"
            return True
        out.append(_batch(f"faadibruno/n={n}/GL coaction on F(N)", lam_nu, coact))

        # comodule-coalgebra: Delta(f)<0>..: (Delta (x) id) coaction compatibility via evaluation
        def comod(p):
            lam, nu = p
            nu2 = random_jet(rng, n, order, group="N")
            act = n_action_of_gl(nu.compose(nu2), lam)
            rhs_jet = n_action_of_gl(nu, lam).compose(n_action_of_gl(nu2, lam))
            return True if act == rhs_jet else "(nu1 nu2)<|lam != (nu1<|lam)(nu2<|lam)"
        out.append(_batch(f"faadibruno/n={n}/GL acts on N by automorphisms", lam_nu, comod))

        # gl_n actions and pairing
        Ys = [(i, j) for i in range(n) for j in range(n)]
        out.append(_batch(f"faadibruno/n={n}/gl action = derivation formula",
                          [(Y, g) for Y in Ys for g in ngens if len(g[1]) <= 3],
                          lambda t: _eq(gl_action(t[0], FdB.gen(FH, n, *t[1])),
                                        gl_action_formula(t[0], FdB.gen(FH, n, *t[1])))))

        def pairing_axioms(t):
            a, b, Y1, Y2 = t
            # <fg, Y> = <f, Y> eps(g) + eps(f) <g, Y>
            fa, fb = FdB.gen("FGL", n, *a), FdB.gen("FGL", n, *b)
            lhs = pairing(fa * fb, [Y1])
            rhs = pairing(fa, [Y1]) * fdb_counit(fb) + fdb_counit(fa) * pairing(fb, [Y1])
            if lhs != rhs:
                return "Leibniz"
            # <f, Y1 Y2> = <f(1), Y1><f(2), Y2>
            lhs = pairing(fa, [Y1, Y2])
            rhs = sum((c * pairing(FdB("FGL", n, {x: 1}), [Y1]) * pairing(FdB("FGL", n, {y: 1}), [Y2])
                       for (x, y), c in fdb_coproduct(fa).terms.items()), Fraction(0))
            return _eq(lhs, rhs, "product ")
        first = [(i, (j,)) for i in range(n) for j in range(n)]
        cases = [(a, b, Y1, Y2) for a in first for b in first for Y1 in Ys for Y2 in Ys][:64]
        out.append(_batch(f"faadibruno/n={n}/gl pairing axioms", cases, pairing_axioms))
    return out


# --------------------------------------------------------------------------
# bicrossed
# --------------------------------------------------------------------------

def suite_bicrossed(cfg: Config) -> List[Check]:
    out = []
    for n in cfg.dims():
        rng = cfg.rng(f"bic{n}")
        els = [random_kn(rng, n, 3 if n == 1 else 2, terms=2) for _ in range(30)]
        out.append(_batch(f"bicrossed/n={n}/split-join round trip", els,
                          lambda k: _eq(bicrossed_join(n, bicrossed_split(k)), k)))

        abels = [random_kn(rng, n, 2, terms=1) for _ in range(20)]
        abels = [Kn.from_ab(n, {kk[:3]: c for kk, c in k.terms.items()}) for k in abels]

        def vact(f):
            for l in range(n):
                if v_action(l, f) != Kn.X(n, l) * f - f * Kn.X(n, l):
                    return f"X{l + 1}"
            return True
        out.append(_batch(f"bicrossed/n={n}/X|>f = [X,f]", abels, vact))

        def lie_hopf(f):
            for l in range(n):
                lhs = coproduct(v_action(l, f))
                rhs = KnTensor(n, 2)
                for (a, b), c in coproduct(f).terms.items():
                    fa, fb = Kn(n, {a: c}), Kn(n, {b: 1})
                    rhs = rhs + KnTensor.from_legs([v_action(l, fa), fb]) if v_action(l, fa) else rhs
                    for k, sig in coaction_V(n, l):
                        x = v_action(k, fb)
                        if x:
                            rhs = rhs + KnTensor.from_legs([sig * fa, x])
                if lhs != rhs:
                    return f"X{l + 1} on {f!r}"
            return True
        out.append(_batch(f"bicrossed/n={n}/Lie-Hopf compatibility", abels, lie_hopf))

        def mult_rule(t):
            f, a, g, b = t
            lhs = f * x_power(n, a) * g * x_power(n, b)
            rhs = Kn.zero(n)
            from .kn_hopf import uv_coproduct
            for c, a1, a2 in uv_coproduct(a):
                rhs = rhs + f * u_action(a1, g) * x_power(n, tuple(p + q for p, q in zip(a2, b))).scale(c)
            return _eq(lhs, rhs)
        quads = []
        for _ in range(20):
            a = tuple(rng.randint(0, 2 if n == 1 else 1) for _ in range(n))
            b = tuple(rng.randint(0, 1) for _ in range(n))
            quads.append((rng.choice(abels), a, rng.choice(abels), b))
        out.append(_batch(f"bicrossed/n={n}/bicrossed product rule", quads, mult_rule))

        # gamma_K: value at psi is the Taylor coordinate; cocycle property
        order = min(cfg.order, 5 if n == 1 else 4)
        jets = [(random_jet(rng, n, order, group="Gdag"), random_jet(rng, n, order, group="Gdag"))
                for _ in range(6)]
        small = [k for k in abels if all(sum(len(J) for _, J in kk[2]) <= order - 1 for kk in k.terms)][:8]

        def cocycle(p):
            p1, p2 = p
            for f in small:
                lhs = gamma_K(f, p1.compose(p2))
                rhs = None
                for (a, b), c in coproduct(f).terms.items():
                    g1 = gamma_K(Kn(n, {a: c}), p2)
                    g2 = gamma_K(Kn(n, {b: 1}), p1).compose(p2.components)
                    term = g1 * g2
                    rhs = term if rhs is None else rhs + term
                if not lhs.agrees(rhs):
                    return f"f={f!r}"
            return True
        out.append(_batch(f"bicrossed/n={n}/gamma_K cocycle property", jets, cocycle))

        def s_via_gamma(p):
            psi = p[0]
            for f in small:
                lhs = gamma_K(antipode(f), psi).const_term()
                rhs = fdb_eval(iota(f), psi.inverse())
                if lhs != rhs:
                    return f"f={f!r}"
            return True
        out.append(_batch(f"bicrossed/n={n}/antipode via gamma_K", jets, s_via_gamma))

        # jet groupoid and matched pair
        trip = [tuple(random_jet(rng, n, order, offset=True) for _ in range(3)) for _ in range(5)]
        out.append(_batch(f"bicrossed/n={n}/jet composition associative", trip,
                          lambda t: _eq(t[0].compose(t[1]).compose(t[2]), t[0].compose(t[1].compose(t[2])))))
        out.append(_batch(f"bicrossed/n={n}/jet inverse", [t[0] for t in trip],
                          lambda p: _eq(p.compose(p.inverse()).zero_part(),
                                        JetDiffeo.identity(n, p.order))))

        def decomp(p):
            T, g = p.decompose_translation()
            if T.compose(g) != p and g.compose(T) != p:
                if not (g.zero_part() == p.zero_part() and T.base_offset == p.base_offset):
                    return "translation section"
            lam, nu = p.zero_part().decompose_linear()
            if not nu.in_N() or lam.compose(nu) != p.zero_part():
                return "linear section"
            return True
        out.append(_batch(f"bicrossed/n={n}/decomposition sections", [t[0] for t in trip], decomp))

        def normal(p):
            lam = random_jet(rng, n, order, group="GL")
            nu = random_jet(rng, n, order, group="N")
            w = n_action_of_gl(nu, lam)
            return True if w.in_N() else "nu <| lambda left N"
        out.append(_batch(f"bicrossed/n={n}/N normal under GL", trip, normal))

        def matched(t):
            # quadratic polynomials lifted to order 4: shifts and composites stay exact
            lift = lambda p: JetDiffeo([c.with_order(4) for c in p.components])
            psi1 = lift(random_jet(rng, n, 2, group="Gdag"))
            psi2 = lift(random_jet(rng, n, 2, group="Gdag"))
            b = [random_rational(rng) for _ in range(n)]
            phi = JetDiffeo.translation(b, 4)
            T2, r2 = matched_pair_T(psi2, phi)
            T1, r1 = matched_pair_T(psi1, T2)
            _, r12 = matched_pair_T(psi1.compose(psi2), phi)
            ok = r12 == r1.compose(r2) and T1.base_offset == matched_pair_T(psi1.compose(psi2), phi)[0].base_offset
            return True if ok else "matched-pair axiom"
        out.append(_batch(f"bicrossed/n={n}/matched-pair axiom", trip, matched))

        # crossed product associativity
        xs = [tuple(random_crossed(rng, n, order, terms=1) for _ in range(3)) for _ in range(5)]
        out.append(_batch(f"bicrossed/n={n}/crossed product associative", xs,
                          lambda t: True if crossed_mul(crossed_mul(t[0], t[1]), t[2]).agrees(
                              crossed_mul(t[0], crossed_mul(t[1], t[2]))) else "mismatch"))
    return out


# --------------------------------------------------------------------------
# cyclic-cocycles and gv
# --------------------------------------------------------------------------

def _random_cochain(rng, q: int, with_log: bool, normalized: bool) -> KnTensor:
    legs = [random_kn(rng, 1, 1, terms=1, with_log=with_log) for _ in range(q)]
    t = cochain(1, *legs) if q else cochain(1, coeff=random_rational(rng) or 1)
    if q and rng.random() < 0.5:
        legs2 = [random_kn(rng, 1, 1, terms=1, with_log=with_log) for _ in range(q)]
        t = t + cochain(1, *legs2)
    return normalize(t) if normalized else t


def suite_cyclic(cfg: Config) -> List[Check]:
    out = []
    g = golden_cochains()
    X, s, si, s2 = Kn.X(1, 0), Kn.det(1, 1), Kn.det(1, -1), Kn.det(1, -2)
    s11, one = Kn.sigma(1, 0, (0, 0)), Kn.one(1)
    for name in ("C0", "C1"):
        cert = certify_cyclic_cocycle(g[name])
        for cn, ok, wit in cert:
            out.append(Check(f"cyclic-cocycles/{name}/{cn}", ok, wit))
    bad = g["C0"] + cochain(1, X)
    cert = certify_cyclic_cocycle(bad)
    out.append(Check("cyclic-cocycles/C0+1(x)X1 rejected", not all(ok for _, ok, _ in cert),
                     "; ".join(f"{cn}:{ok}" for cn, ok, _ in cert)))
    bX = hochschild_b(cochain(1, X))
    exp = cochain(1, one, X) - cochain(1, X, one) - cochain(1, s, X) + cochain(1, X, si)
    out.append(Check("cyclic-cocycles/b(1(x)X1) explicit", bX == exp, repr(bX)))
    bu = hochschild_b(g["u1"])
    out.append(Check("cyclic-cocycles/u1/b=0", bu.is_zero(), repr(bu)))
    Bu = connes_B(g["u1"])
    out.append(Check("cyclic-cocycles/u1/B=C1", Bu == g["C1"], repr(Bu)))
    out.append(Check("cyclic-cocycles/u1/B matches oracle", Bu == connes_B_oracle(g["u1"])))
    BC0 = connes_B(g["C0"])
    out.append(Check("cyclic-cocycles/B(C0) matches oracle", BC0 == connes_B_oracle(g["C0"]), repr(BC0)))
    out.append(Check("cyclic-cocycles/B(scalar)=0", connes_B(cochain(1, coeff=3)).is_zero()))

    rng = cfg.rng("cyc")
    rand = [_random_cochain(rng, rng.randint(0, 3), rng.random() < 0.5, False) for _ in range(50)]
    out.append(_batch("cyclic-cocycles/b^2=0 random", rand,
                      lambda t: True if hochschild_b(hochschild_b(t)).is_zero() else repr(t)))
    normd = [_random_cochain(rng, rng.randint(1, 3), rng.random() < 0.5, True) for _ in range(20)]
    normd = [t for t in normd if not t.is_zero()]
    out.append(_batch("cyclic-cocycles/B^2=0 random normalized", normd,
                      lambda t: True if (t.q < 2 or connes_B(connes_B(t)).is_zero()) else repr(t)))

    def bB(t):
        lhs = hochschild_b(connes_B(t)) if t.q >= 1 else None
        rhs = connes_B(hochschild_b(t))
        tot = (lhs + rhs) if lhs is not None else rhs
        return True if tot.is_zero() else f"{t!r} -> {tot!r}"
    out.append(_batch("cyclic-cocycles/bB+Bb=0 random normalized", normd, bB))

    def tau_period(t):
        cur = t
        for _ in range(t.q + 1):
            cur = cyclic_tau(cur)
        return _eq(cur, t)
    out.append(_batch("cyclic-cocycles/tau^(q+1)=id", [t for t in normd if t.q <= 2], tau_period))
    return out


def suite_gv(cfg: Config) -> List[Check]:
    out = []
    g = golden_cochains()
    L, si, s2 = Kn.logs(1), Kn.det(1, -1), Kn.det(1, -2)
    s11 = Kn.sigma(1, 0, (0, 0))
    a = cochain(1, L, s2 * s11)
    b = cochain(1, s2 * s11, si * L)
    out.append(Check("gv/b(1(x)logs(x)s^-2 s11)=0", hochschild_b(a).is_zero(), repr(hochschild_b(a))))
    out.append(Check("gv/b(1(x)s^-2 s11(x)sinv logs)=0", hochschild_b(b).is_zero(), repr(hochschild_b(b))))
    t1 = cyclic_tau(a)
    e1 = -(cochain(1, s2 * s11 * L, si) + cochain(1, s2 * s11, si * L))
    out.append(Check("gv/tau2(1(x)logs(x)s^-2 s11)", t1 == e1, repr(t1)))
    t2 = cyclic_tau(b)
    e2 = -(cochain(1, s2 * s11 * L, si) + cochain(1, L, s2 * s11))
    out.append(Check("gv/tau2(1(x)s^-2 s11(x)sinv logs)", t2 == e2, repr(t2)))
    out.append(Check("gv/tau2(GV)=GV", cyclic_tau(g["GV"]) == g["GV"]))
    for cn, ok, wit in certify_cyclic_cocycle(g["GV"]):
        out.append(Check(f"gv/GV/{cn}", ok, wit))
    bad = g["GV"] + cochain(1, Kn.one(1), L)
    cert = certify_cyclic_cocycle(bad)
    out.append(Check("gv/GV+1(x)1(x)logs rejected", not all(ok for _, ok, _ in cert),
                     "; ".join(f"{cn}:{ok}" for cn, ok, _ in cert)))
    return out


# --------------------------------------------------------------------------
# ce-cocycles
# --------------------------------------------------------------------------

def suite_ce(cfg: Config) -> List[Check]:
    out = []
    c0, c1 = C0_dagger(), C1_dagger()
    h0, h1 = C0_H(), C1_H()
    for nm, c in (("C0dagger", c0), ("C1dagger", c1), ("C0_H", h0), ("C1_H", h1)):
        out.append(Check(f"ce-cocycles/{nm}/coinvariant", ce_coinvariance_check(c)))
        bw = ce_b_wedge(c)
        out.append(Check(f"ce-cocycles/{nm}/b_wedge=0", bw.is_zero(), repr(bw)))
        pw = ce_partial_wedge(c)
        out.append(Check(f"ce-cocycles/{nm}/partial_wedge=0", pw.is_zero(), repr(pw)))
    bad = CECochain.make(FK, 1, (0,), [FdB.one(FK, 1), FdB.gen(FK, 1, 0, (0, 0))])
    out.append(Check("ce-cocycles/th1(x)1^b11 not coinvariant", not ce_coinvariance_check(bad)))
    rh = r_H_cochain(c1)
    out.append(Check("ce-cocycles/r_H(C1dagger)=C1_H", rh == h1, repr(rh)))
    for n in cfg.dims():
        if n == 1:
            continue
        c = C0_dagger(n)
        out.append(Check(f"ce-cocycles/n={n}/C0dagger coinvariant and closed",
                         ce_coinvariance_check(c) and ce_b_wedge(c).is_zero() and ce_partial_wedge(c).is_zero()))

    # unsymmetrized bicomplex
    rng = cfg.rng("ce")
    for n in cfg.dims():
        if n > 2:
            continue
        cands = []
        gens = [FdB.gen(FK, n, i, J) for k in (1, 2) for J in cwr(range(n), k) for i in range(n)]
        gens = [g for g in gens if g.terms] + [FdB.inv(FK, n)]
        for _ in range(12):
            p = rng.randint(0, min(n, 1))
            alpha = tuple(sorted(rng.sample(range(n), p)))
            q = rng.randint(0, 2)
            legs = [rng.choice(gens) for _ in range(q)]
            cands.append(BiCochain.make(FK, n, alpha, legs))
        out.append(_batch(f"ce-cocycles/n={n}/b*^2=0", cands,
                          lambda c: True if b_star(b_star(c)).is_zero() else repr(c)))
        out.append(_batch(f"ce-cocycles/n={n}/partial_V^2=0", cands,
                          lambda c: True if partial_V(partial_V(c)).is_zero() else repr(c)))
    e = antisym_embed(c1)
    out.append(Check("ce-cocycles/embed(C1dagger) b*-closed", b_star(e).is_zero(), repr(b_star(e))))
    out.append(Check("ce-cocycles/embed(C1dagger) partial_V-closed", partial_V(e).is_zero(), repr(partial_V(e))))
    e0 = antisym_embed(c0)
    out.append(Check("ce-cocycles/embed(C0dagger) closed", b_star(e0).is_zero() and partial_V(e0).is_zero()))
    return out


# --------------------------------------------------------------------------
# phi-c: geometric side, n = 1
# --------------------------------------------------------------------------

def _random_geo(rng, frame: int, fam: str, weight: int = 2) -> bott.Crossed:
    k = random_kn(rng, 1, weight, terms=rng.randint(1, 2))
    base = bott.dvar(fam, 0, 0) if rng.random() < 0.7 else bott.dvar(fam, 0, 0) * bott.dvar(fam, 1, 0)
    return bott.Crossed({frame: base}).apply(k)


def suite_phi_c(cfg: Config) -> List[Check]:
    out = []
    order = max(cfg.order, 4)
    u = symbolic_jet(1, order, "u")
    v = symbolic_jet(1, order, "v")
    R = bott.fiber_integrate(bott.simplicial_curvature([u, v]))
    out.append(Check("phi-c/oint R1 = c1 (generic jets)", R is not None and R == bott.c1(u, v)))
    w = symbolic_jet(1, order, "w")
    out.append(Check("phi-c/R2 has no top component", bott.fiber_integrate(bott.simplicial_curvature([u, v, w]))
                     is None))
    Rsame = bott.simplicial_curvature([u, u])
    out.append(Check("phi-c/curvature vanishes on equal arguments", Rsame.is_zero()))
    th1 = bott.theta_K(C1_dagger(), [u, v])
    out.append(Check("phi-c/Theta_K(C1dagger)=c1", th1 == bott.c1(u, v).const_term(), repr(th1)))
    out.append(Check("phi-c/Theta_K(C0dagger)=c0", bott.theta_K(C0_dagger(), [u]) == bott.c0(u)))
    out.append(Check("phi-c/Theta_K antisymmetric",
                     bott.theta_K(C1_dagger(), [v, u]) == -th1))

    rng = cfg.rng("geo")
    pairs = [(random_jet(rng, 1, order), random_jet(rng, 1, order)) for _ in range(20)]

    def transl(p):
        p0, p1 = p
        b0, b1 = random_rational(rng), random_rational(rng)
        t0 = JetDiffeo(p0.components, base_offset=[b0], check=False)
        t1 = JetDiffeo(p1.components, base_offset=[b1], check=False)
        a = bott.theta_K(C1_dagger(), [p0, p1])
        b = bott.theta_K(C1_dagger(), [t0, t1])
        return _eq(a, b)
    out.append(_batch("phi-c/Theta_K translation insensitive", pairs, transl))

    for which in ("c0", "c1"):
        k, ok, wit, lhs = bott.phi_C_reduce(which)
        out.append(Check(f"phi-c/Phi_C({which}) = chi_tau({k!r})", ok, f"primitive {wit!r}"))

    tr = []
    for _ in range(20):
        j = rng.choice([1, 2])
        tr.append((_random_geo(rng, j, "a"), _random_geo(rng, -j, "b")))
    out.append(_batch("phi-c/sigma^-1 trace property", tr,
                      lambda p: True if bott.sigma_trace_identity(*p)[0] else "not equivalent"))

    a0, a1 = bott.standard_pair()
    ks = [Kn.X(1, 0), Kn.det(1, 1), Kn.det(1, -1), Kn.sigma(1, 0, (0, 0))]
    for k in ks:
        out.append(Check(f"phi-c/eps-invariance/{k!r}", bott.eps_invariance(k, a0, a1)[0]))
    rnd = []
    for _ in range(20):
        j = rng.choice([1, 2])
        rnd.append((rng.choice(ks), _random_geo(rng, j, "a", 1), _random_geo(rng, -j, "b", 1)))
    out.append(_batch("phi-c/eps-invariance random", rnd,
                      lambda t: True if bott.eps_invariance(*t)[0] else f"k={t[0]!r}"))

    # formal action vs numeric jets
    jets = [random_jet(rng, 1, order) for _ in range(5)]

    def cross(phi):
        f = random_series(rng, 1, order)
        f = f + TruncSeries.const(1, 1, order)
        for j in (1, 2):
            psi = phi if j == 1 else phi.compose(phi)
            x = CrossedElement.single(f, psi)
            vals = {f"a{d}@0": f.diff(0, d).const_term() if d else f.const_term() for d in range(order + 1)}
            d1 = phi.components[0].diff(0)
            for d in range(1, order + 1):
                vals[f"p{d}@0"] = phi.components[0].diff(0, d).const_term()
                vals[f"p{d}@1"] = vals[f"p{d}@0"]  # phi(0) = 0
            vals["L@0"] = clog(d1.const_term())
            vals["L@1"] = vals["L@0"]
            for k in [Kn.X(1, 0), Kn.det(1, 1), Kn.det(1, -1), Kn.sigma(1, 0, (0, 0)), Kn.logs(1),
                      Kn.det(1, -2) * Kn.sigma(1, 0, (0, 0, 0)) * Kn.X(1, 0) ** 2]:
                need = sum(k2[3][0] + max([len(J) for _, J in k2[2]] + [1]) for k2 in k.terms)
                if need >= order:
                    continue
                got = bott.evaluate(bott.act(k, bott.f0(), j), vals)
                res = apply_element(k, x).terms.get(psi)
                ref = res.const_term() if res is not None else 0
                if Poly.coerce(got) != Poly.coerce(ref):
                    return f"k={k!r} frame {j}: {got!r} vs {ref!r}"
        return True
    out.append(_batch("phi-c/formal action = apply_element on numeric jets", jets, cross))
    return out


# --------------------------------------------------------------------------

SUITES: Dict[str, Callable[[Config], List[Check]]] = {
    "hopf-axioms": suite_hopf_axioms,
    "pbw": suite_pbw,
    "mpi": suite_mpi,
    "faadibruno": suite_faadibruno,
    "bicrossed": suite_bicrossed,
    "ce-cocycles": suite_ce,
    "cyclic-cocycles": suite_cyclic,
    "gv": suite_gv,
    "phi-c": suite_phi_c,
}
SUITE_NAMES = list(SUITES) + ["all"]


def run_suite(name: str, cfg: Optional[Config] = None) -> List[Check]:
    cfg = cfg or Config()
    if name == "all":
        out = []
        for nm in SUITES:
            out += run_suite(nm, cfg)
        return sorted(out, key=lambda c: c.name)
    if name not in SUITES:
        raise KeyError(name)
    # The structure-constant caches hold millions of tuples and the suites make
    # almost no reference cycles; frequent cyclic collections only rescan them.
    thresholds = gc.get_threshold()
    gc.set_threshold(200_000, 50, 100)
    try:
        checks = SUITES[name](cfg)
    except Exception as exc:   # a crashing suite is a failing check, not a crash of the runner
        checks = [Check(f"{name}/error", False, f"{type(exc).__name__}: {exc}")]
    finally:
        gc.set_threshold(*thresholds)
    return sorted(checks, key=lambda c: c.name)


def report(name: str, checks: Sequence[Check]) -> dict:
    return {"schema": "kappa-report/1", "suite": name,
            "checks": [c.as_dict() for c in sorted(checks, key=lambda c: c.name)],
            "pass": all(c.passed for c in checks)}
