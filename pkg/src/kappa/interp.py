"""Evaluate parsed expressions into algebra values, and print values back."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from .cyclic import CECochain
from .exact import KappaError, TruncSeries
from .fdb import FdB, FdBTensor, fdb_antipode, fdb_coproduct, fdb_counit, format_fdb
from .jets import CrossedElement, JetDiffeo
from .jettext import format_jet, format_series
from .kn_algebra import Kn, apply_element, format_coeff_terms, format_kn
from .kn_hopf import KnTensor, antipode, coproduct, counit, format_tensor
from .parser import (Add, Apply, Call, Gen, Jet, Mul, Neg, Node, Num, Pow, Tensor, Wedge, kind_of, parse)


class EvalError(KappaError):
    pass


class Thetas:
    """Element of the exterior algebra on th1..thn: {alpha: coeff}."""

    def __init__(self, terms: Dict[Tuple[int, ...], Fraction]):
        self.terms = {a: c for a, c in terms.items() if c}


def _idx(v: int, n: int, what: str) -> int:
    if not 1 <= v <= n:
        raise EvalError(f"index {v} of {what} out of range 1..{n}")
    return v - 1


def _gen(g: Gen, n: int):
    nm = g.name
    if nm == "s":
        return Kn.det(n, 1)
    if nm == "sinv":
        return Kn.det(n, -1)
    if nm == "logs":
        return Kn.logs(n)
    if nm == "X":
        return Kn.X(n, _idx(g.i, n, "X"))
    if nm == "theta":
        return Thetas({(_idx(g.i, n, "th"),): Fraction(1)})
    if nm in ("b", "binv", "a", "ainv") and g.i is None:
        which = "FGdagger" if nm[0] == "b" else "FGL"
        return FdB.inv(which, n, 1 if nm.endswith("inv") else -1)
    i = _idx(g.i, n, "upper index")
    J = tuple(_idx(j, n, "lower index") for j in g.J)
    if nm == "sigma":
        if n == 1 and len(J) == 1:
            return Kn.det(1, 1)
        return Kn.sigma(n, i, J)
    if nm == "b":
        return FdB.gen("FGdagger", n, i, J)
    which = "FGL" if len(J) == 1 else "FN"
    return FdB.gen(which, n, i, J)


def _promote(x, like):
    if isinstance(x, Fraction):
        if isinstance(like, Kn):
            return Kn.scalar(like.n, x)
        if isinstance(like, FdB):
            return FdB.one(like.which, like.n).scale(x)
        if isinstance(like, Thetas):
            return Thetas({(): x})
    return x


def _mul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    if isinstance(a, Fraction):
        return b.scale(a)
    if isinstance(b, Fraction):
        return a.scale(b)
    if type(a) is not type(b) or (isinstance(a, FdB) and a.which != b.which):
        raise EvalError("product of elements from different algebras")
    return a * b


def _add(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    a, b = _promote(a, b), _promote(b, a)
    if isinstance(a, Thetas):
        t = dict(a.terms)
        for k, c in b.terms.items():
            t[k] = t.get(k, 0) + c
        return Thetas(t)
    return a + b


def _neg(a):
    if isinstance(a, Fraction):
        return -a
    if isinstance(a, Thetas):
        return Thetas({k: -c for k, c in a.terms.items()})
    return a.scale(-1)


def _pow(base_node: Node, base, p: int, n: int):
    if isinstance(base_node, Gen) and base_node.i is None and base_node.name in ("s", "sinv", "b", "binv", "a", "ainv"):
        sgn = -1 if base_node.name.endswith("inv") else 1
        if base_node.name in ("s", "sinv"):
            return Kn.det(n, sgn * p)
        return FdB.inv("FGdagger" if base_node.name[0] == "b" else "FGL", n, -sgn * p)
    if isinstance(base, Fraction):
        if base == 0 and p < 0:
            raise EvalError("zero to a negative power")
        return base ** p
    if p < 0:
        raise EvalError("negative powers are defined for the group-like determinant only")
    r = Kn.one(base.n) if isinstance(base, Kn) else FdB.one(base.which, base.n)
    for _ in range(p):
        r = r * base
    return r


def _theta_alpha(t) -> Dict[Tuple[int, ...], Fraction]:
    if isinstance(t, Fraction):
        return {(): t}
    return t.terms


def evaluate(node: Node, n: int = 1, order: int = 6):
    kind_of(node)       # static check first
    return _ev(node, n, order)


def _ev(node: Node, n: int, order: int):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Gen):
        return _gen(node, n)
    if isinstance(node, Neg):
        return _neg(_ev(node.arg, n, order))
    if isinstance(node, Pow):
        return _pow(node.base, _ev(node.base, n, order), node.exp, n)
    if isinstance(node, Mul):
        r = Fraction(1)
        for f in node.factors:
            r = _mul(r, _ev(f, n, order))
        return r
    if isinstance(node, Add):
        r = _ev(node.terms[0], n, order)
        for t in node.terms[1:]:
            r = _add(r, _ev(t, n, order))
        return r
    if isinstance(node, Wedge):
        legs = [_ev(l, n, order) for l in node.legs]
        if any(isinstance(l, Thetas) for l in legs):
            out = {(): Fraction(1)}
            for l in legs:
                nxt: Dict = {}
                for a, c in out.items():
                    for b, d in _theta_alpha(l).items():
                        if set(a) & set(b):
                            continue
                        key = a + b
                        inv = sum(1 for x in range(len(key)) for y in range(x + 1, len(key)) if key[x] > key[y])
                        srt = tuple(sorted(key))
                        nxt[srt] = nxt.get(srt, 0) + c * d * (-1) ** inv
                out = nxt
            return Thetas(out)
        return ("wedge", legs)
    if isinstance(node, Tensor):
        k = kind_of(node)
        if k == "ce":
            return _ce(node, n, order)
        legs = [_ev(l, n, order) for l in node.legs]
        legs = [Kn.scalar(n, l) if isinstance(l, Fraction) else l for l in legs]
        return KnTensor.from_legs(legs)
    if isinstance(node, Call):
        x = _ev(node.arg, n, order)
        if isinstance(x, Fraction):
            x = Kn.scalar(n, x)
        if node.fn == "cop":
            return coproduct(x) if isinstance(x, Kn) else fdb_coproduct(x)
        if node.fn == "S":
            return antipode(x) if isinstance(x, Kn) else fdb_antipode(x)
        return Fraction(counit(x)) if isinstance(x, Kn) else fdb_counit(x)
    if isinstance(node, Jet):
        if n != 1:
            raise EvalError("jet literals are one-dimensional (use -n 1)")
        N = max(order, len(node.coeffs))
        return JetDiffeo.univariate([0] + list(node.coeffs), N)
    if isinstance(node, Apply):
        k = _ev(node.op, n, order)
        if isinstance(k, Fraction):
            k = Kn.scalar(n, k)
        psi = _ev(node.jet, n, order)
        return apply_element(k, CrossedElement.single(TruncSeries.const(1, 1, psi.order), psi))
    raise TypeError(node)


def _ce(node: Tensor, n: int, order: int) -> CECochain:
    th = _ev(node.legs[0], n, order)
    right = _ev(node.legs[1], n, order)
    legs = right[1] if isinstance(right, tuple) else [right]
    which = next((l.which for l in legs if isinstance(l, FdB)), "FGdagger")
    legs = [FdB.one(which, n).scale(l) if isinstance(l, Fraction) else l for l in legs]
    if any(l.which != which for l in legs):
        raise EvalError("wedge legs from different algebras")
    out = CECochain(which, n, 0, len(legs) - 1)
    first = True
    for alpha, c in _theta_alpha(th).items():
        t = CECochain.make(which, n, alpha, legs, c)
        out = t if first else out + t
        first = False
    return out


# --------------------------------------------------------------------------
# printing values
# --------------------------------------------------------------------------

def format_ce(c: CECochain) -> str:
    items = []
    for (alpha, legs), v in sorted(c.terms.items(), key=lambda kv: repr(kv[0])):
        th = " /\\ ".join(f"th{i + 1}" for i in alpha) or "1"
        parts = []
        for k in legs:
            s = format_fdb(FdB(c.which, c.n, {k: 1}))
            parts.append(s)
        items.append((f"{th} (x) " + " /\\ ".join(parts), v))
    return format_coeff_terms(items) if items else "0"


def format_fdb_tensor(t: FdBTensor) -> str:
    items = []
    for key, c in sorted(t.terms.items(), key=lambda kc: repr(kc[0])):
        legs = [format_fdb(FdB(w, t.n, {m: 1})) for w, m in zip(t.kinds, key)]
        items.append((" (x) ".join(legs), c))
    return format_coeff_terms(items) if items else "0"


def format_crossed(v: CrossedElement) -> str:
    """One block per jet: the coefficient series, then the jet."""
    if not v.terms:
        return "0"
    blocks = []
    for k, (phi, f) in enumerate(sorted(v.terms.items(), key=lambda pf: format_jet(pf[0]))):
        blocks.append(f"f{k + 1} := {format_series(f)}\n" + format_jet(phi, f"psi{k + 1}" if phi.n == 1 else f"psi{k + 1}_"))
    return "\n".join(blocks)


def format_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Kn):
        return format_kn(v)
    if isinstance(v, KnTensor):
        return format_tensor(v)
    if isinstance(v, FdB):
        return format_fdb(v)
    if isinstance(v, FdBTensor):
        return format_fdb_tensor(v)
    if isinstance(v, CECochain):
        return format_ce(v)
    if isinstance(v, CrossedElement):
        return format_crossed(v)
    if isinstance(v, Thetas):
        items = [(" /\\ ".join(f"th{i + 1}" for i in a) or "1", c) for a, c in sorted(v.terms.items())]
        return format_coeff_terms(items)
    if isinstance(v, tuple) and v and v[0] == "wedge":
        return " /\\ ".join(format_value(l) for l in v[1])
    return repr(v)


def as_cochain(v) -> KnTensor:
    """Tensor with a leading unit leg -> Hopf cochain (the leg is the module's 1)."""
    if isinstance(v, KnTensor):
        if v.q == 0:
            return v
        one = (0, 0, (), (0,) * v.n)
        out: Dict = {}
        for key, c in v.terms.items():
            if key[0] != one:
                raise EvalError("a Hopf cochain is written 1 (x) k1 (x) ... (x) kq")
            out[key[1:]] = out.get(key[1:], 0) + c
        return KnTensor(v.n, v.q - 1, out)
    if isinstance(v, (Fraction, Kn)):
        k = v if isinstance(v, Kn) else None
        if k is None or k == Kn.scalar(k.n, counit(k)) and not k.is_zero():
            c = v if isinstance(v, Fraction) else counit(v)
            return KnTensor(1 if k is None else k.n, 0, {(): Fraction(c)})
    raise EvalError("expected a cochain 1 (x) k1 (x) ... (x) kq")


def eval_text(text: str, n: int = 1, order: int = 6):
    return evaluate(parse(text), n, order)
