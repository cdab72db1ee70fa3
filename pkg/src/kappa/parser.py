"""Expression language for the command line.

Grammar (whitespace-insensitive; juxtaposition multiplies)::

    expr    := tensor (("+" | "-") tensor)*
    tensor  := wedge ("(x)" wedge)*
    wedge   := applied ("/\\" applied)*
    applied := term ["|>" jet]
    term    := factor (["*"] factor)*
    factor  := "-" factor | power
    power   := atom ["^" ["-"] INT]
    atom    := NUMBER | generator | call | jet | "(" expr ")"
    call    := ("cop" | "S" | "eps") "(" expr ")"
    jet     := "jet" "(" NUMBER ("," NUMBER)* ")"

Generators: ``s sinv logs s[i;J] X<l>`` in K_n; ``b binv b[i;J]`` in
F(G-dagger); ``a ainv a[i;j]`` in F(GL); ``a[i;J]`` (|J| >= 2) in F(N);
``th<i>`` for the dual basis of V.  Indices are 1-based.  ``jet(c1, .., cN)``
is the n = 1 jet x -> c1 x + .. + cN x^N.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .exact import KappaError


class ParseError(KappaError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"syntax error at line {line}, column {col}: {msg}")
        self.msg, self.line, self.col = msg, line, col


class KindError(KappaError):
    def __init__(self, expected: str, found: str, where: str = ""):
        super().__init__(f"type error{(' in ' + where) if where else ''}: expected {expected}, found {found}")
        self.expected, self.found = expected, found


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Gen:
    name: str                    # s sinv logs sigma X b binv a ainv alpha theta
    i: Optional[int] = None      # 1-based upper index (or X / theta index)
    J: Tuple[int, ...] = ()      # 1-based lower indices


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Mul:
    factors: Tuple["Node", ...]


@dataclass(frozen=True)
class Add:
    terms: Tuple["Node", ...]


@dataclass(frozen=True)
class Tensor:
    legs: Tuple["Node", ...]


@dataclass(frozen=True)
class Wedge:
    legs: Tuple["Node", ...]


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Node"


@dataclass(frozen=True)
class Jet:
    coeffs: Tuple[Fraction, ...]


@dataclass(frozen=True)
class Apply:
    op: "Node"
    jet: Jet


Node = Union[Num, Gen, Pow, Neg, Mul, Add, Tensor, Wedge, Call, Jet, Apply]

# --------------------------------------------------------------------------
# lexer
# --------------------------------------------------------------------------

_TOKENS = [
    ("TENSOR", r"\(x\)"),
    ("WEDGE", r"/\\"),
    ("APPLY", r"\|>"),
    ("NUMBER", r"\d+(?:/\d+)?"),
    ("INDEXED", r"[sba]\[\s*\d+\s*;\s*\d+(?:\s*,\s*\d+)*\s*\]"),
    ("NAME", r"[A-Za-z][A-Za-z0-9]*"),
    ("OP", r"[-+*^(),]"),
    ("WS", r"\s+"),
]
_LEX = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKENS))


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Tok]:
    toks = []
    pos, line, lstart = 0, 1, 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        if m.lastgroup != "WS":
            toks.append(Tok(m.lastgroup, m.group(), line, pos - lstart + 1))
        else:
            for k, ch in enumerate(m.group()):
                if ch == "\n":
                    line += 1
                    lstart = pos + k + 1
        pos = m.end()
    toks.append(Tok("EOF", "", line, pos - lstart + 1))
    return toks


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

_SIMPLE = {"s", "sinv", "logs", "b", "binv", "a", "ainv"}
_CALLS = {"cop", "S", "eps"}
_HEAD = {"s": "sigma", "b": "b", "a": "alpha"}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[Tok] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Tok:
        t = self.peek()
        if t.text != text:
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.next()

    def parse(self) -> Node:
        node = self.expr()
        if self.peek().kind != "EOF":
            self.error(f"unexpected {self.peek().text!r}")
        return node

    def expr(self) -> Node:
        terms = [self.tensor()]
        while self.peek().text in ("+", "-"):
            op = self.next().text
            t = self.tensor()
            terms.append(t if op == "+" else Neg(t))
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def tensor(self) -> Node:
        legs = [self.wedge()]
        while self.peek().kind == "TENSOR":
            self.next()
            legs.append(self.wedge())
        return legs[0] if len(legs) == 1 else Tensor(tuple(legs))

    def wedge(self) -> Node:
        legs = [self.applied()]
        while self.peek().kind == "WEDGE":
            self.next()
            legs.append(self.applied())
        return legs[0] if len(legs) == 1 else Wedge(tuple(legs))

    def applied(self) -> Node:
        t = self.term()
        if self.peek().kind == "APPLY":
            self.next()
            tok = self.peek()
            j = self.atom()
            if not isinstance(j, Jet):
                self.error("expected a jet literal after '|>'", tok)
            return Apply(t, j)
        return t

    def term(self) -> Node:
        factors = [self.factor()]
        while True:
            t = self.peek()
            if t.text == "*":
                self.next()
                factors.append(self.factor())
            elif t.kind in ("NUMBER", "INDEXED", "NAME") or t.text == "(":
                factors.append(self.factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self) -> Node:
        if self.peek().text == "-":
            self.next()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek().text == "^":
            self.next()
            sgn = 1
            if self.peek().text == "-":
                self.next()
                sgn = -1
            t = self.peek()
            if t.kind != "NUMBER" or "/" in t.text:
                self.error("expected an integer exponent")
            self.next()
            return Pow(base, sgn * int(t.text))
        return base

    def atom(self) -> Node:
        t = self.peek()
        if t.kind == "NUMBER":
            self.next()
            return Num(Fraction(t.text))
        if t.kind == "INDEXED":
            self.next()
            head, rest = t.text.split("[", 1)
            i, J = rest.rstrip("]").split(";")
            return Gen(_HEAD[head], int(i), tuple(int(j) for j in J.split(",")))
        if t.kind == "NAME":
            self.next()
            if t.text in _SIMPLE:
                return Gen(t.text)
            m = re.fullmatch(r"(X|th)(\d+)", t.text)
            if m:
                return Gen("X" if m.group(1) == "X" else "theta", int(m.group(2)))
            if t.text in _CALLS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text == "jet":
                self.expect("(")
                cs = [self._signed_number()]
                while self.peek().text == ",":
                    self.next()
                    cs.append(self._signed_number())
                self.expect(")")
                return Jet(tuple(cs))
            self.error(f"unknown name {t.text!r}", t)
        if t.text == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def _signed_number(self) -> Fraction:
        sgn = 1
        if self.peek().text == "-":
            self.next()
            sgn = -1
        t = self.peek()
        if t.kind != "NUMBER":
            self.error("expected a number")
        self.next()
        return sgn * Fraction(t.text)


def parse(text: str) -> Node:
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# canonical printer: parse(to_text(node)) == node
# --------------------------------------------------------------------------

_PREC = {Add: 0, Tensor: 1, Wedge: 2, Apply: 3, Mul: 4, Neg: 5, Pow: 6}


def _prec(n: Node) -> int:
    return _PREC.get(type(n), 7)


def _wrap(n: Node, above: int) -> str:
    """Print n, parenthesized unless it binds tighter than level `above`."""
    s = to_text(n)
    return s if _prec(n) > above else f"({s})"


def _num(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_text(n: Node) -> str:
    if isinstance(n, Num):
        return _num(n.value)
    if isinstance(n, Gen):
        if n.i is None:
            return n.name
        if n.name == "X":
            return f"X{n.i}"
        if n.name == "theta":
            return f"th{n.i}"
        head = {"sigma": "s", "b": "b", "alpha": "a"}[n.name]
        return f"{head}[{n.i};{','.join(map(str, n.J))}]"
    if isinstance(n, Pow):
        return f"{_wrap(n.base, 6)}^{n.exp}"
    if isinstance(n, Neg):
        return "-" + _wrap(n.arg, 4)
    if isinstance(n, Mul):
        return " * ".join(_wrap(f, 4) for f in n.factors)
    if isinstance(n, Add):
        out = _wrap(n.terms[0], 0)
        for t in n.terms[1:]:
            out += (" - " + _wrap(t.arg, 0)) if isinstance(t, Neg) else (" + " + _wrap(t, 0))
        return out
    if isinstance(n, Apply):
        return f"{_wrap(n.op, 3)} |> {to_text(n.jet)}"
    if isinstance(n, Wedge):
        return " /\\ ".join(_wrap(t, 2) for t in n.legs)
    if isinstance(n, Tensor):
        return " (x) ".join(_wrap(t, 1) for t in n.legs)
    if isinstance(n, Call):
        return f"{n.fn}({to_text(n.arg)})"
    if isinstance(n, Jet):
        return "jet(" + ", ".join(("-" + _num(-c)) if c < 0 else _num(c) for c in n.coeffs) + ")"
    raise TypeError(n)


# --------------------------------------------------------------------------
# static kinds
# --------------------------------------------------------------------------
# scalar, K, FGdagger, FGL, FN, theta, tensor, ftensor, wedge, ce, jet, crossed

_ALG = ("K", "FGdagger", "FGL", "FN")


def _gen_kind(g: Gen) -> str:
    if g.name in ("s", "sinv", "logs", "sigma", "X"):
        return "K"
    if g.name in ("b", "binv"):
        return "FGdagger"   # bare b is the determinant
    if g.name in ("a", "ainv"):
        return "FGL"
    if g.name == "theta":
        return "theta"
    if g.name == "alpha":
        return "FGL" if len(g.J) == 1 else "FN"
    return "FGdagger"


_NOT_LINEAR = ("jet", "wedge")


def _join(k1: str, k2: str, where: str) -> str:
    if k1 == "scalar":
        return k2
    if k2 == "scalar" or k1 == k2:
        return k1
    raise KindError(k1, k2, where)


def kind_of(n: Node) -> str:
    if isinstance(n, Num):
        return "scalar"
    if isinstance(n, Gen):
        return _gen_kind(n)
    if isinstance(n, Neg):
        k = kind_of(n.arg)
        if k in _NOT_LINEAR:
            raise KindError("a linear quantity", k, "negation")
        return k
    if isinstance(n, Pow):
        k = kind_of(n.base)
        if k not in _ALG + ("scalar",):
            raise KindError("algebra element", k, "power")
        return k
    if isinstance(n, Mul):
        k = "scalar"
        for f in n.factors:
            fk = kind_of(f)
            if fk not in _ALG + ("scalar",):
                raise KindError("algebra element", fk, "product")
            k = _join(k, fk, "product")
        return k
    if isinstance(n, Add):
        kinds = [kind_of(t) for t in n.terms]
        for tk in kinds:
            if tk in _NOT_LINEAR:
                raise KindError("a linear quantity", tk, "sum")
        k = kinds[0]
        for tk in kinds[1:]:
            # scalars are promoted only into algebras (and the exterior algebra)
            if "scalar" in (k, tk) and k != tk and ({k, tk} - {"scalar"}) - set(_ALG + ("theta",)):
                raise KindError(k, tk, "sum")
            k = _join(k, tk, "sum")
        return k
    if isinstance(n, Wedge):
        kinds = [kind_of(l) for l in n.legs]
        if all(k in ("theta", "scalar") for k in kinds) and "theta" in kinds:
            return "theta"
        k = "scalar"
        for lk in kinds:
            if lk not in ("FGdagger", "FN", "scalar"):
                raise KindError("F element", lk, "wedge leg")
            k = _join(k, lk, "wedge")
        return "wedge"
    if isinstance(n, Tensor):
        kinds = [kind_of(l) for l in n.legs]
        if len(kinds) == 2 and kinds[0] in ("theta", "scalar") and \
                (kinds[0] == "theta" or kinds[1] in ("wedge", "FGdagger", "FN")):
            if kinds[1] not in ("wedge", "FGdagger", "FN", "scalar"):
                raise KindError("F element or wedge", kinds[1], "CE cochain")
            return "ce"
        for lk in kinds:
            if lk not in ("K", "scalar"):
                raise KindError("K element", lk, "tensor leg")
        return "tensor"
    if isinstance(n, Call):
        k = kind_of(n.arg)
        if k not in _ALG + ("scalar",):
            raise KindError("algebra element", k, n.fn)
        if n.fn == "eps":
            return "scalar"
        if n.fn == "cop":
            return "tensor" if k in ("K", "scalar") else "ftensor"
        return k
    if isinstance(n, Jet):
        return "jet"
    if isinstance(n, Apply):
        k = kind_of(n.op)
        if k not in ("K", "scalar"):
            raise KindError("K element", k, "apply")
        return "crossed"
    raise TypeError(n)
