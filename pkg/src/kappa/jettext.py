"""Plain-text form of jets.

One component per line (or separated by ``;``)::

    phi := 2 + x + (1/2)x^2 - x^3 + O(6)

For n > 1 the components are ``phi1 := ...``, ``phi2 := ...`` in the variables
``x1 .. xn``.  The tail ``+ O(N)`` says terms of total degree >= N are unknown,
so the jet has order N - 1; a tail ``+ ...`` means "order given elsewhere"
(the caller's default, at least the top degree written).  The constant term
is the base point offset.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exact import KappaError, Poly, TruncSeries
from .jets import JetDiffeo


class JetSyntaxError(KappaError):
    pass


def _var_names(n: int) -> List[str]:
    return ["x"] if n == 1 else [f"x{i + 1}" for i in range(n)]


def _coef(v) -> str:
    if isinstance(v, Poly):
        return f"({v})"
    return str(v) if v.denominator == 1 else f"({v})"


def format_series(s: TruncSeries, names: Optional[List[str]] = None) -> str:
    names = names or _var_names(s.n_vars)
    out = ""
    for e in sorted(s.coeffs, key=lambda e: (sum(e), tuple(-a for a in e))):
        v = s.coeffs[e]
        neg = not isinstance(v, Poly) and v < 0
        if neg:
            v = -v
        mon = " ".join(names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
        if not mon:
            body = _coef(v) if isinstance(v, Poly) else str(v)
        else:
            body = mon if v == 1 else _coef(v) + mon
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    tail = f"O({s.order + 1})"
    return f"{out} + {tail}" if out else tail


def format_jet(psi: JetDiffeo, name: str = "phi") -> str:
    lines = []
    for i, c in enumerate(psi.components):
        full = c + TruncSeries.const(psi.base_offset[i], psi.n, psi.order)
        label = name if psi.n == 1 else f"{name}{i + 1}"
        lines.append(f"{label} := {format_series(full)}")
    return "\n".join(lines)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d*)|(?P<op>[-+*^()])|(?P<dots>\.\.\.)|(?P<O>O))")


def _tokens(s: str, where: str):
    pos, out = 0, []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            bad = len(s[:pos]) + len(s[pos:]) - len(s[pos:].lstrip())
            raise JetSyntaxError(f"{where}: unexpected character {s[bad]!r} at column {bad + 1}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return out


def _parse_component(text: str, n: int, where: str) -> Tuple[Dict[Tuple[int, ...], Fraction], Optional[int]]:
    names = _var_names(n)
    toks = _tokens(text, where)
    coeffs: Dict[Tuple[int, ...], Fraction] = {}
    tail: Optional[int] = -1       # -1: no tail seen
    i = 0

    def peek(k=0):
        return toks[i + k] if i + k < len(toks) else (None, None, len(text) + 1)

    def fail(msg):
        raise JetSyntaxError(f"{where}: {msg} at column {peek()[2]}")

    first = True
    while i < len(toks):
        sign = 1
        kind, val, _ = peek()
        if val in ("+", "-"):
            sign = -1 if val == "-" else 1
            i += 1
        elif not first:
            fail("expected '+' or '-'")
        first = False
        kind, val, _ = peek()
        if kind == "dots":
            i += 1
            tail = None
            break
        if kind == "O":
            i += 1
            if peek()[1] != "(":
                fail("expected '('")
            i += 1
            if peek()[0] != "num" or "/" in peek()[1]:
                fail("expected an integer order")
            N = int(peek()[1])
            i += 1
            if peek()[1] != ")":
                fail("expected ')'")
            i += 1
            tail = N - 1
            break
        c = Fraction(1)
        if kind == "num":
            c = Fraction(val)
            i += 1
        elif val == "(":
            i += 1
            neg = peek()[1] == "-"
            if neg:
                i += 1
            if peek()[0] != "num":
                fail("expected a number")
            c = Fraction(peek()[1]) * (-1 if neg else 1)
            i += 1
            if peek()[1] != ")":
                fail("expected ')'")
            i += 1
        elif kind != "var":
            fail("expected a term")
        exp = [0] * n
        saw_factor = kind == "num" or val == "("
        while True:
            if peek()[1] == "*":
                i += 1
                if peek()[0] != "var":
                    fail("expected a variable")
            if peek()[0] != "var":
                break
            v = peek()[1]
            if v not in names:
                fail(f"unknown variable {v!r} (expected one of {', '.join(names)})")
            i += 1
            k = 1
            if peek()[1] == "^":
                i += 1
                if peek()[0] != "num" or "/" in peek()[1]:
                    fail("expected an integer exponent")
                k = int(peek()[1])
                i += 1
            exp[names.index(v)] += k
            saw_factor = True
        if not saw_factor:
            fail("empty term")
        key = tuple(exp)
        coeffs[key] = coeffs.get(key, Fraction(0)) + sign * c
    if i < len(toks):
        fail("trailing input after the order tail")
    return coeffs, tail


def parse_jet(text: str, order: Optional[int] = None) -> JetDiffeo:
    """Parse the text form; ``order`` fills in a ``...`` tail (or a missing one)."""
    lines = [l.strip() for l in re.split(r"[;\n]", text) if l.strip()]
    if not lines:
        raise JetSyntaxError("empty jet")
    n = len(lines)
    comps = []
    for k, line in enumerate(lines):
        if ":=" not in line:
            raise JetSyntaxError(f"component {k + 1}: expected 'name := series'")
        _, rhs = line.split(":=", 1)
        coeffs, tail = _parse_component(rhs, n, f"component {k + 1}")
        top = max((sum(e) for e in coeffs), default=1)
        if tail is None or tail == -1:
            N = max(top, 1) if order is None else max(order, top)
        else:
            N = tail
            if top > N:
                raise JetSyntaxError(f"component {k + 1}: term of degree {top} beyond O({N + 1})")
        comps.append(TruncSeries(n, N, coeffs))
    N = min(c.order for c in comps)
    return JetDiffeo([c.truncate(N) for c in comps])


def parse_series(text: str, n: int, order: Optional[int] = None) -> TruncSeries:
    """A single series in x (or x1..xn); ``name :=`` prefix optional."""
    rhs = text.split(":=", 1)[1] if ":=" in text else text
    coeffs, tail = _parse_component(rhs, n, "series")
    top = max((sum(e) for e in coeffs), default=0)
    if tail is None or tail == -1:
        N = top if order is None else max(order, top)
    else:
        N = tail
        if top > N:
            raise JetSyntaxError(f"series: term of degree {top} beyond O({N + 1})")
    return TruncSeries(n, N, coeffs)
