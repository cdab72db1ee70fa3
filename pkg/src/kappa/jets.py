"""Jets of diffeomorphisms of R^n and the jet-level crossed product.

A jet is stored as (base_offset, zero-based components): phi(x) = b + phi0(x)
with phi0(0) = 0.  Two composition laws are available:

* ``compose`` -- the jet groupoid law.  ``psi`` is read as a jet at the point
  ``phi(0)``, so offsets add and zero parts compose.  This is associative at
  every truncation order and is what the crossed product uses.
* ``poly_compose`` -- jets read as honest polynomials; translations are
  applied exactly.  Used for the matched pair with translations.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exact import (Coeff, DimensionError, InsufficientOrderError, NonInvertibleError, Poly,
                    PreconditionError, Q, TruncSeries, czero, mat_det, mat_inverse, revert)


class MembershipError(PreconditionError):
    pass


class JetDiffeo:
    __slots__ = ("n", "order", "components", "base_offset", "_hash")

    def __init__(self, components: Sequence[TruncSeries], base_offset: Optional[Sequence] = None,
                 check: bool = True):
        n = len(components)
        self.n = n
        self.order = min(c.order for c in components)
        comps = []
        for c in components:
            if c.n_vars != n:
                raise DimensionError("jet components must be series in n variables")
            c = c.truncate(self.order)
            comps.append(c)
        offset = [c.const_term() for c in comps] if base_offset is None else list(base_offset)
        if base_offset is not None:
            for c in comps:
                if not czero(c.const_term()):
                    raise PreconditionError("zero-based components expected with explicit offset")
        else:
            comps = [c - c.const_term() if not czero(c.const_term()) else c for c in comps]
        self.components: Tuple[TruncSeries, ...] = tuple(comps)
        self.base_offset: Tuple = tuple(o if isinstance(o, Poly) else Q(o) for o in offset)
        self._hash = None
        if check:
            L = self.linear_part()
            d = mat_det(L)
            if czero(d):
                raise NonInvertibleError("Jacobian at 0 is singular")
            if not isinstance(d, Poly) and d < 0:
                raise PreconditionError("jet is not orientation preserving")

    # --- constructors ------------------------------------------------------
    @staticmethod
    def identity(n: int, order: int) -> "JetDiffeo":
        return JetDiffeo([TruncSeries.var(i, n, order) for i in range(n)])

    @staticmethod
    def translation(b: Sequence, order: int) -> "JetDiffeo":
        n = len(b)
        return JetDiffeo([TruncSeries.var(i, n, order) for i in range(n)], base_offset=b)

    @staticmethod
    def linear(a: Sequence[Sequence], order: int) -> "JetDiffeo":
        n = len(a)
        xs = [TruncSeries.var(i, n, order) for i in range(n)]
        comps = [sum((xs[j] * Q(a[i][j]) for j in range(n)), TruncSeries(n, order)) for i in range(n)]
        return JetDiffeo(comps)

    @staticmethod
    def univariate(cs: Sequence, order: Optional[int] = None) -> "JetDiffeo":
        """n = 1 jet b + c1 x + c2 x^2 + ... from the list [b, c1, c2, ...]."""
        s = TruncSeries.from_univariate(cs, order)
        return JetDiffeo([s])

    # --- basic data --------------------------------------------------------
    def linear_part(self) -> List[List[Coeff]]:
        n = self.n
        return [[self.components[i].coeff(tuple(1 if k == j else 0 for k in range(n)))
                 for j in range(n)] for i in range(n)]

    def jacobian(self) -> List[List[TruncSeries]]:
        return [[self.components[i].diff(j) for j in range(self.n)] for i in range(self.n)]

    def jac_det(self) -> TruncSeries:
        return mat_det(self.jacobian())

    def zero_part(self) -> "JetDiffeo":
        return JetDiffeo(self.components, base_offset=[0] * self.n, check=False)

    def offset_is_zero(self) -> bool:
        return all(czero(b) for b in self.base_offset)

    def is_translation(self) -> bool:
        return self.components == JetDiffeo.identity(self.n, self.order).components

    def is_linear(self) -> bool:
        return self.offset_is_zero() and all(sum(e) == 1 for c in self.components for e in c.coeffs)

    def in_N(self) -> bool:
        L = self.linear_part()
        return self.offset_is_zero() and all(L[i][j] == (1 if i == j else 0)
                                             for i in range(self.n) for j in range(self.n))

    def truncate(self, order: int) -> "JetDiffeo":
        return JetDiffeo([c.truncate(order) for c in self.components], self.base_offset, check=False)

    def __call__(self, i: int) -> TruncSeries:
        """Component i as a series including its offset."""
        return self.components[i] + self.base_offset[i]

    # --- group laws --------------------------------------------------------
    def _check(self, other):
        if self.n != other.n:
            raise DimensionError("jets of different dimension")

    def compose(self, other: "JetDiffeo") -> "JetDiffeo":
        """self o other in the jet groupoid."""
        self._check(other)
        comps = [c.compose(other.components) for c in self.components]
        off = [a + b for a, b in zip(self.base_offset, other.base_offset)]
        return JetDiffeo(comps, base_offset=off, check=False)

    def inverse(self, lin_inv=None) -> "JetDiffeo":
        comps = revert(self.components, lin_inv)
        return JetDiffeo(comps, base_offset=[-b for b in self.base_offset], check=False)

    def poly_compose(self, other: "JetDiffeo", order: Optional[int] = None) -> "JetDiffeo":
        """self(other(x)) with both read as polynomials; exact shifts."""
        self._check(other)
        order = min(self.order, other.order) if order is None else order
        inner = [other(i).with_order(max(order, other.order)) for i in range(self.n)]
        comps = [self(i).compose(inner, shift=True, order=order) for i in range(self.n)]
        return JetDiffeo(comps, check=False)

    # --- decompositions ----------------------------------------------------
    def decompose_translation(self) -> Tuple["JetDiffeo", "JetDiffeo"]:
        return JetDiffeo.translation(self.base_offset, self.order), self.zero_part()

    def decompose_linear(self) -> Tuple["JetDiffeo", "JetDiffeo"]:
        if not self.offset_is_zero():
            raise MembershipError("decompose_linear needs psi(0) = 0")
        L = self.linear_part()
        Li = mat_inverse(L)
        lam = JetDiffeo.linear(L, self.order) if all(not isinstance(v, Poly) for r in L for v in r) \
            else _linear_sym(L, self.order)
        nu = JetDiffeo([sum((self.components[j] * Li[i][j] for j in range(self.n)),
                            TruncSeries(self.n, self.order)) for i in range(self.n)], check=False)
        return lam, nu

    # --- misc --------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, JetDiffeo):
            return NotImplemented
        return (self.components, self.base_offset) == (other.components, other.base_offset)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.components, self.base_offset))
        return self._hash

    def __repr__(self):
        parts = []
        for i in range(self.n):
            parts.append(repr(self(i)))
        return "Jet(" + "; ".join(parts) + ")"


def _linear_sym(L, order):
    n = len(L)
    xs = [TruncSeries.var(i, n, order) for i in range(n)]
    comps = [sum((xs[j] * L[i][j] for j in range(n)), TruncSeries(n, order)) for i in range(n)]
    return JetDiffeo(comps, check=False)


def matched_pair_T(psi: JetDiffeo, phi: JetDiffeo) -> Tuple[JetDiffeo, JetDiffeo]:
    """psi in G-dagger, phi a translation by b: returns (psi |> phi, psi <| phi)."""
    if not psi.offset_is_zero():
        raise MembershipError("psi must fix 0")
    if not phi.is_translation():
        raise MembershipError("phi must be a translation")
    n, N = psi.n, psi.order
    b = phi.base_offset
    shifted = psi.poly_compose(phi, order=N)         # psi(x + b)
    psib = shifted.base_offset                       # psi(b)
    return JetDiffeo.translation(psib, N), shifted.zero_part()


def n_action_of_gl(nu: JetDiffeo, lam: JetDiffeo) -> JetDiffeo:
    """(nu <| lambda)(x) = a^{-1} nu(a x)."""
    if not nu.in_N():
        raise MembershipError("nu must lie in N")
    if not lam.is_linear():
        raise MembershipError("lambda must be linear")
    a = lam.linear_part()
    ai = mat_inverse(a)
    inner = nu.compose(lam)
    n = nu.n
    comps = [sum((inner.components[j] * ai[i][j] for j in range(n)), TruncSeries(n, nu.order))
             for i in range(n)]
    return JetDiffeo(comps, check=False)


# --------------------------------------------------------------------------
# Crossed product
# --------------------------------------------------------------------------

class CrossedElement:
    """Finite sum of f U*_phi with f a TruncSeries and phi a JetDiffeo."""

    __slots__ = ("n", "terms", "vanished")

    def __init__(self, n: int, terms: Optional[Iterable[Tuple[TruncSeries, JetDiffeo]]] = None):
        self.n = n
        acc: Dict[JetDiffeo, TruncSeries] = {}
        for f, phi in (terms or []):
            if f.n_vars != n or phi.n != n:
                raise DimensionError("crossed element term has wrong dimension")
            acc[phi] = acc[phi] + f if phi in acc else f
        self.terms: Dict[JetDiffeo, TruncSeries] = {p: f for p, f in acc.items() if not f.is_zero()}
        # legs that cancelled only up to their known order
        self.vanished: Dict[JetDiffeo, int] = {p: f.order for p, f in acc.items() if f.is_zero()}

    @staticmethod
    def single(f: TruncSeries, phi: JetDiffeo) -> "CrossedElement":
        return CrossedElement(f.n_vars, [(f, phi)])

    def items(self):
        return self.terms.items()

    def _all(self):
        return [(f, p) for p, f in self.terms.items()] + [(TruncSeries(self.n, o), p) for p, o in self.vanished.items()]

    def __add__(self, other: "CrossedElement"):
        return CrossedElement(self.n, self._all() + other._all())

    def __neg__(self):
        return CrossedElement(self.n, [(-f, p) for f, p in self._all()])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CrossedElement":
        return CrossedElement(self.n, [(f.scale(c), p) for f, p in self._all()])

    def __mul__(self, other: "CrossedElement") -> "CrossedElement":
        return crossed_mul(self, other)

    def min_order(self) -> int:
        return min((f.order for f in self.terms.values()), default=10 ** 6)

    def agrees(self, other: "CrossedElement", order: Optional[int] = None) -> bool:
        """Equality of function legs up to the common known order."""
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            a = self.terms.get(k)
            b = other.terms.get(k)
            if a is None and b is None:
                continue
            if a is None:
                a = TruncSeries(self.n, self.vanished.get(k, b.order))
            if b is None:
                b = TruncSeries(self.n, other.vanished.get(k, a.order))
            if not a.agrees(b, order):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"[{f}] U*{p}" for p, f in self.terms.items())


def crossed_mul(a: CrossedElement, b: CrossedElement) -> CrossedElement:
    """f U*_phi . g U*_psi = f (g o phi) U*_{psi phi}."""
    if a.n != b.n:
        raise DimensionError("crossed_mul: dimension mismatch")
    out = []
    for phi, f in a.terms.items():
        for psi, g in b.terms.items():
            out.append((f * g.compose(phi.components), psi.compose(phi)))
    return CrossedElement(a.n, out)


# --------------------------------------------------------------------------
# random sampling helpers (used by tests and suites)
# --------------------------------------------------------------------------

def random_rational(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_series(rng: random.Random, n: int, order: int, density: float = 0.6) -> TruncSeries:
    from itertools import product
    c = {}
    for e in product(range(order + 1), repeat=n):
        if sum(e) <= order and rng.random() < density:
            c[e] = random_rational(rng)
    return TruncSeries(n, order, c)


def random_jet(rng: random.Random, n: int, order: int, offset: bool = False,
               group: str = "G") -> JetDiffeo:
    """Random jet in G, G-dagger ("Gdag"), GL ("GL") or N ("N")."""
    while True:
        comps = []
        for i in range(n):
            s = random_series(rng, n, order)
            c = {e: v for e, v in s.coeffs.items() if sum(e) >= 2}
            for j in range(n):
                e = tuple(1 if k == j else 0 for k in range(n))
                if group == "N":
                    c[e] = Fraction(1 if i == j else 0)
                else:
                    c[e] = Fraction(rng.randint(1, 4), rng.randint(1, 3)) if i == j else random_rational(rng, -1, 1)
            if group == "GL":
                c = {e: v for e, v in c.items() if sum(e) == 1}
            comps.append(TruncSeries(n, order, c))
        b = [random_rational(rng) for _ in range(n)] if (offset and group == "G") else [0] * n
        try:
            return JetDiffeo(comps, base_offset=b)
        except (NonInvertibleError, PreconditionError):
            continue


def random_crossed(rng: random.Random, n: int, order: int, terms: int = 2,
                   jets: Optional[Sequence[JetDiffeo]] = None, offset: bool = True) -> CrossedElement:
    out = []
    for _ in range(terms):
        phi = rng.choice(jets) if jets else random_jet(rng, n, order, offset=offset)
        out.append((random_series(rng, n, order), phi))
    return CrossedElement(n, out)


def symbolic_jet(n: int, order: int, name: str = "u", offset: bool = False,
                 linear_identity: bool = False, linear_only: bool = False) -> JetDiffeo:
    """Generic jet whose Taylor coefficients are indeterminates name[i;J].

    Coefficient of x^e in component i is name[i;J]/e! so that
    d_J psi^i (0) = name[i;J] exactly."""
    from itertools import combinations_with_replacement
    from .exact import multi_factorial, exps_of_multiset
    comps = []
    for i in range(n):
        c = {}
        for k in range(1, order + 1):
            if linear_only and k > 1:
                break
            for J in combinations_with_replacement(range(n), k):
                e = exps_of_multiset(J, n)
                if k == 1 and linear_identity:
                    c[e] = Fraction(1 if J[0] == i else 0)
                    continue
                c[e] = Poly.var(symbol_name(name, i, J)) * Fraction(1, multi_factorial(e))
        comps.append(TruncSeries(n, order, c))
    off = [Poly.var(f"{name}0[{i + 1}]") for i in range(n)] if offset else None
    if off is None:
        return JetDiffeo(comps, check=False)
    return JetDiffeo(comps, base_offset=off, check=False)


def symbol_name(name: str, i: int, J: Sequence[int]) -> str:
    return f"{name}[{i + 1};{','.join(str(j + 1) for j in J)}]"
