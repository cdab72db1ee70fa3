import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kappa.exact import PreconditionError, TruncSeries
from kappa.jets import (CrossedElement, JetDiffeo, MembershipError, crossed_mul, matched_pair_T,
                        n_action_of_gl, random_crossed, random_jet, symbolic_jet)
from kappa.jettext import JetSyntaxError, format_jet, parse_jet, parse_series

seeds = st.integers(min_value=0, max_value=10 ** 6)


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([1, 2]))
def test_groupoid_associative_and_inverse(seed, n):
    rng = random.Random(seed)
    order = 4 if n == 1 else 3
    a, b, c = (random_jet(rng, n, order, offset=True) for _ in range(3))
    assert a.compose(b).compose(c) == a.compose(b.compose(c))
    ident = JetDiffeo.translation([0] * n, order)
    assert a.compose(a.inverse()) == ident
    assert a.inverse().compose(a) == ident


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([1, 2]))
def test_decompositions_are_sections(seed, n):
    rng = random.Random(seed)
    psi = random_jet(rng, n, 3, offset=True)
    t, rest = psi.decompose_translation()
    assert t.is_translation() and rest.offset_is_zero()
    assert t.compose(rest) == psi
    lam, nu = rest.decompose_linear()
    assert lam.is_linear() and nu.in_N()
    assert lam.compose(nu) == rest


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_normality_of_N(seed):
    rng = random.Random(seed)
    nu = random_jet(rng, 2, 3, group="N")
    lam = random_jet(rng, 2, 3, group="GL")
    out = n_action_of_gl(nu, lam)
    assert out.in_N()
    # lambda^{-1} nu lambda computed by hand
    assert out == lam.inverse().compose(nu).compose(lam)


def test_matched_pair_requires_translation():
    rng = random.Random(1)
    psi = random_jet(rng, 1, 3)
    with pytest.raises(MembershipError):
        matched_pair_T(psi, psi)


def test_matched_pair_offsets():
    psi = JetDiffeo.univariate([0, 2, 1], 4)           # 2x + x^2
    phi = JetDiffeo.translation([Fraction(1)], 4)
    tr, rest = matched_pair_T(psi, phi)
    assert tr.base_offset == (3,)                       # psi(1)
    assert rest == JetDiffeo.univariate([0, 4, 1], 4)   # psi(x+1) - psi(1)


def test_orientation_and_singularity_checks():
    with pytest.raises(PreconditionError):
        JetDiffeo.univariate([0, -1], 3)
    with pytest.raises(Exception):
        JetDiffeo.univariate([0, 0, 1], 3)
    # symbolic jets skip the check
    symbolic_jet(1, 3)


def test_crossed_product_associative():
    rng = random.Random(7)
    a, b, c = (random_crossed(rng, 1, 3) for _ in range(3))
    assert crossed_mul(crossed_mul(a, b), c).agrees(crossed_mul(a, crossed_mul(b, c)))


def test_vanished_legs_keep_their_order():
    phi = JetDiffeo.univariate([0, 1, 1], 4)
    f = TruncSeries.from_univariate([1, 1], 2)
    a = CrossedElement.single(f, phi) + CrossedElement.single(f.scale(-1), phi)
    assert not a.terms
    assert a.vanished[phi] == 2


# --- text form ---------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([1, 2, 3]), st.integers(min_value=1, max_value=5))
def test_jet_text_roundtrip(seed, n, order):
    psi = random_jet(random.Random(seed), n, order, offset=True)
    assert parse_jet(format_jet(psi)) == psi


def test_jet_text_examples():
    psi = parse_jet("phi := x + (1/2)x^2 + ...", order=4)
    assert psi == JetDiffeo.univariate([0, 1, Fraction(1, 2)], 4)
    assert format_jet(psi) == "phi := x + (1/2)x^2 + O(5)"
    two = parse_jet("phi1 := 1 + x1 + x1*x2 + O(3); phi2 := x2 - x1^2 + O(3)")
    assert two.n == 2 and two.order == 2 and two.base_offset == (1, 0)
    assert parse_series("f := 3 + x^2", 1, 4) == TruncSeries.from_univariate([3, 0, 1], 4)


@pytest.mark.parametrize("bad", ["phi := x + + x", "phi := y", "phi := x + O(2) + x",
                                 "phi := x^3 + O(2)", "x + 1", ""])
def test_jet_text_errors(bad):
    with pytest.raises(JetSyntaxError):
        parse_jet(bad)
