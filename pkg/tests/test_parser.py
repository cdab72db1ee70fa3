from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from kappa.parser import (Add, Apply, Call, Gen, Jet, KindError, Mul, Neg, Num, ParseError, Pow,
                          Tensor, Wedge, kind_of, parse, to_text)

idx = st.integers(min_value=1, max_value=3)
nums = st.fractions(min_value=0, max_value=20, max_denominator=7).map(Num)
gens = st.one_of(
    st.sampled_from([Gen("s"), Gen("sinv"), Gen("logs"), Gen("b"), Gen("binv"), Gen("a"), Gen("ainv")]),
    st.builds(lambda i: Gen("X", i), idx),
    st.builds(lambda i: Gen("theta", i), idx),
    st.builds(lambda i, J: Gen("sigma", i, tuple(J)), idx, st.lists(idx, min_size=1, max_size=3)),
    st.builds(lambda i, J: Gen("b", i, tuple(J)), idx, st.lists(idx, min_size=1, max_size=3)),
    st.builds(lambda i, J: Gen("alpha", i, tuple(J)), idx, st.lists(idx, min_size=1, max_size=3)),
)
jets = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1, max_size=4) \
    .map(lambda cs: Jet(tuple(cs)))


def _extend(children):
    many = st.lists(children, min_size=2, max_size=3).map(tuple)
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(-3, 4)),
        st.builds(Mul, many),
        st.builds(Add, many),
        st.builds(Tensor, many),
        st.builds(Wedge, many),
        st.builds(Call, st.sampled_from(["cop", "S", "eps"]), children),
        st.builds(Apply, children, jets),
    )


trees = st.recursive(st.one_of(nums, gens, jets), _extend, max_leaves=10)


@settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(trees)
def test_print_parse_roundtrip(tree):
    text = to_text(tree)
    ast = parse(text)
    assert parse(to_text(ast)) == ast
    assert to_text(ast) == text


def test_examples():
    assert parse("X1 * s[1;1,1]") == Mul((Gen("X", 1), Gen("sigma", 1, (1, 1))))
    t = parse("1 (x) s^-1 * X1")
    assert isinstance(t, Tensor) and kind_of(t) == "tensor"
    assert t.legs[1] == Mul((Pow(Gen("s"), -1), Gen("X", 1)))


def test_juxtaposition_and_precedence():
    assert parse("sinv X1") == parse("sinv * X1")
    assert parse("X1 + s (x) X2") == Add((Gen("X", 1), Tensor((Gen("s"), Gen("X", 2)))))
    assert parse("-s^2") == Neg(Pow(Gen("s"), 2))
    assert parse("1/2 X1") == Mul((Num(Fraction(1, 2)), Gen("X", 1)))


def test_syntax_error_location():
    with pytest.raises(ParseError) as e:
        parse("X1 * * s")
    assert (e.value.line, e.value.col) == (1, 6)
    with pytest.raises(ParseError) as e:
        parse("s +\n  (X1")
    assert e.value.line == 2


@pytest.mark.parametrize("bad", ["", "s[1;]", "s[;1]", "X", "cop()", "jet()", "s ^ x", "1 (x)", "@"])
def test_rejects_malformed(bad):
    with pytest.raises(ParseError):
        parse(bad)


@pytest.mark.parametrize("text,kind", [
    ("3", "scalar"), ("X1 s", "K"), ("b[1;1,1] binv", "FGdagger"), ("a[1;1]", "FGL"),
    ("a[1;1,1]", "FN"), ("th1 /\\ th2", "theta"), ("cop(X1)", "tensor"), ("cop(b)", "ftensor"),
    ("th1 (x) 1 /\\ b[1;1,1]", "ce"), ("X1 |> jet(1, 2)", "crossed"), ("jet(1)", "jet"),
])
def test_kinds(text, kind):
    assert kind_of(parse(text)) == kind


@pytest.mark.parametrize("bad", ["X1 * b[1;1,1]", "X1 + a[1;1]", "b |> jet(1)", "jet(1) + 1", "-jet(1)",
                                 "1 + 1 (x) X1",
                                 "th1 (x) X1", "cop(th1)"])
def test_kind_errors(bad):
    with pytest.raises(KindError) as e:
        kind_of(parse(bad))
    assert "expected" in str(e.value) and "found" in str(e.value)
