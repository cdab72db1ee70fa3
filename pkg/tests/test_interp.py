from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from kappa.exact import KappaError
from kappa.fdb import FdB
from kappa.interp import EvalError, as_cochain, eval_text, evaluate, format_value
from kappa.kn_algebra import Kn
from kappa.kn_hopf import KnTensor
from kappa.parser import KindError, kind_of, to_text

from test_parser import trees


def test_values():
    assert eval_text("X1 * sinv") == Kn.X(1, 0) * Kn.det(1, -1)
    assert eval_text("s^-2") == Kn.det(1, -2) == eval_text("sinv^2")
    assert eval_text("b") == FdB.inv("FGdagger", 1, -1)
    assert eval_text("eps(3 + s[1;1,1])") == 3
    assert eval_text("s[2;1,2]", n=2) == Kn.sigma(2, 1, (0, 1))


def test_scalar_promotion():
    assert eval_text("1 + X1") == Kn.one(1) + Kn.X(1, 0)
    assert eval_text("1/2 b[1;1,1] - 1") == FdB.gen("FGdagger", 1, 0, (0, 0)).scale(Fraction(1, 2)) \
        - FdB.one("FGdagger", 1)


def test_round_trip_through_printer():
    for text in ["sinv X1 - s^-2 s[1;1,1]", "s[1;1,1] (x) s + s^2 (x) s[1;1,1]",
                 "binv b[1;1,1]", "th1 (x) 1 /\\ binv b[1;1,1]"]:
        v = eval_text(text)
        assert format_value(v) == text
        assert eval_text(format_value(v)) == v


def test_errors():
    with pytest.raises(EvalError):
        eval_text("X3", n=2)
    with pytest.raises(EvalError):
        eval_text("X1^-1")
    with pytest.raises(EvalError):
        eval_text("jet(1) ", n=2)
    with pytest.raises(EvalError):
        as_cochain(eval_text("X1 (x) X1"))


def test_cochain_strips_unit_leg():
    t = as_cochain(eval_text("1 (x) sinv X1"))
    assert t == KnTensor.from_legs([Kn.det(1, -1) * Kn.X(1, 0)])
    assert as_cochain(eval_text("3")).q == 0


def test_apply():
    v = eval_text("s |> jet(2, 1)", order=4)
    (psi, f), = v.terms.items()
    assert f.coeff((0,)) == 2 and f.coeff((1,)) == 2


@settings(max_examples=400, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(trees, st.sampled_from([1, 2]))
def test_well_kinded_trees_evaluate_or_fail_cleanly(tree, n):
    try:
        kind_of(tree)
    except KindError:
        return
    try:
        v = evaluate(tree, n, 3)
    except KappaError:
        return
    format_value(v)
