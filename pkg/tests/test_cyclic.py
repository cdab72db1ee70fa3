"""Hopf cyclic complex of K_1 (with log s) and the CE bicomplex."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from kappa.cyclic import (BiCochain, C0_H, C0_dagger, C1_H, C1_dagger, CECochain, FK, antisym_embed,
                          b_star, ce_b_wedge, ce_coinvariance_check, ce_partial_wedge,
                          certify_cyclic_cocycle, connes_B, connes_B_oracle, cyclic_tau,
                          golden_cochains, hochschild_b, is_normalized, normalize, partial_V,
                          r_H_cochain)
from kappa.fdb import FdB
from kappa.interp import as_cochain, eval_text
from kappa.suites import _random_cochain

seeds = st.integers(min_value=0, max_value=10 ** 6)


def C(text):
    return as_cochain(eval_text(text))


def test_gv_building_blocks_are_hochschild_closed():
    assert hochschild_b(C("1 (x) logs (x) s^-2 s[1;1,1]")).is_zero()
    assert hochschild_b(C("1 (x) s^-2 s[1;1,1] (x) sinv logs")).is_zero()


def test_tau_golden_values():
    t1 = cyclic_tau(C("1 (x) logs (x) s^-2 s[1;1,1]"))
    assert t1 == C("-1 (x) s^-2 logs s[1;1,1] (x) sinv - 1 (x) s^-2 s[1;1,1] (x) sinv logs")
    t2 = cyclic_tau(C("1 (x) s^-2 s[1;1,1] (x) sinv logs"))
    assert t2 == C("-1 (x) s^-2 logs s[1;1,1] (x) sinv - 1 (x) logs (x) s^-2 s[1;1,1]")


def test_gv_is_cyclic_cocycle():
    gv = golden_cochains()["GV"]
    assert gv == C("1 (x) logs (x) s^-2 s[1;1,1] - 1 (x) s^-2 s[1;1,1] (x) sinv logs")
    assert cyclic_tau(gv) == gv
    assert all(ok for _, ok, _ in certify_cyclic_cocycle(gv))
    bad = gv + C("1 (x) 1 (x) logs")
    assert not all(ok for _, ok, _ in certify_cyclic_cocycle(bad))


@pytest.mark.parametrize("name", ["C0", "C1"])
def test_basic_cocycles(name):
    assert all(ok for _, ok, _ in certify_cyclic_cocycle(golden_cochains()[name]))


def test_perturbed_C0_rejected():
    assert not all(ok for _, ok, _ in certify_cyclic_cocycle(C("1 (x) sinv X1 + 1 (x) X1")))


def test_transgression():
    g = golden_cochains()
    assert hochschild_b(g["u1"]).is_zero()
    assert connes_B(g["u1"]) == g["C1"]
    assert connes_B(g["u1"]) == connes_B_oracle(g["u1"])
    assert connes_B(g["C0"]) == connes_B_oracle(g["C0"])


def test_b_of_one_tensor_X():
    assert hochschild_b(C("1 (x) X1")) == C("1 (x) 1 (x) X1 - 1 (x) X1 (x) 1 - 1 (x) s (x) X1 + 1 (x) X1 (x) sinv")


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(0, 3), st.booleans())
def test_b_squared_zero(seed, q, with_log):
    t = _random_cochain(random.Random(seed), q, with_log, False)
    assert hochschild_b(hochschild_b(t)).is_zero()


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 2), st.booleans())
def test_mixed_complex_relations(seed, q, with_log):
    t = _random_cochain(random.Random(seed), q, with_log, True)
    assert is_normalized(t)
    assert (hochschild_b(connes_B(t)) + connes_B(hochschild_b(t))).is_zero()
    if t.q >= 2:
        assert connes_B(connes_B(t)).is_zero()
    cur = t
    for _ in range(t.q + 1):
        cur = cyclic_tau(cur)
    assert cur == t


def test_normalize_is_idempotent():
    t = _random_cochain(random.Random(4), 2, True, False)
    n1 = normalize(t)
    assert normalize(n1) == n1


# --- CE side ----------------------------------------------------------------

@pytest.mark.parametrize("c", [C0_dagger(), C1_dagger(), C0_H(), C1_H(), C0_dagger(2)],
                         ids=["C0dagger", "C1dagger", "C0_H", "C1_H", "C0dagger-n2"])
def test_ce_cocycles(c):
    assert ce_coinvariance_check(c)
    assert ce_b_wedge(c).is_zero()
    assert ce_partial_wedge(c).is_zero()


def test_ce_coinvariance_negative():
    bad = CECochain.make(FK, 1, (0,), [FdB.one(FK, 1), FdB.gen(FK, 1, 0, (0, 0))])
    assert not ce_coinvariance_check(bad)


def test_r_H():
    assert r_H_cochain(C1_dagger()) == C1_H()


def test_ce_text_matches_constructor():
    assert eval_text("th1 (x) 1 /\\ binv b[1;1,1]") == CECochain.make(
        FK, 1, (0,), [FdB.one(FK, 1), FdB.gen(FK, 1, 0, (0, 0)) * FdB.inv(FK, 1)])


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_bicomplex_differentials_square_to_zero(seed):
    rng = random.Random(seed)
    gens = [FdB.gen(FK, 1, 0, (0, 0)), FdB.gen(FK, 1, 0, (0, 0, 0)), FdB.inv(FK, 1)]
    legs = [rng.choice(gens) for _ in range(rng.randint(0, 2))]
    c = BiCochain.make(FK, 1, tuple(rng.sample([0], rng.randint(0, 1))), legs)
    assert b_star(b_star(c)).is_zero()
    assert partial_V(partial_V(c)).is_zero()


def test_embedded_cocycles_closed():
    for c in (C0_dagger(), C1_dagger()):
        e = antisym_embed(c)
        assert b_star(e).is_zero() and partial_V(e).is_zero()
