"""Geometric side (n = 1): curvature, Bott cochains, Theta_K, the trace."""
import random
from fractions import Fraction

import pytest

from kappa import bott
from kappa.cyclic import C0_dagger, C1_dagger
from kappa.exact import Poly
from kappa.jets import JetDiffeo, random_jet, symbolic_jet
from kappa.kn_algebra import Kn


def test_total_derivative_chain_rule():
    a = bott.f0(0, 1)                       # f0(phi(z))
    assert bott.D(a) == bott.f0(1, 1) * bott.dvar("p", 1, 0)
    assert bott.D(bott.dvar("L", 0, 0)) == bott.dvar("p", 2, 0) * bott.dvar("p", 1, 0).inverse()


def test_exact_derivative_is_zero_integral():
    h = bott.f0(2) * bott.f1(0) + bott.f0(1) * bott.f1(1)   # D(f0' f1)
    ok, prim = bott.integral_equiv(h, Poly())
    assert ok and bott.D(prim) == bott.normalize_integrand(h)


def test_change_of_variables_is_zero_integral():
    # int u(phi(z)) phi'(z) dz = int u(z) dz
    lhs = bott.f0(0, 1) * bott.f1(0, 1) * bott.dvar("p", 1, 0)
    ok, _ = bott.integral_equiv(lhs, bott.f0() * bott.f1())
    assert ok


def test_non_equivalent_integrands_rejected():
    ok, _ = bott.integral_equiv(bott.f0() * bott.f1(), Poly())
    assert not ok


def test_curvature_integrates_to_c1():
    u, v = symbolic_jet(1, 4, "u"), symbolic_jet(1, 4, "v")
    R = bott.fiber_integrate(bott.simplicial_curvature([u, v]))
    assert R == bott.c1(u, v)
    w = symbolic_jet(1, 4, "w")
    assert bott.fiber_integrate(bott.simplicial_curvature([u, v, w])) is None


def test_theta_of_ce_cocycles():
    u, v = symbolic_jet(1, 4, "u"), symbolic_jet(1, 4, "v")
    assert bott.theta_K(C1_dagger(), [u, v]) == bott.c1(u, v).const_term()
    assert bott.theta_K(C0_dagger(), [u]) == bott.c0(u)
    assert bott.theta_K(C1_dagger(), [v, u]) == -bott.theta_K(C1_dagger(), [u, v])


def test_theta_translation_insensitive():
    rng = random.Random(9)
    for _ in range(20):
        p0, p1 = random_jet(rng, 1, 4), random_jet(rng, 1, 4)
        t0 = JetDiffeo(p0.components, base_offset=[Fraction(rng.randint(-5, 5), 3)], check=False)
        t1 = JetDiffeo(p1.components, base_offset=[Fraction(rng.randint(-5, 5), 2)], check=False)
        assert bott.theta_K(C1_dagger(), [p0, p1]) == bott.theta_K(C1_dagger(), [t0, t1])


@pytest.mark.parametrize("which", ["c0", "c1"])
def test_phi_C_matches_characteristic_map(which):
    k, ok, wit, _ = bott.phi_C_reduce(which)
    assert ok, wit


def test_sigma_inverse_trace():
    a0, a1 = bott.standard_pair()
    assert bott.sigma_trace_identity(a0, a1)[0]


@pytest.mark.parametrize("k", [Kn.X(1, 0), Kn.det(1, 1), Kn.det(1, -1), Kn.sigma(1, 0, (0, 0))],
                         ids=["X1", "s", "sinv", "s11"])
def test_eps_invariance(k):
    a0, a1 = bott.standard_pair()
    assert bott.eps_invariance(k, a0, a1)[0]


def test_crossed_product_shift():
    a = bott.Crossed({1: bott.f0()})
    b = bott.Crossed({-1: bott.f1()})
    assert (a * b).terms == {0: bott.f0() * bott.f1(0, 1)}
