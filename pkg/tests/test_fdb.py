import random
from itertools import combinations_with_replacement as cwr

import pytest

from kappa.fdb import (FdB, I1, I2, fdb_antipode, fdb_coproduct, fdb_counit, fdb_eval, format_fdb,
                       iota, iota_inv, phi_inverse, phi_iso, pi1, pi2)
from kappa.jets import random_jet
from kappa.kn_algebra import Kn
from kappa.kn_hopf import antipode, coproduct


def _flip_as_fdb(t):
    return {tuple(k[:3] for k in key): c for key, c in t.flip().terms.items()}


@pytest.mark.parametrize("n,maxk", [(1, 4), (2, 3)])
def test_jet_coproduct_matches_kab_cop(n, maxk):
    for k in range(1, maxk + 1):
        for J in cwr(range(n), k):
            for i in range(n):
                s = Kn.sigma(n, i, J)
                assert _flip_as_fdb(coproduct(s)) == fdb_coproduct(iota(s)).terms, (i, J)
                assert iota(antipode(s)) == fdb_antipode(iota(s)), (i, J)


def test_iota_roundtrip_and_counit():
    s = Kn.sigma(2, 0, (0, 1)) * Kn.det(2, -1)
    assert iota_inv(iota(s)) == s
    assert fdb_counit(iota(s)) == 0
    assert fdb_counit(FdB.inv("FGdagger", 2)) == 1


def test_eval_is_multiplicative_and_inverse_is_antipode():
    rng = random.Random(11)
    psi = random_jet(rng, 1, 5, group="Gdag")
    f, g = FdB.gen("FGdagger", 1, 0, (0, 0)), FdB.gen("FGdagger", 1, 0, (0, 0, 0))
    assert fdb_eval(f * g, psi) == fdb_eval(f, psi) * fdb_eval(g, psi)
    assert fdb_eval(fdb_antipode(g), psi) == fdb_eval(g, psi.inverse())


@pytest.mark.parametrize("n", [1, 2])
def test_phi_roundtrip(n):
    for J in cwr(range(n), 2):
        f = FdB.gen("FGdagger", n, 0, J) * FdB.inv("FGdagger", n)
        assert phi_inverse(phi_iso(f)) == f


def test_projections_and_sections():
    f = FdB.gen("FGL", 2, 0, (1,))
    assert pi1(I1(f)) == f
    g = FdB.gen("FN", 2, 1, (0, 1))
    assert pi2(I2(g)) == g


def test_kind_guards():
    with pytest.raises(ValueError):
        FdB.gen("FN", 1, 0, (0,))
    with pytest.raises(ValueError):
        FdB.gen("FGL", 1, 0, (0, 0))


def test_format():
    assert format_fdb(FdB.gen("FGdagger", 1, 0, (0, 0)) * FdB.inv("FGdagger", 1)) == "binv b[1;1,1]"
