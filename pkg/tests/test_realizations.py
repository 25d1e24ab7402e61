import numpy as np
import pytest

from higgs_hahn.fock import LevelBasis, to_matrix
from higgs_hahn.realizations import (E, ExactBackend, L, build_catalog, casimir, exact_catalog,
                                     hamiltonian, metaplectic, number, pair, total)
from higgs_hahn.scalars import I
from higgs_hahn.weyl import commutator
from fractions import Fraction

cat = exact_catalog()
HALF = Fraction(1, 2)


def test_hamiltonian_on_vacuum():
    level = LevelBasis(0)
    assert to_matrix(hamiltonian(), level).toarray()[0, 0] == 2


def test_schwinger_diagonal():
    for i in range(1, 5):
        assert E(i, i) == number(i)


def test_hamiltonian_central_in_u4():
    H = hamiltonian()
    for i in range(1, 5):
        for j in range(1, 5):
            assert commutator(H, E(i, j)).is_zero()


def test_rotation_examples():
    assert commutator(L(1, 2), L(3, 4)).is_zero()
    assert commutator(L(1, 2), L(1, 3)) == (I * HALF) * L(2, 3)
    assert L(2, 1) == -L(1, 2)
    with pytest.raises(ValueError):
        L(2, 2)


def test_triples():
    J0, Jp, Jm = metaplectic(1)
    assert commutator(J0, Jp) == Jp
    assert commutator(J0, Jm) == -Jm
    assert commutator(Jp, Jm) == -2 * J0
    assert casimir(J0, Jp, Jm) == Fraction(-3, 16)
    assert pair(1, 2)[0] == HALF * (number(1) + number(2) + 1)
    assert total()[0] == HALF * hamiltonian()
    with pytest.raises(ValueError):
        pair(3, 3)


def test_casimir_of_pair_is_rotation_square():
    for i, j in ((1, 2), (3, 4), (1, 3)):
        assert casimir(*pair(i, j)) == L(i, j) * L(i, j) - Fraction(1, 4)


def test_alpha2_vanishes_when_rotation_magnitudes_match():
    # on states with |m1| = |m2| the antisymmetric combination L12^2 - L34^2 is zero
    from higgs_hahn.fock import sector_decompose
    alpha2 = to_matrix(cat["alpha2"], LevelBasis(4)).toarray()
    for s in sector_decompose(6):
        if abs(s.m1) == abs(s.m2):
            assert np.abs(alpha2 @ s.basis).max() < 1e-10


@pytest.mark.parametrize("name", ["N(1)", "N(3)", "H", "L(1,2)", "L(2,4)", "D", "K1", "K2",
                                  "alpha1", "delta2", "C^(1234)"])
def test_hermitian_elements_are_self_adjoint(name):
    assert cat[name].adjoint() == cat[name]


def test_A_plus_adjoint_is_A_minus():
    assert cat["A+"].adjoint() == cat["A-"]
    assert cat["K3"].adjoint() == -cat["K3"]


def test_every_entry_commutes_with_H():
    H = cat["H"]
    for name in cat:
        if name.startswith(("a(", "ad(", "E(", "J+", "J-")):
            continue
        assert commutator(H, cat[name]).is_zero(), name


def test_rebuild_is_deterministic():
    again = build_catalog(ExactBackend())
    assert list(again) == list(cat)
    for name in cat:
        assert again[name].terms == cat[name].terms


def test_catalog_replace_does_not_touch_original():
    mutated = cat.replace("A+", cat["A+"] * 2)
    assert mutated["A+"] == 2 * cat["A+"]
    assert mutated["D"] is cat["D"]
    with pytest.raises(KeyError):
        cat.replace("nope", cat["D"])


def test_index_range():
    with pytest.raises(IndexError):
        number(0)
