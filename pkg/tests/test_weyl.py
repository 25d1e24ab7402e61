"""Normal-ordering engine against two independent oracles.

* a one-step rewriting normal orderer on operator words (``a a^dag -> a^dag a + 1``);
* truncated Fock matrices built by plain matrix products.
"""
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from higgs_hahn.fock import FockBasis, safe_indices, to_matrix
from higgs_hahn.scalars import GaussianRational, ParamPoly
from higgs_hahn.weyl import (NormalMonomial, WeylElement, anticommutator, commutator,
                             is_zero, normal_product, reorder_coefficients)

from conftest import elements

n = 4
a = {i: WeylElement.annihilator(i, n) for i in range(1, 5)}
ad = {i: WeylElement.creator(i, n) for i in range(1, 5)}
N = {i: ad[i] * a[i] for i in range(1, 5)}
one = WeylElement.identity(n)


# -- oracle 1: one-step rewriting on words -----------------------------

@lru_cache(maxsize=None)
def _order_word(word):
    """Normal order a tuple of (mode, is_creator) letters by adjacent swaps."""
    for k in range(len(word) - 1):
        (i, c1), (j, c2) = word[k], word[k + 1]
        if not c1 and c2:  # a_i a_j^dag
            swapped = word[:k] + ((j, True), (i, False)) + word[k + 2:]
            out = dict(_order_word(swapped))
            if i == j:
                for m, c in _order_word(word[:k] + word[k + 2:]).items():
                    out[m] = out.get(m, 0) + c
            return {m: c for m, c in out.items() if c}
    up, low = [0] * n, [0] * n
    for i, cr in word:
        (up if cr else low)[i - 1] += 1
    return {NormalMonomial(tuple(up), tuple(low)): 1}


def _element_from_word(word):
    out = one
    for i, cr in word:
        out = out * (ad[i] if cr else a[i])
    return out


words = st.lists(st.tuples(st.integers(1, 4), st.booleans()), max_size=7).map(tuple)


@given(words)
def test_product_of_generators_matches_rewriting_oracle(word):
    expected = WeylElement(n, {m: ParamPoly.const(c) for m, c in _order_word(word).items()})
    assert _element_from_word(word) == expected


def test_reorder_coefficients_match_rewriting():
    for p in range(5):
        for q in range(5):
            word = ((1, False),) * p + ((1, True),) * q
            oracle = _order_word(word)
            closed = {NormalMonomial((q - k, 0, 0, 0), (p - k, 0, 0, 0)): c
                      for k, c in reorder_coefficients(p, q)}
            assert closed == oracle


# -- worked examples ---------------------------------------------------

def test_defining_relation():
    assert a[1] * ad[1] == N[1] + 1
    assert a[1] * ad[2] == ad[2] * a[1]
    assert a[1] * ad[2] == WeylElement.monomial((0, 1, 0, 0), (1, 0, 0, 0))


def test_a_squared_ad_squared():
    lhs = a[1] ** 2 * ad[1] ** 2
    assert lhs == ad[1] ** 2 * a[1] ** 2 + 4 * N[1] + 2
    basis = FockBasis(6)
    A, Ad = to_matrix(a[1], basis), to_matrix(ad[1], basis)
    direct = (A @ A @ Ad @ Ad).toarray()
    cols = safe_indices(basis, 2)
    assert np.abs(direct[:, cols] - to_matrix(lhs, basis).toarray()[:, cols]).max() < 1e-12


def test_commutator_examples():
    assert commutator(N[1], ad[1]) == ad[1]
    assert commutator(N[1], a[1]) == -a[1]
    x = ad[1] * a[2] + ad[3] * ad[3]
    assert is_zero(commutator(x, x))
    E12, E21 = ad[1] * a[2], ad[2] * a[1]
    assert commutator(E12, E21) == N[1] - N[2]


def test_anticommutator_examples():
    assert anticommutator(a[1], ad[1]) == 2 * N[1] + 1
    assert is_zero(anticommutator(N[3], WeylElement.zero(n)))
    assert anticommutator(N[1], N[2]) == 2 * (N[1] * N[2])


def test_ring_examples():
    x = ad[1] * a[2] + Fraction(1, 3) * N[4]
    assert is_zero(x + (-1) * x)
    assert is_zero(x - x)
    assert x ** 0 == one
    assert is_zero(commutator(a[1], a[2]))
    assert is_zero(commutator(a[1], ad[1]) - 1)


def test_D_squared_has_only_number_monomials():
    D = N[1] + N[2] - N[3] - N[4]
    sq = D * D
    assert all(m.raising == m.lowering for m, _ in sq)
    basis = FockBasis(5)
    Dm = to_matrix(D, basis).toarray()
    cols = safe_indices(basis, 2)
    assert np.abs((Dm @ Dm)[:, cols] - to_matrix(sq, basis).toarray()[:, cols]).max() < 1e-12


def test_errors():
    with pytest.raises(IndexError):
        WeylElement.annihilator(5, 4)
    with pytest.raises(ValueError):
        normal_product(a[1], WeylElement.annihilator(1, 2))
    with pytest.raises(ValueError):
        a[1] ** -1


# -- properties ----------------------------------------------------------

@settings(max_examples=100)
@given(elements(), elements(), elements())
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@settings(max_examples=200)
@given(elements(max_terms=2, max_degree=3), elements(max_terms=2, max_degree=3),
       elements(max_terms=2, max_degree=3))
def test_jacobi_identity(x, y, z):
    total = (commutator(x, commutator(y, z)) + commutator(y, commutator(z, x))
             + commutator(z, commutator(x, y)))
    assert total.is_zero()


@given(elements(), elements(), elements(), st.fractions(-2, 2, max_denominator=3))
def test_bilinearity(x, y, z, c):
    for op in (commutator, anticommutator):
        assert op(x + c * y, z) == op(x, z) + c * op(y, z)
        assert op(z, x + c * y) == op(z, x) + c * op(z, y)


@given(elements())
def test_text_round_trip(x):
    assert WeylElement.parse(x.to_text(), n) == x


@given(elements())
def test_adjoint_is_involution(x):
    assert x.adjoint().adjoint() == x


@given(elements(), elements())
def test_adjoint_reverses_products(x, y):
    assert (x * y).adjoint() == y.adjoint() * x.adjoint()


@given(elements(), elements())
def test_degree_bound_and_parity(x, y):
    prod = x * y
    if prod.is_zero():
        return
    assert prod.degree <= x.degree + y.degree
    parities = {tuple((r - l) % 2 for r, l in zip(mx.raising, mx.lowering))
                for mx, _ in x}
    parities_y = {tuple((r - l) % 2 for r, l in zip(my.raising, my.lowering))
                  for my, _ in y}
    allowed = {tuple((p + q) % 2 for p, q in zip(px, py))
               for px in parities for py in parities_y}
    for m, _ in prod:
        assert tuple((r - l) % 2 for r, l in zip(m.raising, m.lowering)) in allowed


_BASIS6 = FockBasis(6)


@settings(max_examples=40)
@given(elements(max_degree=3), elements(max_degree=3))
def test_fock_oracle_equivalence(x, y):
    basis = _BASIS6
    X, Y = to_matrix(x, basis), to_matrix(y, basis)
    cols = safe_indices(basis, y.raise_degree)
    direct = (X @ Y).toarray()[:, cols]
    engine = to_matrix(x * y, basis).toarray()[:, cols]
    assert np.abs(direct - engine).max(initial=0.0) < 1e-9


def test_zero_coefficients_removed():
    x = ad[1] * a[1] - N[1]
    assert len(x) == 0 and x == WeylElement.zero(n)
    y = WeylElement.monomial((1, 0, 0, 0), (0, 0, 0, 0), GaussianRational(0))
    assert y.is_zero()
