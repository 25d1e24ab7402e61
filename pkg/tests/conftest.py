from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

from higgs_hahn.scalars import GaussianRational
from higgs_hahn.weyl import NormalMonomial, WeylElement

settings.register_profile("default", deadline=None)
settings.load_profile("default")

N_MODES = 4

small_fraction = st.fractions(min_value=-3, max_value=3, max_denominator=4)
gaussian = st.builds(GaussianRational, small_fraction, small_fraction)


@st.composite
def monomials(draw, max_degree=4, n_modes=N_MODES):
    """Normal monomial with total degree <= max_degree."""
    budget = draw(st.integers(0, max_degree))
    raising, lowering = [0] * n_modes, [0] * n_modes
    for _ in range(budget):
        slot = draw(st.integers(0, 2 * n_modes - 1))
        (raising if slot < n_modes else lowering)[slot % n_modes] += 1
    return NormalMonomial(tuple(raising), tuple(lowering))


@st.composite
def elements(draw, max_terms=3, max_degree=4, n_modes=N_MODES):
    terms = draw(st.lists(st.tuples(monomials(max_degree, n_modes), gaussian),
                          min_size=0, max_size=max_terms))
    out = WeylElement.zero(n_modes)
    for m, c in terms:
        out = out + WeylElement.monomial(m.raising, m.lowering, c)
    return out


def frac(p, q=1):
    return Fraction(p, q)
