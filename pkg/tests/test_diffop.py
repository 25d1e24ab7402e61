"""Radial operator algebra, cross-checked by applying operators with sympy."""
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from higgs_hahn.diffop import (DiffOpElement, RadialMonomial, apply_to_monomial, d, displayed_K2,
                               displayed_K3, displayed_hamiltonian, param, radial_casimir,
                               radial_commutator, reduced_hahn, reduced_su11, rho,
                               run_diffop_suite)
from higgs_hahn.scalars import ParamPoly

r1, r2, A1, A2 = sympy.symbols("rho1 rho2 a1 a2", positive=True)
RHO = (r1, r2)
PARAMS = {"a1": A1, "a2": A2}
# generic enough that no accidental cancellation hides an error
TEST_FN = sympy.exp(-r1 ** 2 / 3 - r2 ** 2 / 5) * (r1 ** 3 + 2 * r2 + r1 * r2 ** 2 + 1) / (1 + r1 * r2)


def _coef(c: ParamPoly):
    total = 0
    for mono, g in c.terms.items():
        term = sympy.Rational(g.re.numerator, g.re.denominator) + sympy.I * sympy.Rational(
            g.im.numerator, g.im.denominator)
        for name, e in mono:
            term *= PARAMS[name] ** e
        total += term
    return total


def apply(op: DiffOpElement, f):
    out = 0
    for m, c in op:
        g = f
        for var, q in zip(RHO, m.d_pow):
            if q:
                g = sympy.diff(g, var, q)
        for var, p in zip(RHO, m.rho_pow):
            g = g * var ** p
        out += _coef(c) * g
    return out


POINTS = ({r1: sympy.Rational(1, 2), r2: sympy.Rational(3, 2), A1: sympy.Rational(3, 7), A2: sympy.Rational(-5, 2)},
          {r1: sympy.Rational(7, 5), r2: sympy.Rational(2, 3), A1: sympy.Rational(1, 4), A2: sympy.Rational(5, 4)})


def assert_vanishes(expr):
    for point in POINTS:
        assert abs(sympy.N(sympy.sympify(expr).subs(point), 30)) < 1e-20


# sympy transcription of the radial triple, independent of the engine's products
def sJ0(i, f):
    r, a = RHO[i - 1], (A1, A2)[i - 1]
    return (-sympy.diff(f, r, 2) - a / r ** 2 * f + r ** 2 * f) / 4


def _shift(i, f, sign):
    r = RHO[i - 1]
    return r * f + sign * sympy.diff(f, r)


def sJp(i, f):
    r, a = RHO[i - 1], (A1, A2)[i - 1]
    return (_shift(i, _shift(i, f, -1), -1) + a / r ** 2 * f) / 4


def sJm(i, f):
    r, a = RHO[i - 1], (A1, A2)[i - 1]
    return (_shift(i, _shift(i, f, 1), 1) + a / r ** 2 * f) / 4


def test_basic_commutators():
    assert radial_commutator(d(1), rho(1)) == 1
    assert radial_commutator(d(1), rho(1, -1)) == -rho(1, -2)
    assert radial_commutator(d(2), rho(1)) == 0


def test_second_order_commutator_on_monomials():
    comm = radial_commutator(d(1, 2), rho(1, 2))
    assert comm == 4 * rho(1) * d(1) + 2
    for m in range(5):
        got = apply_to_monomial(comm, (m, 0))
        assert got == {(m, 0): ParamPoly.const(4 * m + 2)}


@settings(max_examples=30)
@given(st.integers(-3, 3), st.integers(0, 3), st.integers(-3, 3), st.integers(0, 3),
       st.integers(-4, 4), st.integers(-4, 4))
def test_products_act_as_composition(p1, q1, p2, q2, e1, e2):
    x = DiffOpElement({RadialMonomial((p1, 0), (q1, 0)): ParamPoly.const(1)}) + rho(2) * d(2)
    y = DiffOpElement({RadialMonomial((p2, 1), (q2, 0)): ParamPoly.var("a1")})
    composed = {}
    for k, v in apply_to_monomial(y, (e1, e2)).items():
        for k2, v2 in apply_to_monomial(x, k).items():
            composed[k2] = composed.get(k2, ParamPoly()) + v * v2
    composed = {k: v for k, v in composed.items() if v}
    assert apply_to_monomial(x * y, (e1, e2)) == composed


@pytest.mark.parametrize("i", [1, 2])
def test_radial_triple_matches_transcription(i):
    f = TEST_FN
    for op, ref in zip(reduced_su11(i), (sJ0, sJp, sJm)):
        assert_vanishes(apply(op, f) - ref(i, f))


@pytest.mark.parametrize("i", [1, 2])
def test_radial_su11_relations_by_composition(i):
    f = TEST_FN
    assert_vanishes(sJ0(i, sJp(i, f)) - sJp(i, sJ0(i, f)) - sJp(i, f))
    assert_vanishes(sJ0(i, sJm(i, f)) - sJm(i, sJ0(i, f)) + sJm(i, f))
    assert_vanishes(sJp(i, sJm(i, f)) - sJm(i, sJp(i, f)) + 2 * sJ0(i, f))


@pytest.mark.parametrize("i", [1, 2])
def test_radial_casimir_is_scalar(i):
    C = radial_casimir(*reduced_su11(i))
    assert C.is_scalar()
    assert C.scalar_value().variables == {f"a{i}"}
    # independent evaluation: C f = c f on the test function
    c = _coef(C.scalar_value())
    f = TEST_FN
    lhs = sJ0(i, sJ0(i, f)) - sJp(i, sJm(i, f)) - sJ0(i, f)
    assert_vanishes(lhs - c * f)


def test_displayed_forms_match_construction():
    K1, K2, K3, H = reduced_hahn()
    assert H == displayed_hamiltonian()
    assert K2 == displayed_K2()
    assert K3 == displayed_K3()


def test_displayed_K2_is_total_casimir_by_composition():
    f = TEST_FN

    def tot(op, g):
        return op(1, g) + op(2, g)

    casimir = tot(sJ0, tot(sJ0, f)) - tot(sJp, tot(sJm, f)) - tot(sJ0, f)
    e1 = r1 * sympy.diff(f, r2) - r2 * sympy.diff(f, r1)
    euler_sq = r1 * sympy.diff(e1, r2) - r2 * sympy.diff(e1, r1)
    displayed = -(euler_sq + A1 * (r2 ** 2 / r1 ** 2 + 1) * f + A2 * (r1 ** 2 / r2 ** 2 + 1) * f + f) / 4
    assert_vanishes(casimir - displayed)
    assert_vanishes(apply(displayed_K2(), f) - displayed)


def test_constants_of_motion():
    K1, K2, K3, H = reduced_hahn()
    for K in (K1, K2, K3):
        assert radial_commutator(H, K).is_zero()


def test_delta1_vanishes_for_equal_parameters():
    J0 = reduced_su11(1)[0] + reduced_su11(2)[0]
    C1 = radial_casimir(*reduced_su11(1))
    C2 = radial_casimir(*reduced_su11(2))
    delta1 = 4 * J0 * (C1 - C2)
    assert delta1.substitute({"a2": param(1)}).is_zero()
    assert not delta1.is_zero()


def test_suite_report():
    rep = run_diffop_suite()
    assert rep.ok and rep.suite == "diffop"
    assert len(rep.results) == 12
    assert set(rep.recorded) == {"casimir_1", "casimir_2"}
    assert ParamPoly.parse(rep.recorded["casimir_1"]) == Fraction(-3, 16) - Fraction(1, 4) * param(1)


def test_index_checks():
    with pytest.raises(IndexError):
        rho(3)
    with pytest.raises(ValueError):
        d(1, -1)
