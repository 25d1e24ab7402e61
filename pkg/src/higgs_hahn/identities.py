"""Registry of operator identities and the suite runner.

Each :class:`IdentityCheck` holds a function from a catalog to the
difference ``lhs - rhs`` (or a list of such differences for index
families).  On the exact catalog the difference is a normal-ordered
element, and the identity passes iff it is the zero element.  The same
functions run unchanged on the numeric catalog of :mod:`higgs_hahn.fock`,
which is how residuals are cross-validated.

Citations are anchors into ``docs/operators.md``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from .realizations import MODES, ROTATION_PLANES, casimir, exact_catalog
from .scalars import I
from .weyl import anticommutator as anti
from .weyl import commutator as comm

__all__ = [
    "IdentityCheck",
    "IdentityResult",
    "SuiteReport",
    "CITATIONS",
    "SUITES",
    "REGISTRY",
    "check",
    "run_checks",
    "run_suite",
    "identities_for",
]

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

CITATIONS: Dict[str, str] = {
    "ccr": "canonical commutation relations of the oscillator pairs",
    "number-operator": "brackets of the number operators with the ladder operators",
    "schwinger-u4": "Schwinger realization E_ij = a_i^dag a_j of u(4)",
    "hamiltonian-central": "the four-dimensional oscillator Hamiltonian is central in u(4)",
    "o4-brackets": "bracket table of the o(4) rotation generators L_jk",
    "o2-o2": "L12 and L34 commute",
    "su11-brackets": "su(1,1) relations [J0, J+-] = +-J+-, [J+, J-] = -2 J0",
    "metaplectic-casimir": "Casimir value -3/16 in the metaplectic representation",
    "pair-generators": "su(1,1) generators of a pair of oscillators",
    "integrity-basis": "A+, A-, D commute with L12, L34 and H",
    "ordering-identities": "a_i^dag^2 a_i^2 and mixed a_i^2 a_j^dag^2 reductions",
    "higgs-bracket": "[D, A+-] = +-4 A+- and the cubic [A+, A-]",
    "higgs-constants": "alpha1, alpha2 are central",
    "higgs-to-hahn": "Hahn generators expressed through D, A+-, alpha1",
    "hahn-relations": "normalized Hahn relations for K1, K2, K3",
    "hahn-deltas": "delta1, delta2 in terms of alpha1, alpha2",
    "coproduct-embedding": "K1, K2, K3 through two su(1,1) copies",
    "centrally-extended": "centrally extended Hahn relations from the coproduct",
    "howe-duality": "o(4) commutes with the total su(1,1)",
    "pair-casimir": "pair Casimir equals L_ij^2 - 1/4",
    "delta-correspondence": "deltas from Casimirs agree with deltas from L^2 and H",
    "k2-coincidence": "total su(1,1) Casimir equals the sum of squared rotations",
    "radial-su11": "su(1,1) relations of the gauge-transformed radial operators",
    "singular-oscillator": "Hamiltonian of the singular oscillator in the plane",
    "reduced-hahn": "reduced K1, K2, K3 and their Hahn relations",
}

SUITES = ("weyl", "su11", "o4", "higgs", "hahn", "howe")


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    suite: str
    citation: str
    expr: Callable[[object], object]
    cost: int = 1

    def __post_init__(self):
        if self.citation not in CITATIONS:
            raise ValueError(f"unknown citation anchor {self.citation!r}")


@dataclass
class IdentityResult:
    name: str
    citation: str
    passed: bool
    residual_terms: int
    ms: float
    residual: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "citation": self.citation, "pass": self.passed,
               "residual_terms": self.residual_terms, "ms": round(self.ms, 3)}
        if not self.passed:
            out["residual"] = self.residual
        return out


@dataclass
class SuiteReport:
    suite: str
    results: List[IdentityResult]
    recorded: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def __getitem__(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def summary(self) -> str:
        return f"{len(self.results)} identities, {self.passed} passed"

    def to_json(self, timing: bool = True) -> dict:
        rows = [r.to_json() for r in self.results]
        if not timing:
            for r in rows:
                r.pop("ms")
        out = {"suite": self.suite, "identities": rows,
               "passed": self.passed, "failed": self.failed}
        if self.recorded:
            out["recorded"] = dict(self.recorded)
        return out


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def check(identity: IdentityCheck, catalog=None):
    """Evaluate one identity exactly; returns ``(passed, residual)``."""
    cat = catalog if catalog is not None else exact_catalog()
    try:
        value = identity.expr(cat)
    except Exception as exc:
        raise RuntimeError(f"identity {identity.name!r} failed to evaluate: {exc}") from exc
    passed = all(v.is_zero() for v in _as_list(value))
    return passed, value


def run_checks(suite: str, checks: Sequence[IdentityCheck], context) -> SuiteReport:
    results = []
    for ident in sorted(checks, key=lambda c: (c.cost, c.name)):
        t0 = time.perf_counter()
        passed, value = check(ident, context)
        ms = (time.perf_counter() - t0) * 1e3
        parts = _as_list(value)
        text = "" if passed else "\n---\n".join(v.to_text() for v in parts if not v.is_zero())
        results.append(IdentityResult(ident.name, ident.citation, passed,
                                      sum(len(v) for v in parts), ms, text))
    results.sort(key=lambda r: r.name)
    return SuiteReport(suite, results)


def identities_for(suite: str) -> List[IdentityCheck]:
    if suite == "all":
        return list(REGISTRY)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    return [c for c in REGISTRY if c.suite == suite]


def run_suite(suite: str = "all", catalog=None) -> SuiteReport:
    """Run the registered identities of ``suite`` on ``catalog`` (exact by default)."""
    checks = identities_for(suite)
    return run_checks(suite, checks, catalog if catalog is not None else exact_catalog())


# ----------------------------------------------------------------------
# registry

REGISTRY: List[IdentityCheck] = []


def _reg(name, suite, citation, expr, cost=1):
    REGISTRY.append(IdentityCheck(name, suite, citation, expr, cost))


def _delta(i, j):
    return 1 if i == j else 0


def _pair_triple(k, i, j):
    mi, mj = k.triple(str(i)), k.triple(str(j))
    return tuple(x + y for x, y in zip(mi, mj))


def _su11(J0, Jp, Jm):
    return [comm(J0, Jp) - Jp, comm(J0, Jm) + Jm, comm(Jp, Jm) + 2 * J0]


# weyl: the defining relations
_reg("ccr [a_i, ad_j] = delta_ij", "weyl", "ccr",
     lambda k: [comm(k.a(i), k.ad(j)) - _delta(i, j) for i in MODES for j in MODES])
_reg("ccr [a_i, a_j] = 0 = [ad_i, ad_j]", "weyl", "ccr",
     lambda k: [comm(k.a(i), k.a(j)) for i in MODES for j in MODES if i < j]
     + [comm(k.ad(i), k.ad(j)) for i in MODES for j in MODES if i < j])
_reg("[N_i, ad_j] = delta_ij ad_i", "weyl", "number-operator",
     lambda k: [comm(k.N(i), k.ad(j)) - _delta(i, j) * k.ad(i) for i in MODES for j in MODES])
_reg("[N_i, a_j] = -delta_ij a_i", "weyl", "number-operator",
     lambda k: [comm(k.N(i), k.a(j)) + _delta(i, j) * k.a(i) for i in MODES for j in MODES])

# o4: u(4) in Schwinger form, its centre, the rotation subalgebra
_reg("E_ii = N_i", "o4", "schwinger-u4",
     lambda k: [k.E(i, i) - k.N(i) for i in MODES])
_reg("u(4) brackets [E_ij, E_kl] = delta_jk E_il - delta_il E_kj", "o4", "schwinger-u4",
     lambda k: [comm(k.E(i, j), k.E(p, q)) - _delta(j, p) * k.E(i, q) + _delta(i, q) * k.E(p, j)
                for i in MODES for j in MODES for p in MODES for q in MODES], cost=2)
_reg("[H, E_ij] = 0", "o4", "hamiltonian-central",
     lambda k: [comm(k["H"], k.E(i, j)) for i in MODES for j in MODES])
_reg("[H, L_jk] = 0", "o4", "hamiltonian-central",
     lambda k: [comm(k["H"], k.L(j, m)) for j, m in ROTATION_PLANES])


def _o4_table(k):
    out = []
    for j in MODES:
        for m in MODES:
            if j == m:
                continue
            for p in MODES:
                for q in MODES:
                    if p == q:
                        continue
                    rhs = (I * HALF) * (k.L(j, p) * _delta(m, q) - k.L(m, p) * _delta(j, q)
                                        + k.L(m, q) * _delta(j, p) - k.L(j, q) * _delta(m, p))
                    out.append(comm(k.L(j, m), k.L(p, q)) - rhs)
    return out


_reg("o(4) brackets [L_jk, L_lm]", "o4", "o4-brackets", _o4_table, cost=2)
_reg("[L12, L34] = 0", "o4", "o2-o2", lambda k: comm(k.L(1, 2), k.L(3, 4)))

# su11: metaplectic, pair and total triples
for _i in MODES:
    _reg(f"su(1,1) relations metaplectic({_i})", "su11", "su11-brackets",
         lambda k, i=_i: _su11(*k.triple(str(i))))
    _reg(f"metaplectic({_i}) Casimir = -3/16", "su11", "metaplectic-casimir",
         lambda k, i=_i: casimir(*k.triple(str(i))) + Fraction(3, 16))
for _lab in ("12", "34", "1234"):
    _reg(f"su(1,1) relations J^({_lab})", "su11", "su11-brackets",
         lambda k, lab=_lab: _su11(*k.triple(lab)), cost=2)
for _i, _j in ((1, 2), (3, 4)):
    _reg(f"pair({_i},{_j}) generators", "su11", "pair-generators",
         lambda k, i=_i, j=_j: [
             k[f"J0^({i}{j})"] - HALF * (k.N(i) + k.N(j) + 1),
             k[f"J+^({i}{j})"] - HALF * (k.ad(i) * k.ad(i) + k.ad(j) * k.ad(j)),
             k[f"J-^({i}{j})"] - HALF * (k.a(i) * k.a(i) + k.a(j) * k.a(j))])
_reg("J^(1234) = J^(12) + J^(34)", "su11", "pair-generators",
     lambda k: [k[f"J{s}^(1234)"] - k[f"J{s}^(12)"] - k[f"J{s}^(34)"] for s in "0+-"])
_reg("J0^(1234) = H/2", "su11", "pair-generators",
     lambda k: k["J0^(1234)"] - HALF * k["H"])

# higgs: integrity basis and the cubic bracket
_reg("a_i^dag^2 a_i^2 = N_i^2 - N_i", "higgs", "ordering-identities",
     lambda k: [k.ad(i) * k.ad(i) * k.a(i) * k.a(i) - (k.N(i) * k.N(i) - k.N(i)) for i in MODES])
_reg("a_i^2 a_j^dag^2 + a_i^dag^2 a_j^2 = 2 N_i N_j + N_i + N_j - 4 L_ij^2", "higgs",
     "ordering-identities",
     lambda k: [k.a(i) * k.a(i) * k.ad(j) * k.ad(j) + k.ad(i) * k.ad(i) * k.a(j) * k.a(j)
                - (2 * k.N(i) * k.N(j) + k.N(i) + k.N(j) - 4 * k.L(i, j) * k.L(i, j))
                for i in MODES for j in MODES if i != j], cost=2)
for _x in ("A+", "A-", "D", "K1", "K2", "K3"):
    _reg(f"[L12, {_x}] = [L34, {_x}] = 0", "higgs", "integrity-basis",
         lambda k, x=_x: [comm(k.L(1, 2), k[x]), comm(k.L(3, 4), k[x])], cost=3)
_reg("[H, A+] = [H, A-] = [H, D] = 0", "higgs", "integrity-basis",
     lambda k: [comm(k["H"], k[x]) for x in ("A+", "A-", "D")])
_reg("[D, A+] = 4 A+", "higgs", "higgs-bracket", lambda k: comm(k["D"], k["A+"]) - 4 * k["A+"])
_reg("[D, A-] = -4 A-", "higgs", "higgs-bracket", lambda k: comm(k["D"], k["A-"]) + 4 * k["A-"])


def _higgs_bracket_expanded(k):
    up = [k.ad(i) * k.ad(i) for i in MODES]
    low = [k.a(i) * k.a(i) for i in MODES]
    n12 = k.N(1) + k.N(2)
    n34 = k.N(3) + k.N(4)
    first = (up[0] * low[0] + up[0] * low[1] + up[1] * low[0] + up[1] * low[1]) * (n34 + 1)
    second = (n12 + 1) * (up[2] * low[2] + up[2] * low[3] + up[3] * low[2] + up[3] * low[3])
    return comm(k["A+"], k["A-"]) - (4 * first - 4 * second)


def _higgs_bracket_reduced(k):
    n12 = k.N(1) + k.N(2)
    n34 = k.N(3) + k.N(4)
    l12 = k.L(1, 2) * k.L(1, 2)
    l34 = k.L(3, 4) * k.L(3, 4)
    rhs = (4 * ((n12 * n12 - 4 * l12) * (n34 + 1))
           - 4 * ((n12 + 1) * (n34 * n34 - 4 * l34)))
    return comm(k["A+"], k["A-"]) - rhs


_reg("[A+, A-] as quartic ladder sum", "higgs", "higgs-bracket", _higgs_bracket_expanded, cost=4)
_reg("[A+, A-] through (N1+N2)^2 - 4 L12^2", "higgs", "higgs-bracket", _higgs_bracket_reduced,
     cost=4)
_reg("N1 + N2 = (H + D - 2)/2, N3 + N4 = (H - D - 2)/2", "higgs", "higgs-bracket",
     lambda k: [k.N(1) + k.N(2) - HALF * (k["H"] + k["D"] - 2),
                k.N(3) + k.N(4) - HALF * (k["H"] - k["D"] - 2)])
_reg("[A+, A-] = -D^3 + alpha1 D + alpha2", "higgs", "higgs-bracket",
     lambda k: comm(k["A+"], k["A-"]) + k["D"] * k["D"] * k["D"]
     - k["alpha1"] * k["D"] - k["alpha2"], cost=4)
_reg("alpha1, alpha2 central", "higgs", "higgs-constants",
     lambda k: [comm(k[al], k[x]) for al in ("alpha1", "alpha2") for x in ("A+", "A-", "D")],
     cost=3)

# hahn: change of presentation and the normalized relations
_reg("K1 = D/2", "hahn", "higgs-to-hahn", lambda k: k["K1"] - HALF * k["D"])
_reg("K2 = -(A+ + A- + D^2/2)/4 + alpha1/8", "hahn", "higgs-to-hahn",
     lambda k: k["K2"] - (-QUARTER * (k["A+"] + k["A-"] + HALF * k["D"] * k["D"])
                          + Fraction(1, 8) * k["alpha1"]), cost=2)
_reg("K3 = -(A+ - A-)/2", "hahn", "higgs-to-hahn",
     lambda k: k["K3"] + HALF * (k["A+"] - k["A-"]), cost=2)
_reg("[K1, K2] = K3", "hahn", "hahn-relations",
     lambda k: comm(k["K1"], k["K2"]) - k["K3"], cost=3)
_reg("[K2, K3] = -2{K1, K2} + delta1", "hahn", "hahn-relations",
     lambda k: comm(k["K2"], k["K3"]) + 2 * anti(k["K1"], k["K2"]) - k["delta1"], cost=5)
_reg("[K3, K1] = -2 K1^2 - 4 K2 + delta2", "hahn", "hahn-relations",
     lambda k: comm(k["K3"], k["K1"]) + 2 * k["K1"] * k["K1"] + 4 * k["K2"] - k["delta2"],
     cost=4)
_reg("delta1 = -alpha2/4", "hahn", "hahn-deltas",
     lambda k: k["delta1"] + QUARTER * k["alpha2"])
_reg("delta2 = alpha1/2", "hahn", "hahn-deltas",
     lambda k: k["delta2"] - HALF * k["alpha1"])
_reg("delta1, delta2 central", "hahn", "hahn-deltas",
     lambda k: [comm(k[d], k[x]) for d in ("delta1", "delta2") for x in ("K1", "K2")], cost=3)

# howe: coproduct embedding realized on two oscillator pairs, dual pair
_reg("K1 = J0^(12) - J0^(34)", "howe", "coproduct-embedding",
     lambda k: k["K1"] - (k["J0^(12)"] - k["J0^(34)"]))
_reg("K1 = ((N1 + N2) - (N3 + N4))/2", "howe", "coproduct-embedding",
     lambda k: k["K1"] - HALF * ((k.N(1) + k.N(2)) - (k.N(3) + k.N(4))))
_reg("K2 = C^(1234)", "howe", "k2-coincidence", lambda k: k["K2"] - k["C^(1234)"], cost=2)
_reg("C^(1234) is the Casimir of J^(1234)", "howe", "k2-coincidence",
     lambda k: k["C^(1234)"] - casimir(*k.triple("1234")), cost=2)


def _k2_coproduct(k):
    J0a, Jpa, Jma = k.triple("12")
    J0b, Jpb, Jmb = k.triple("34")
    rhs = k["C^(12)"] + k["C^(34)"] + 2 * J0a * J0b - Jpa * Jmb - Jma * Jpb
    return k["K2"] - rhs


_reg("K2 = C^(12) + C^(34) + 2 J0 J0 - J+ J- - J- J+", "howe", "coproduct-embedding",
     _k2_coproduct, cost=2)
_reg("K3 = -2(J+^(12) J-^(34) - J-^(12) J+^(34))", "howe", "coproduct-embedding",
     lambda k: k["K3"] + 2 * (k["J+^(12)"] * k["J-^(34)"] - k["J-^(12)"] * k["J+^(34)"]),
     cost=2)


def _ext_31(k):
    j0 = k["J0^(12)"] + k["J0^(34)"]
    rhs = (-2 * k["K1"] * k["K1"] - 4 * k["K2"] + 2 * j0 * j0
           + 4 * (k["C^(12)"] + k["C^(34)"]))
    return comm(k["K3"], k["K1"]) - rhs


def _ext_23(k):
    j0 = k["J0^(12)"] + k["J0^(34)"]
    rhs = -2 * anti(k["K1"], k["K2"]) + 4 * j0 * (k["C^(12)"] - k["C^(34)"])
    return comm(k["K2"], k["K3"]) - rhs


_reg("[K3, K1] centrally extended", "howe", "centrally-extended", _ext_31, cost=4)
_reg("[K2, K3] centrally extended", "howe", "centrally-extended", _ext_23, cost=5)
_reg("J0^(12) + J0^(34) central", "howe", "centrally-extended",
     lambda k: [comm(k["J0^(12)"] + k["J0^(34)"], k[x]) for x in ("K1", "K2", "K3")], cost=3)
_reg("[L_jk, J^(1234)] = 0", "howe", "howe-duality",
     lambda k: [comm(k.L(j, m), J) for j, m in ROTATION_PLANES for J in k.triple("1234")],
     cost=2)
_reg("C^(ij) = L_ij^2 - 1/4 for every pair", "howe", "pair-casimir",
     lambda k: [casimir(*_pair_triple(k, i, j)) - (k.L(i, j) * k.L(i, j) - QUARTER)
                for i, j in ROTATION_PLANES], cost=2)
_reg("C^(12), C^(34) catalog entries", "howe", "pair-casimir",
     lambda k: [k["C^(12)"] - (k.L(1, 2) * k.L(1, 2) - QUARTER),
                k["C^(34)"] - (k.L(3, 4) * k.L(3, 4) - QUARTER)])
_reg("delta1 = 4 J0^(1234) (C^(12) - C^(34))", "howe", "delta-correspondence",
     lambda k: k["delta1"] - 4 * k["J0^(1234)"] * (k["C^(12)"] - k["C^(34)"]), cost=2)
_reg("delta2 = 2 (J0^(1234))^2 + 4 (C^(12) + C^(34))", "howe", "delta-correspondence",
     lambda k: k["delta2"] - (2 * k["J0^(1234)"] * k["J0^(1234)"]
                              + 4 * (k["C^(12)"] + k["C^(34)"])), cost=2)


def _k2_ladder_form(k):
    up = sum((k.ad(i) * k.ad(i) for i in MODES[1:]), k.ad(1) * k.ad(1))
    low = sum((k.a(i) * k.a(i) for i in MODES[1:]), k.a(1) * k.a(1))
    H = k["H"]
    return k["K2"] - (QUARTER * H * H - HALF * H - QUARTER * up * low)


def _k2_number_form(k):
    H = k["H"]
    n12 = k.N(1) + k.N(2)
    n34 = k.N(3) + k.N(4)
    rhs = (QUARTER * H * H - HALF * H - QUARTER * (k["A+"] + k["A-"])
           - QUARTER * (n12 * n12 + n34 * n34 - 4 * k.L(1, 2) * k.L(1, 2)
                        - 4 * k.L(3, 4) * k.L(3, 4)))
    return k["K2"] - rhs


def _k2_coincidence(k):
    H = k["H"]
    rhs = (-QUARTER * (k["A+"] + k["A-"] + HALF * k["D"] * k["D"])
           + Fraction(1, 8) * H * H + k.L(1, 2) * k.L(1, 2) + k.L(3, 4) * k.L(3, 4) - HALF)
    return k["K2"] - rhs


_reg("K2 = H^2/4 - H/2 - (sum ad^2)(sum a^2)/4", "howe", "k2-coincidence", _k2_ladder_form,
     cost=2)
_reg("K2 through A+-, (N1+N2)^2, (N3+N4)^2, L12^2, L34^2", "howe", "k2-coincidence",
     _k2_number_form, cost=2)
_reg("K2 = -(A+ + A- + D^2/2)/4 + H^2/8 + L12^2 + L34^2 - 1/2", "howe", "k2-coincidence",
     _k2_coincidence, cost=2)
_reg("K2 = sum of L_jk^2", "howe", "k2-coincidence",
     lambda k: k["K2"] - sum((k.L(j, m) * k.L(j, m) for j, m in ROTATION_PLANES[1:]),
                             k.L(1, 2) * k.L(1, 2)), cost=2)
