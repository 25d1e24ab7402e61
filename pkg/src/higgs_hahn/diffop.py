"""Radial differential operators in (rho_1, rho_2) with Laurent coefficients.

Monomials are ``rho_1^p1 rho_2^p2 d_1^q1 d_2^q2`` with integer ``p`` (negative
allowed) and nonnegative ``q``, multiplication operators to the left.
Derivatives are pushed right with the Leibniz rule

    d^q rho^r = sum_k C(q, k) r(r-1)...(r-k+1) rho^(r-k) d^(q-k),

valid for every integer ``r``.  Coefficients are polynomials in the
parameters ``a1``, ``a2`` of the centrifugal terms, so a passing identity
holds for every specialization.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Dict, Iterator, NamedTuple, Tuple

from .identities import IdentityCheck, SuiteReport, run_checks
from .scalars import ParamPoly, as_poly

__all__ = [
    "RadialMonomial",
    "DiffOpElement",
    "radial_product",
    "radial_commutator",
    "rho",
    "d",
    "param",
    "reduced_su11",
    "radial_casimir",
    "reduced_hahn",
    "displayed_hamiltonian",
    "displayed_K2",
    "displayed_K3",
    "apply_to_monomial",
    "run_diffop_suite",
    "DIFFOP_CHECKS",
]

N_VARS = 2
HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class RadialMonomial(NamedTuple):
    rho_pow: Tuple[int, ...]
    d_pow: Tuple[int, ...]

    @property
    def order(self) -> int:
        return sum(self.d_pow)


def _falling(r: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= r - j
    return out


@lru_cache(maxsize=1 << 16)
def _monomial_product(m1: RadialMonomial, m2: RadialMonomial
                      ) -> Tuple[Tuple[RadialMonomial, int], ...]:
    per_var = []
    for p1, q1, p2, q2 in zip(m1.rho_pow, m1.d_pow, m2.rho_pow, m2.d_pow):
        opts = []
        for k in range(q1 + 1):
            c = comb(q1, k) * _falling(p2, k)
            if c:
                opts.append((p1 + p2 - k, q1 + q2 - k, c))
        per_var.append(opts)
    out = []
    for choice in product(*per_var):
        c = 1
        for _, _, ck in choice:
            c *= ck
        out.append((RadialMonomial(tuple(x[0] for x in choice),
                                   tuple(x[1] for x in choice)), c))
    return tuple(out)


class DiffOpElement:
    """Canonical element of the radial operator algebra; immutable by convention."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[RadialMonomial, ParamPoly] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            if min(m.d_pow, default=0) < 0:
                raise ValueError(f"negative derivative power in {m}")
            c = as_poly(c)
            if c:
                clean[m] = c
        self.terms: Dict[RadialMonomial, ParamPoly] = clean

    @classmethod
    def scalar(cls, c) -> "DiffOpElement":
        z = (0,) * N_VARS
        return cls({RadialMonomial(z, z): as_poly(c)})

    def _coerce(self, other):
        if isinstance(other, DiffOpElement):
            return other
        c = as_poly(other)
        if c is NotImplemented:
            return NotImplemented
        return DiffOpElement.scalar(c)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            out[m] = c if s is None else s + c
        return DiffOpElement(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOpElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DiffOpElement):
            return radial_product(self, other)
        c = as_poly(other)
        if c is NotImplemented:
            return NotImplemented
        return DiffOpElement({m: v * c for m, v in self.terms.items()})

    def __rmul__(self, other):
        c = as_poly(other)
        if c is NotImplemented:
            return NotImplemented
        return DiffOpElement({m: c * v for m, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = DiffOpElement.scalar(1)
        for _ in range(n):
            out = radial_product(out, self)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[RadialMonomial, ParamPoly]]:
        return iter(self.terms.items())

    def is_scalar(self) -> bool:
        z = (0,) * N_VARS
        return all(m == RadialMonomial(z, z) for m in self.terms)

    def scalar_value(self) -> ParamPoly:
        if not self.is_scalar():
            raise ValueError("operator is not a multiple of the identity")
        z = (0,) * N_VARS
        return self.terms.get(RadialMonomial(z, z), ParamPoly())

    def substitute(self, values) -> "DiffOpElement":
        return DiffOpElement({m: c.substitute(values) for m, c in self.terms.items()})

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        lines = []
        for m in sorted(self.terms, key=lambda m: (m.order, m.d_pow, m.rho_pow)):
            parts = [f"rho({i})^{p}" for i, p in enumerate(m.rho_pow, 1) if p]
            parts += [f"d({i})" + (f"^{q}" if q > 1 else "")
                      for i, q in enumerate(m.d_pow, 1) if q]
            lines.append(f"{self.terms[m]} * {' '.join(parts) or '1'}")
        return "\n".join(lines)

    __str__ = to_text

    def __repr__(self):
        return f"DiffOpElement(terms={len(self.terms)})"


def radial_product(x: DiffOpElement, y: DiffOpElement) -> DiffOpElement:
    out: Dict[RadialMonomial, ParamPoly] = {}
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            c12 = c1 * c2
            for m, k in _monomial_product(m1, m2):
                v = c12 if k == 1 else c12 * k
                s = out.get(m)
                out[m] = v if s is None else s + v
    return DiffOpElement(out)


def radial_commutator(x: DiffOpElement, y: DiffOpElement) -> DiffOpElement:
    return radial_product(x, y) - radial_product(y, x)


def _unit(i: int, power: int):
    if i not in (1, 2):
        raise IndexError(f"radial variable index {i} not in (1, 2)")
    return tuple(power if k == i - 1 else 0 for k in range(N_VARS))


def rho(i: int, power: int = 1) -> DiffOpElement:
    """Multiplication by ``rho_i^power`` (any integer power)."""
    return DiffOpElement({RadialMonomial(_unit(i, power), (0,) * N_VARS): ParamPoly.const(1)})


def d(i: int, power: int = 1) -> DiffOpElement:
    """``(d/d rho_i)^power``."""
    if power < 0:
        raise ValueError("derivative power must be nonnegative")
    return DiffOpElement({RadialMonomial((0,) * N_VARS, _unit(i, power)): ParamPoly.const(1)})


def param(i: int) -> ParamPoly:
    """The centrifugal parameter ``a_i``."""
    return ParamPoly.var(f"a{i}")


def apply_to_monomial(op: DiffOpElement, exponents: Tuple[int, int]) -> Dict[Tuple[int, int], ParamPoly]:
    """Action of ``op`` on the Laurent monomial ``rho_1^e1 rho_2^e2``."""
    out: Dict[Tuple[int, int], ParamPoly] = {}
    for m, c in op.terms.items():
        coeff = 1
        powers = []
        for p, q, e in zip(m.rho_pow, m.d_pow, exponents):
            coeff *= _falling(e, q)
            powers.append(e - q + p)
        if coeff:
            key = tuple(powers)
            v = c * coeff
            out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if v}


# ----------------------------------------------------------------------
# the reduced operators


def reduced_su11(i: int):
    """Gauge-transformed radial su(1,1) triple ``(J0, J+, J-)`` for variable ``i``."""
    r, dr, a = rho(i), d(i), param(i)
    centrifugal = a * rho(i, -2)
    J0 = QUARTER * (-(dr * dr) - centrifugal + r * r)
    minus = r - dr
    plus = r + dr
    Jp = QUARTER * (minus * minus + centrifugal)
    Jm = QUARTER * (plus * plus + centrifugal)
    return J0, Jp, Jm


def radial_casimir(J0, Jp, Jm) -> DiffOpElement:
    return J0 * J0 - Jp * Jm - J0


def reduced_hahn():
    """``(K1, K2, K3, H)`` built from the two radial triples."""
    t1, t2 = reduced_su11(1), reduced_su11(2)
    J0, Jp, Jm = (x + y for x, y in zip(t1, t2))
    K1 = t1[0] - t2[0]
    K2 = radial_casimir(J0, Jp, Jm)
    K3 = radial_commutator(K1, K2)
    H = 2 * (t1[0] + t2[0])
    return K1, K2, K3, H


def displayed_hamiltonian() -> DiffOpElement:
    kinetic = -HALF * (d(1, 2) + d(2, 2))
    potential = HALF * (rho(1, 2) + rho(2, 2) - param(1) * rho(1, -2) - param(2) * rho(2, -2))
    return kinetic + potential


def displayed_K2() -> DiffOpElement:
    euler = rho(1) * d(2) - rho(2) * d(1)
    a1, a2 = param(1), param(2)
    inner = (euler * euler + a1 * (rho(2, 2) * rho(1, -2) + 1)
             + a2 * (rho(1, 2) * rho(2, -2) + 1) + 1)
    return -QUARTER * inner


def displayed_K3() -> DiffOpElement:
    def block(i):
        return d(i, 2) + rho(i, 2) + param(i) * rho(i, -2)

    def dilation(i):
        return 2 * rho(i) * d(i) + 1

    return QUARTER * (dilation(1) * block(2) - dilation(2) * block(1))


# ----------------------------------------------------------------------
# suite


def _context():
    t1, t2 = reduced_su11(1), reduced_su11(2)
    K1, K2, K3, H = reduced_hahn()
    C1, C2 = radial_casimir(*t1), radial_casimir(*t2)
    J0 = t1[0] + t2[0]
    delta1 = 4 * J0 * (C1 - C2)
    delta2 = 2 * J0 * J0 + 4 * (C1 + C2)
    return {"t1": t1, "t2": t2, "K1": K1, "K2": K2, "K3": K3, "H": H,
            "C1": C1, "C2": C2, "J0": J0, "delta1": delta1, "delta2": delta2}


def _su11(J0, Jp, Jm):
    c = radial_commutator
    return [c(J0, Jp) - Jp, c(J0, Jm) + Jm, c(Jp, Jm) + 2 * J0]


def _scalar_residual(op: DiffOpElement) -> DiffOpElement:
    # zero iff op is a multiple of the identity
    z = (0,) * N_VARS
    return DiffOpElement({m: c for m, c in op.terms.items() if m != RadialMonomial(z, z)})


def _specialized(ctx, values):
    K = {k: ctx[k].substitute(values) for k in ("K1", "K2", "K3", "delta1", "delta2")}
    return _hahn_relations(K)


def _hahn_relations(k):
    c = radial_commutator
    return [c(k["K2"], k["K3"]) + 2 * (k["K1"] * k["K2"] + k["K2"] * k["K1"]) - k["delta1"],
            c(k["K3"], k["K1"]) + 2 * k["K1"] * k["K1"] + 4 * k["K2"] - k["delta2"]]


_K_SPECIAL = {"a1": Fraction(1, 4), "a2": 1 + Fraction(1, 4)}  # a_i = k_i^2 + 1/4 at k = (0, 1)

DIFFOP_CHECKS = [
    IdentityCheck("radial su(1,1) relations, variable 1", "diffop", "radial-su11",
                  lambda k: _su11(*k["t1"])),
    IdentityCheck("radial su(1,1) relations, variable 2", "diffop", "radial-su11",
                  lambda k: _su11(*k["t2"])),
    IdentityCheck("radial Casimir 1 is scalar", "diffop", "radial-su11",
                  lambda k: _scalar_residual(k["C1"])),
    IdentityCheck("radial Casimir 2 is scalar", "diffop", "radial-su11",
                  lambda k: _scalar_residual(k["C2"])),
    IdentityCheck("H = 2(J0^(12) + J0^(34)) matches the displayed singular oscillator",
                  "diffop", "singular-oscillator",
                  lambda k: k["H"] - displayed_hamiltonian()),
    IdentityCheck("K2 matches the displayed closed form", "diffop", "reduced-hahn",
                  lambda k: k["K2"] - displayed_K2()),
    IdentityCheck("K3 matches the displayed closed form", "diffop", "reduced-hahn",
                  lambda k: k["K3"] - displayed_K3()),
    IdentityCheck("[H, K1] = [H, K2] = [H, K3] = 0", "diffop", "reduced-hahn",
                  lambda k: [radial_commutator(k["H"], k[x]) for x in ("K1", "K2", "K3")]),
    IdentityCheck("[K2, K3] = -2{K1, K2} + delta1", "diffop", "reduced-hahn",
                  lambda k: _hahn_relations(k)[0]),
    IdentityCheck("[K3, K1] = -2 K1^2 - 4 K2 + delta2", "diffop", "reduced-hahn",
                  lambda k: _hahn_relations(k)[1]),
    IdentityCheck("Hahn relations at a1 = a2", "diffop", "reduced-hahn",
                  lambda k: _specialized(k, {"a2": param(1)})),
    IdentityCheck("Hahn relations at a_i = k_i^2 + 1/4, k = (0, 1)", "diffop", "reduced-hahn",
                  lambda k: _specialized(k, _K_SPECIAL)),
]


def run_diffop_suite() -> SuiteReport:
    """Verify the dimensional-reduction identities symbolically in (a1, a2)."""
    ctx = _context()
    report = run_checks("diffop", DIFFOP_CHECKS, ctx)
    recorded = {}
    for i, key in ((1, "C1"), (2, "C2")):
        op = ctx[key]
        recorded[f"casimir_{i}"] = str(op.scalar_value()) if op.is_scalar() else op.to_text()
    report.recorded.update(recorded)
    return report
