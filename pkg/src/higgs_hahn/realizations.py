"""Oscillator realizations of the Higgs/Hahn operators inside W(4).

All constructions go through :class:`OperatorBuilder`, which only needs a
backend providing ``a(i)``, ``ad(i)`` and ``identity()``.  The exact backend
yields normal-ordered :class:`~higgs_hahn.weyl.WeylElement` values; the
numeric backend in :mod:`higgs_hahn.fock` yields truncated Fock matrices
built by plain matrix products, which is what makes the numeric route an
independent check of the normal-ordering engine.

Indices are 1-based throughout.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, Mapping, Tuple

from .scalars import I
from .weyl import WeylElement, commutator

__all__ = [
    "N_MODES",
    "ExactBackend",
    "OperatorBuilder",
    "Catalog",
    "build_catalog",
    "exact_catalog",
    "number",
    "E",
    "hamiltonian",
    "L",
    "metaplectic",
    "pair",
    "total",
    "casimir",
    "commutant_basis",
    "higgs_constants",
    "hahn_triple",
    "hahn_deltas",
]

N_MODES = 4
HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)
MODES = (1, 2, 3, 4)
ROTATION_PLANES = tuple(combinations(MODES, 2))


class ExactBackend:
    """Ladder operators of W(4) as normal-ordered elements."""

    n_modes = N_MODES

    def a(self, i: int) -> WeylElement:
        return WeylElement.annihilator(i, self.n_modes)

    def ad(self, i: int) -> WeylElement:
        return WeylElement.creator(i, self.n_modes)

    def identity(self) -> WeylElement:
        return WeylElement.identity(self.n_modes)


def _check_index(i: int) -> None:
    if not 1 <= i <= N_MODES:
        raise IndexError(f"mode index {i} out of range 1..{N_MODES}")


def casimir(J0, Jp, Jm):
    """su(1,1) Casimir ``J0^2 - J+ J- - J0`` of a triple."""
    return J0 * J0 - Jp * Jm - J0


class OperatorBuilder:
    """Constructors for every named operator, over an arbitrary backend."""

    def __init__(self, backend):
        self.backend = backend

    def a(self, i):
        _check_index(i)
        return self.backend.a(i)

    def ad(self, i):
        _check_index(i)
        return self.backend.ad(i)

    def number(self, i):
        return self.ad(i) * self.a(i)

    def E(self, i, j):
        return self.ad(i) * self.a(j)

    def hamiltonian(self):
        return sum((self.number(i) for i in MODES[1:]), self.number(1)) + 2

    def L(self, j, k):
        if j == k:
            raise ValueError("L(j, k) requires distinct indices")
        if j > k:
            return -self.L(k, j)
        return (I * HALF) * (self.a(j) * self.ad(k) - self.ad(j) * self.a(k))

    def metaplectic(self, i):
        J0 = HALF * (self.number(i) + HALF)
        Jp = HALF * (self.ad(i) * self.ad(i))
        Jm = HALF * (self.a(i) * self.a(i))
        return J0, Jp, Jm

    def pair(self, i, j):
        if i == j:
            raise ValueError("pair(i, j) requires distinct modes")
        mi, mj = self.metaplectic(i), self.metaplectic(j)
        return tuple(x + y for x, y in zip(mi, mj))

    def total(self):
        p, q = self.pair(1, 2), self.pair(3, 4)
        return tuple(x + y for x, y in zip(p, q))

    def commutant_basis(self):
        up12 = self.ad(1) * self.ad(1) + self.ad(2) * self.ad(2)
        up34 = self.ad(3) * self.ad(3) + self.ad(4) * self.ad(4)
        low12 = self.a(1) * self.a(1) + self.a(2) * self.a(2)
        low34 = self.a(3) * self.a(3) + self.a(4) * self.a(4)
        Ap = up12 * low34
        Am = low12 * up34
        D = (self.number(1) + self.number(2)) - (self.number(3) + self.number(4))
        return Ap, Am, D

    def _L_squares(self):
        L12, L34 = self.L(1, 2), self.L(3, 4)
        return L12 * L12, L34 * L34

    def higgs_constants(self):
        H = self.hamiltonian()
        s12, s34 = self._L_squares()
        alpha1 = H * H + 8 * (s12 + s34) - 4
        alpha2 = -8 * ((s12 - s34) * H)
        return alpha1, alpha2

    def hahn_triple(self):
        K1 = HALF * ((self.number(1) + self.number(2))
                     - (self.number(3) + self.number(4)))
        squares = [self.L(j, k) * self.L(j, k) for j, k in ROTATION_PLANES]
        K2 = sum(squares[1:], squares[0])
        K3 = commutator(K1, K2)
        return K1, K2, K3

    def hahn_deltas(self):
        H = self.hamiltonian()
        s12, s34 = self._L_squares()
        delta1 = 2 * ((s12 - s34) * H)
        delta2 = HALF * (H * H) + 4 * (s12 + s34) - 2
        return delta1, delta2


class Catalog(Mapping):
    """Named operators, built eagerly from one backend.

    Entries are looked up by name (``"L(1,2)"``, ``"J+^(12)"``, ``"K2"``...).
    :meth:`replace` returns a copy with one entry swapped, without
    recomputing anything that was derived from it; the identity suite uses
    this for mutation controls.
    """

    def __init__(self, entries: Dict[str, object], backend):
        self._entries = dict(entries)
        self.backend = backend

    def __getitem__(self, name):
        return self._entries[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def replace(self, name: str, element) -> "Catalog":
        if name not in self._entries:
            raise KeyError(name)
        entries = dict(self._entries)
        entries[name] = element
        return Catalog(entries, self.backend)

    # shorthands used by identity expressions
    def a(self, i):
        return self[f"a({i})"]

    def ad(self, i):
        return self[f"ad({i})"]

    def N(self, i):
        return self[f"N({i})"]

    def E(self, i, j):
        return self[f"E({i},{j})"]

    def L(self, j, k):
        """Rotation generator with the antisymmetric extension; ``L(j, j)`` is 0."""
        if j == k:
            return self["H"] * 0
        if j > k:
            return -self[f"L({k},{j})"]
        return self[f"L({j},{k})"]

    def triple(self, label: str) -> Tuple[object, object, object]:
        return tuple(self[f"J{s}^({label})"] for s in ("0", "+", "-"))

    @property
    def one(self):
        return self.backend.identity()


def build_catalog(backend) -> Catalog:
    """Construct every named operator over ``backend``."""
    b = OperatorBuilder(backend)
    out: Dict[str, object] = {}
    for i in MODES:
        out[f"a({i})"] = b.a(i)
        out[f"ad({i})"] = b.ad(i)
    for i in MODES:
        out[f"N({i})"] = b.number(i)
    for i in MODES:
        for j in MODES:
            out[f"E({i},{j})"] = b.E(i, j)
    out["H"] = b.hamiltonian()
    for j, k in ROTATION_PLANES:
        out[f"L({j},{k})"] = b.L(j, k)
    triples = {str(i): b.metaplectic(i) for i in MODES}
    triples["12"] = b.pair(1, 2)
    triples["34"] = b.pair(3, 4)
    triples["1234"] = b.total()
    for label, (J0, Jp, Jm) in triples.items():
        out[f"J0^({label})"] = J0
        out[f"J+^({label})"] = Jp
        out[f"J-^({label})"] = Jm
    for label in ("12", "34", "1234"):
        out[f"C^({label})"] = casimir(*triples[label])
    out["A+"], out["A-"], out["D"] = b.commutant_basis()
    out["alpha1"], out["alpha2"] = b.higgs_constants()
    out["K1"], out["K2"], out["K3"] = b.hahn_triple()
    out["delta1"], out["delta2"] = b.hahn_deltas()
    return Catalog(out, backend)


_EXACT = OperatorBuilder(ExactBackend())


@lru_cache(maxsize=1)
def exact_catalog() -> Catalog:
    return build_catalog(ExactBackend())


def number(i: int) -> WeylElement:
    return _EXACT.number(i)


def E(i: int, j: int) -> WeylElement:
    return _EXACT.E(i, j)


def hamiltonian() -> WeylElement:
    return _EXACT.hamiltonian()


def L(j: int, k: int) -> WeylElement:
    return _EXACT.L(j, k)


def metaplectic(i: int):
    return _EXACT.metaplectic(i)


def pair(i: int, j: int):
    return _EXACT.pair(i, j)


def total():
    return _EXACT.total()


def commutant_basis():
    return _EXACT.commutant_basis()


def higgs_constants():
    return _EXACT.higgs_constants()


def hahn_triple():
    return _EXACT.hahn_triple()


def hahn_deltas():
    return _EXACT.hahn_deltas()
