"""Normal-ordered Heisenberg-Weyl algebra W(n).

Elements are finite sums of normal-ordered monomials

    a_1^dag^{r_1} ... a_n^dag^{r_n} a_1^{l_1} ... a_n^{l_n}

with :class:`~higgs_hahn.scalars.ParamPoly` coefficients. Because normal
order is a canonical form, an element is zero exactly when its term map is
empty, which is what every identity check relies on.
"""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Dict, Iterator, NamedTuple, Tuple

from .scalars import GaussianRational, ParamPoly, as_poly

__all__ = [
    "NormalMonomial",
    "WeylElement",
    "normal_product",
    "commutator",
    "anticommutator",
    "is_zero",
    "reorder_coefficients",
]


class NormalMonomial(NamedTuple):
    """Creation powers ``raising`` to the left of annihilation powers ``lowering``."""

    raising: Tuple[int, ...]
    lowering: Tuple[int, ...]

    @property
    def n_modes(self) -> int:
        return len(self.raising)

    @property
    def degree(self) -> int:
        return sum(self.raising) + sum(self.lowering)

    def adjoint(self) -> "NormalMonomial":
        return NormalMonomial(self.lowering, self.raising)


@lru_cache(maxsize=None)
def reorder_coefficients(p: int, q: int) -> Tuple[Tuple[int, int], ...]:
    """Expansion of ``a^p a^dag^q`` as ``((k, c_k), ...)`` meaning
    ``sum_k c_k a^dag^(q-k) a^(p-k)`` with ``c_k = k! C(p,k) C(q,k)``."""
    return tuple((k, factorial(k) * comb(p, k) * comb(q, k))
                 for k in range(min(p, q) + 1))


@lru_cache(maxsize=1 << 18)
def _monomial_product(m1: NormalMonomial, m2: NormalMonomial
                      ) -> Tuple[Tuple[NormalMonomial, int], ...]:
    # distinct modes commute, so the middle block a^{l1} a^dag^{r2}
    # factorizes into independent per-mode reorderings
    per_mode = []
    for r1, l1, r2, l2 in zip(m1.raising, m1.lowering, m2.raising, m2.lowering):
        if l1 == 0 or r2 == 0:
            per_mode.append(((r1 + r2, l1 + l2, 1),))
        else:
            per_mode.append(tuple((r1 + r2 - k, l1 + l2 - k, c)
                                  for k, c in reorder_coefficients(l1, r2)))
    out = []
    for choice in product(*per_mode):
        c = 1
        for _, _, ck in choice:
            c *= ck
        out.append((NormalMonomial(tuple(x[0] for x in choice),
                                   tuple(x[1] for x in choice)), c))
    return tuple(out)


class WeylElement:
    """Canonical element of W(n); treat instances as immutable."""

    __slots__ = ("n_modes", "terms")

    def __init__(self, n_modes: int, terms: Dict[NormalMonomial, ParamPoly] | None = None):
        if n_modes < 1:
            raise ValueError("n_modes must be positive")
        self.n_modes = n_modes
        clean = {}
        for m, c in (terms or {}).items():
            if len(m.raising) != n_modes or len(m.lowering) != n_modes:
                raise ValueError(f"monomial {m} does not have {n_modes} modes")
            if min(m.raising + m.lowering) < 0:
                raise ValueError(f"negative power in {m}")
            c = as_poly(c)
            if c:
                clean[m] = c
        self.terms: Dict[NormalMonomial, ParamPoly] = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n_modes: int) -> "WeylElement":
        return cls(n_modes)

    @classmethod
    def scalar(cls, c, n_modes: int) -> "WeylElement":
        z = (0,) * n_modes
        return cls(n_modes, {NormalMonomial(z, z): as_poly(c)})

    @classmethod
    def identity(cls, n_modes: int) -> "WeylElement":
        return cls.scalar(1, n_modes)

    @classmethod
    def monomial(cls, raising, lowering, coeff=1) -> "WeylElement":
        m = NormalMonomial(tuple(raising), tuple(lowering))
        return cls(len(m.raising), {m: as_poly(coeff)})

    @classmethod
    def annihilator(cls, i: int, n_modes: int) -> "WeylElement":
        """``a_i`` with 1-based mode index."""
        _check_mode(i, n_modes)
        low = tuple(1 if k == i - 1 else 0 for k in range(n_modes))
        return cls.monomial((0,) * n_modes, low)

    @classmethod
    def creator(cls, i: int, n_modes: int) -> "WeylElement":
        """``a_i^dag`` with 1-based mode index."""
        _check_mode(i, n_modes)
        up = tuple(1 if k == i - 1 else 0 for k in range(n_modes))
        return cls.monomial(up, (0,) * n_modes)

    # -- ring structure -----------------------------------------------
    def _coerce(self, other) -> "WeylElement":
        if isinstance(other, WeylElement):
            if other.n_modes != self.n_modes:
                raise ValueError(
                    f"mode-count mismatch: {self.n_modes} vs {other.n_modes}")
            return other
        c = as_poly(other)
        if c is NotImplemented:
            return NotImplemented
        return WeylElement.scalar(c, self.n_modes)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            out[m] = c if s is None else s + c
        return WeylElement(self.n_modes, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement(self.n_modes, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylElement":
        c = as_poly(c)
        if c is NotImplemented:
            raise TypeError(f"cannot scale by {c!r}")
        if not c:
            return WeylElement(self.n_modes)
        return WeylElement(self.n_modes, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return normal_product(self, other)
        c = as_poly(other)
        if c is NotImplemented:
            return NotImplemented
        return self.scale(c)

    def __rmul__(self, other):
        c = as_poly(other)
        if c is NotImplemented:
            return NotImplemented
        return self.scale(c)

    def __truediv__(self, other):
        if isinstance(other, (WeylElement, ParamPoly)):
            return NotImplemented
        return self.scale(GaussianRational(1) / other)

    def __pow__(self, n: int) -> "WeylElement":
        if n < 0:
            raise ValueError("negative exponent")
        out = WeylElement.identity(self.n_modes)
        for _ in range(n):
            out = normal_product(out, self)
        return out

    # -- predicates and structure --------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.n_modes == other.n_modes and self.terms == other.terms
        c = as_poly(other)
        if c is NotImplemented:
            return NotImplemented
        return self == WeylElement.scalar(c, self.n_modes)

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[NormalMonomial, ParamPoly]]:
        return iter(self.terms.items())

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    @property
    def raise_degree(self) -> int:
        return max((sum(m.raising) for m in self.terms), default=0)

    def is_scalar(self) -> bool:
        z = (0,) * self.n_modes
        return all(m.raising == z and m.lowering == z for m in self.terms)

    def scalar_value(self) -> ParamPoly:
        if not self.is_scalar():
            raise ValueError("element is not a multiple of the identity")
        z = (0,) * self.n_modes
        return self.terms.get(NormalMonomial(z, z), ParamPoly())

    def adjoint(self) -> "WeylElement":
        """Formal adjoint: conjugate coefficients and swap raising/lowering.

        The adjoint of a normal monomial is again normal ordered, so no
        reordering is needed.
        """
        return WeylElement(self.n_modes, {m.adjoint(): c.conjugate()
                                          for m, c in self.terms.items()})

    def substitute(self, values) -> "WeylElement":
        return WeylElement(self.n_modes, {m: c.substitute(values)
                                          for m, c in self.terms.items()})

    # -- text form ---------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return "\n".join(f"{self.terms[m]} * {_format_monomial(m)}"
                         for m in sorted(self.terms, key=_monomial_key))

    __str__ = to_text

    def __repr__(self):
        return f"WeylElement(n_modes={self.n_modes}, terms={len(self.terms)})"

    @classmethod
    def parse(cls, text: str, n_modes: int) -> "WeylElement":
        text = text.strip()
        out = cls(n_modes)
        if text == "0":
            return out
        for line in text.splitlines():
            coef, sep, mono = line.rpartition(" * ")
            if not sep:
                raise ValueError(f"malformed term: {line!r}")
            up = [0] * n_modes
            low = [0] * n_modes
            mono = mono.strip()
            if mono != "1":
                for tok in mono.split():
                    m = _FACTOR_RE.fullmatch(tok)
                    if not m:
                        raise ValueError(f"malformed factor {tok!r} in {line!r}")
                    i = int(m.group(2))
                    _check_mode(i, n_modes)
                    target = up if m.group(1) == "ad" else low
                    target[i - 1] += int(m.group(3) or 1)
            out = out + cls(n_modes, {NormalMonomial(tuple(up), tuple(low)):
                                      ParamPoly.parse(coef)})
        return out


_FACTOR_RE = re.compile(r"(ad|a)\((\d+)\)(?:\^(\d+))?")


def _format_monomial(m: NormalMonomial) -> str:
    parts = []
    for tag, powers in (("ad", m.raising), ("a", m.lowering)):
        for i, p in enumerate(powers, start=1):
            if p:
                parts.append(f"{tag}({i})" + (f"^{p}" if p > 1 else ""))
    return " ".join(parts) or "1"


def _monomial_key(m: NormalMonomial):
    return (m.degree, m.raising, m.lowering)


def _check_mode(i: int, n_modes: int) -> None:
    if not 1 <= i <= n_modes:
        raise IndexError(f"mode index {i} out of range 1..{n_modes}")


def normal_product(x: WeylElement, y: WeylElement) -> WeylElement:
    """Normal-ordered form of the operator product ``x y``."""
    if x.n_modes != y.n_modes:
        raise ValueError(f"mode-count mismatch: {x.n_modes} vs {y.n_modes}")
    out: Dict[NormalMonomial, ParamPoly] = {}
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            c12 = c1 * c2
            for m, k in _monomial_product(m1, m2):
                v = c12 if k == 1 else c12 * k
                s = out.get(m)
                out[m] = v if s is None else s + v
    return WeylElement(x.n_modes, out)


def commutator(x, y):
    """``[x, y] = xy - yx``; works for any operands supporting ``*`` and ``-``."""
    return x * y - y * x


def anticommutator(x, y):
    """``{x, y} = xy + yx``."""
    return x * y + y * x


def is_zero(x) -> bool:
    return x.is_zero()
