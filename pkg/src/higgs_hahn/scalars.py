"""Exact scalar coefficients: Gaussian rationals and polynomials in named parameters."""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

__all__ = ["GaussianRational", "ParamPoly", "I", "as_gaussian", "as_poly"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussianRational:
    """Element of Q(i), stored as a pair of ``Fraction``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    def __add__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero in GaussianRational")
        num = self * other.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return as_gaussian(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / (self ** -n)
        out = GaussianRational(1)
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return f"({self.re})+({self.im})i"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        m = re.fullmatch(r"\s*\(([^()]+)\)\+\(([^()]+)\)i\s*", text)
        if not m:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        return cls(Fraction(m.group(1)), Fraction(m.group(2)))


I = GaussianRational(0, 1)


def as_gaussian(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return GaussianRational(x)
    return NotImplemented


# A parameter monomial is a sorted tuple of (name, exponent) pairs; () is 1.
PMono = Tuple[Tuple[str, int], ...]


def _mono_mul(m1: PMono, m2: PMono) -> PMono:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for name, e in m2:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


class ParamPoly:
    """Polynomial in named commuting parameters with Gaussian-rational coefficients.

    The canonical form is a dict without zero coefficients, so equality is
    dict equality.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[PMono, GaussianRational] | None = None):
        self.terms: Dict[PMono, GaussianRational] = {
            k: v for k, v in (terms or {}).items() if v}
        self._hash = None

    @classmethod
    def const(cls, c) -> "ParamPoly":
        c = as_gaussian(c)
        if c is NotImplemented:
            raise TypeError(f"not an exact scalar: {c!r}")
        return cls({(): c}) if c else cls()

    @classmethod
    def var(cls, name: str, power: int = 1) -> "ParamPoly":
        if power < 0:
            raise ValueError("parameter powers must be nonnegative")
        if power == 0:
            return cls.const(1)
        return cls({((name, power),): GaussianRational(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(k == () for k in self.terms)

    def constant(self) -> GaussianRational:
        """Value of a constant polynomial; raises if parameters appear."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), GaussianRational(0))

    @property
    def variables(self) -> set:
        return {name for k in self.terms for name, _ in k}

    def __add__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k)
            out[k] = v if s is None else s + v
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[PMono, GaussianRational] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = _mono_mul(k1, k2)
                p = v1 * v2
                s = out.get(k)
                out[k] = p if s is None else s + p
        return ParamPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = ParamPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self) -> "ParamPoly":
        # parameters are treated as real
        return ParamPoly({k: v.conjugate() for k, v in self.terms.items()})

    def substitute(self, values: Mapping[str, object]) -> "ParamPoly":
        """Replace parameters by exact scalars or other ParamPoly values."""
        out = ParamPoly()
        for k, v in self.terms.items():
            term = ParamPoly.const(v)
            for name, e in k:
                if name in values:
                    term = term * (as_poly(values[name]) ** e)
                else:
                    term = term * ParamPoly.var(name, e)
            out = out + term
        return out

    def __eq__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __complex__(self):
        return complex(self.constant())

    def __repr__(self):
        return f"ParamPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        if self.is_constant():
            return str(self.constant())
        parts = []
        for k in sorted(self.terms, key=_pmono_key):
            mono = "*".join(name if e == 1 else f"{name}^{e}" for name, e in k)
            parts.append(f"{self.terms[k]}" + (f"*{mono}" if mono else ""))
        return "[" + " + ".join(parts) + "]"

    @classmethod
    def parse(cls, text: str) -> "ParamPoly":
        text = text.strip()
        if text == "0":
            return cls()
        if not text.startswith("["):
            return cls.const(GaussianRational.parse(text))
        if not text.endswith("]"):
            raise ValueError(f"unbalanced parameter polynomial: {text!r}")
        out = cls()
        for part in text[1:-1].split(" + "):
            coef, _, mono = part.partition("*")
            term = cls.const(GaussianRational.parse(coef))
            if mono:
                for factor in mono.split("*"):
                    name, _, e = factor.partition("^")
                    term = term * cls.var(name, int(e) if e else 1)
            out = out + term
        return out


def _pmono_key(k: PMono):
    return (sum(e for _, e in k), k)


def as_poly(x) -> ParamPoly:
    if isinstance(x, ParamPoly):
        return x
    g = as_gaussian(x)
    if g is NotImplemented:
        return NotImplemented
    return ParamPoly.const(g)


Scalar = Union[int, Fraction, GaussianRational, ParamPoly]


def poly_sum(items: Iterable[ParamPoly]) -> ParamPoly:
    out = ParamPoly()
    for p in items:
        out = out + p
    return out
