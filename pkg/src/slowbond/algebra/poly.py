"""Univariate polynomials with exact rational coefficients (ascending degree)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

import mpmath

from .rational import as_fraction, format_rational
from .series import RationalSeries, series_reciprocal

__all__ = ["Polynomial", "poly_gcd"]


def _strip(cs):
    cs = list(cs)
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return cs


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple

    def __init__(self, coeffs: Sequence = (0,)):
        cs = _strip(as_fraction(c) for c in coeffs) or [Fraction(0)]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Polynomial":
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def __getitem__(self, k):
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if self.degree < dq:
            return Polynomial(), self
        quot = [Fraction(0)] * (self.degree - dq + 1)
        inv = 1 / other.leading
        for k in range(self.degree - dq, -1, -1):
            c = rem[k + dq] * inv
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq] or [0])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mp(self, z, precision: int = 256):
        """Horner evaluation in mpmath (complex or real) at ``precision`` bits."""
        with mpmath.workprec(precision):
            z = mpmath.mpmathify(z)
            acc = mpmath.mpf(0)
            for c in reversed(self.coeffs):
                acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
            return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([k * self.coeffs[k] for k in range(1, len(self.coeffs))] or [0])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = 1 / self.leading
        return Polynomial([c * inv for c in self.coeffs])

    def integer_coeffs(self) -> list[int]:
        """Primitive integer multiple with positive leading coefficient."""
        if self.is_zero():
            return [0]
        m = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * m) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return [i // g for i in ints]

    def content_normalized(self) -> "Polynomial":
        return Polynomial(self.integer_coeffs())

    def scale_to_constant_one(self) -> "Polynomial":
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("constant coefficient is zero")
        inv = 1 / self.coeffs[0]
        return Polynomial([c * inv for c in self.coeffs])

    def taylor_ratio(self, denominator: "Polynomial", order: int) -> RationalSeries:
        """Taylor coefficients of self/denominator about r = 0."""
        num = RationalSeries(self.coeffs, order)
        den = RationalSeries(denominator.coeffs, order)
        return num * series_reciprocal(den, order)

    def norm2_float(self) -> float:
        return float(sum(c * c for c in self.coeffs)) ** 0.5

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        return cls(data)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"


def _as_poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([x])


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm over Q."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()
