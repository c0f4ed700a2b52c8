"""Truncated power series with exact rational or multiprecision coefficients.

A series of order ``n`` carries the coefficients of ``r**0 .. r**n``; every
higher coefficient is unknown, not zero.  Binary operations truncate to the
smaller of the two orders.

The coefficient recurrences below are written once and shared by both
coefficient types: they only use ``+ - * /`` on the elements, plus ``log`` and
``exp`` of the constant term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .rational import as_fraction, format_rational

__all__ = [
    "SingularSeriesError",
    "RationalSeries",
    "FloatSeries",
    "DEFAULT_PRECISION",
    "series_arith",
    "series_reciprocal",
    "series_log",
    "series_exp",
    "mobius_compose",
    "mobius_r_of_u",
    "mobius_u_of_r",
]

DEFAULT_PRECISION = 256


class SingularSeriesError(ArithmeticError):
    """Raised when an operation needs a non-zero constant term."""


# -- coefficient kernels (generic over the element type) --------------------


def _mul(a, b, n, zero):
    out = []
    for k in range(n + 1):
        acc = zero
        for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            acc += a[i] * b[k - i]
        out.append(acc)
    return out


def _recip(a, n, zero):
    if a[0] == 0:
        raise SingularSeriesError("reciprocal of a series with zero constant term")
    inv0 = 1 / a[0]
    out = [inv0]
    for k in range(1, n + 1):
        acc = zero
        for i in range(1, min(k, len(a) - 1) + 1):
            acc += a[i] * out[k - i]
        out.append(-acc * inv0)
    return out


def _deriv(a):
    return [k * a[k] for k in range(1, len(a))]


def _log_tail(a, n, zero):
    # x' = a'/a, so k x_k = sum_{j=1..k} j a_j q_{k-j} with q = 1/a
    q = _recip(a, n, zero)
    out = []
    for k in range(1, n + 1):
        acc = zero
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += j * a[j] * q[k - j]
        out.append(acc / k)
    return out


def _exp_tail(a, e0, n, zero):
    # e' = a' e, so k e_k = sum_{j=1..k} j a_j e_{k-j}
    out = [e0]
    for k in range(1, n + 1):
        acc = zero
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += j * a[j] * out[k - j]
        out.append(acc / k)
    return out


def _compose(a, inner, n, zero):
    """Coefficients of a(inner(u)) for inner with zero constant term (Horner)."""
    if inner[0] != 0:
        raise ValueError("inner series must vanish at the origin")
    acc = [zero] * (n + 1)
    for c in reversed(a[: n + 1]):
        acc = _mul(acc, inner, n, zero)
        acc[0] += c
    return acc


# -- series types -----------------------------------------------------------


@dataclass(frozen=True)
class RationalSeries:
    """Truncated series with exact :class:`fractions.Fraction` coefficients."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence, order: int | None = None):
        cs = [as_fraction(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        if not cs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "RationalSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return RationalSeries(self.coeffs[: order + 1])

    def to_float(self, precision: int = DEFAULT_PRECISION) -> "FloatSeries":
        with mpmath.workprec(precision):
            return FloatSeries(
                [mpmath.mpf(c.numerator) / c.denominator for c in self.coeffs], precision
            )

    def _coerce(self, other):
        if isinstance(other, FloatSeries):
            return self.to_float(other.precision), other
        if isinstance(other, RationalSeries):
            return self, other
        return self, RationalSeries([other], self.order)

    def __add__(self, other):
        return series_arith(self, other, "add")

    def __sub__(self, other):
        return series_arith(self, other, "sub")

    def __mul__(self, other):
        return series_arith(self, other, "mul")

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalSeries([-c for c in self.coeffs])

    def __call__(self, r):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * r + c
        return acc

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "RationalSeries":
        return cls(data)


@dataclass(frozen=True)
class FloatSeries:
    """Truncated series with mpmath coefficients at a recorded precision (bits)."""

    coeffs: tuple
    precision: int

    def __init__(self, coeffs: Sequence, precision: int = DEFAULT_PRECISION, order: int | None = None):
        with mpmath.workprec(precision):
            cs = [mpmath.mpmathify(c) if not isinstance(c, Fraction) else mpmath.mpf(c.numerator) / c.denominator
                  for c in coeffs]
            if order is not None:
                cs = (cs + [mpmath.mpf(0)] * (order + 1))[: order + 1]
        if not cs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "precision", int(precision))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "FloatSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return FloatSeries(self.coeffs[: order + 1], self.precision)

    def to_float(self, precision: int | None = None) -> "FloatSeries":
        if precision is None or precision == self.precision:
            return self
        return FloatSeries(self.coeffs, precision)

    def _coerce(self, other):
        if isinstance(other, RationalSeries):
            return self, other.to_float(self.precision)
        if isinstance(other, FloatSeries):
            p = min(self.precision, other.precision)
            return self.to_float(p), other.to_float(p)
        return self, FloatSeries([other], self.precision, self.order)

    def __add__(self, other):
        return series_arith(self, other, "add")

    def __sub__(self, other):
        return series_arith(self, other, "sub")

    def __mul__(self, other):
        return series_arith(self, other, "mul")

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        with mpmath.workprec(self.precision):
            return FloatSeries([-c for c in self.coeffs], self.precision)

    def __call__(self, r):
        with mpmath.workprec(self.precision):
            acc = mpmath.mpf(0)
            for c in reversed(self.coeffs):
                acc = acc * r + c
            return acc

    def to_json(self) -> dict:
        digits = int(self.precision * 0.30103) + 1
        return {
            "precision": self.precision,
            "coeffs": [mpmath.nstr(c, digits, strip_zeros=False) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FloatSeries":
        prec = int(data["precision"])
        with mpmath.workprec(prec):
            return cls([mpmath.mpf(s) for s in data["coeffs"]], prec)


Series = RationalSeries | FloatSeries


def _wrap(template, coeffs):
    if isinstance(template, RationalSeries):
        return RationalSeries(coeffs)
    return FloatSeries(coeffs, template.precision)


def _zero(s):
    return Fraction(0) if isinstance(s, RationalSeries) else mpmath.mpf(0)


def _prec(s):
    return s.precision if isinstance(s, FloatSeries) else DEFAULT_PRECISION


# -- operations ---------------------------------------------------------------


def series_arith(a, b, op: str):
    """``a (op) b`` for op in {"add", "sub", "mul"}, truncated to the common order."""
    a, b = a._coerce(b)
    n = min(a.order, b.order)
    with mpmath.workprec(_prec(a)):
        if op == "add":
            cs = [x + y for x, y in zip(a.coeffs[: n + 1], b.coeffs[: n + 1])]
        elif op == "sub":
            cs = [x - y for x, y in zip(a.coeffs[: n + 1], b.coeffs[: n + 1])]
        elif op == "mul":
            cs = _mul(a.coeffs, b.coeffs, n, _zero(a))
        else:
            raise ValueError(f"unknown series operation {op!r}")
        return _wrap(a, cs)


def series_reciprocal(a, order: int | None = None):
    """1/a to ``order`` (default: the order of ``a``)."""
    n = a.order if order is None else order
    with mpmath.workprec(_prec(a)):
        return _wrap(a, _recip(a.coeffs, n, _zero(a)))


def series_log(a, order: int | None = None):
    """log(a).  Rational series need a unit constant term; float ones a positive one."""
    n = a.order if order is None else order
    a0 = a.coeffs[0]
    if a0 == 0:
        raise SingularSeriesError("log of a series with zero constant term")
    with mpmath.workprec(_prec(a)):
        if isinstance(a, RationalSeries):
            if a0 != 1:
                raise ValueError("log of a rational series is rational only when a[0] == 1; use to_float()")
            head = Fraction(0)
        else:
            if a0 < 0:
                raise ValueError("log branch: float series needs a positive constant term")
            head = mpmath.log(a0)
        return _wrap(a, [head] + _log_tail(a.coeffs, n, _zero(a)))


def series_exp(a, order: int | None = None):
    """exp(a).  Rational series must have zero constant term to stay rational."""
    n = a.order if order is None else order
    a0 = a.coeffs[0]
    with mpmath.workprec(_prec(a)):
        if isinstance(a, RationalSeries):
            if a0 != 0:
                raise ValueError("exp of a rational series is rational only when a[0] == 0; use to_float()")
            e0 = Fraction(1)
        else:
            e0 = mpmath.exp(a0)
        return _wrap(a, _exp_tail(a.coeffs, e0, n, _zero(a)))


def _mobius_slope(r1, exact: bool):
    r1 = as_fraction(r1) if exact else mpmath.mpf(r1)
    if r1 == 0 or r1 == 1:
        raise ValueError("degenerate fractional linear map: r1 must differ from 0 and 1")
    # r(u) = t u / (1 + t u) with t = r1 / (1 - r1)
    return r1 / (1 - r1)


def mobius_r_of_u(u, r1):
    """Map u -> r = r1 u / (1 - r1 (1 - u)); sends u = 1 to r1 and u = oo to r = 1."""
    return r1 * u / (1 - r1 * (1 - u))


def mobius_u_of_r(r, r1):
    """Inverse of :func:`mobius_r_of_u`: u = ((1 - r1)/r1) r/(1 - r)."""
    return (1 - r1) / r1 * r / (1 - r)


def mobius_compose(a, r1, order: int | None = None):
    """Series in u of a(r(u)) under the map of :func:`mobius_r_of_u`.

    The map fixes the origin, carries ``r1`` to ``u = 1`` and pushes ``r = 1``
    to infinity.
    """
    n = a.order if order is None else order
    exact = isinstance(a, RationalSeries)
    with mpmath.workprec(_prec(a)):
        t = _mobius_slope(r1, exact)
        zero = _zero(a)
        # t u / (1 + t u) = sum_{m>=1} (-1)^(m+1) t^m u^m
        inner = [zero]
        p = -1 if exact else mpmath.mpf(-1)
        for _ in range(n):
            p = -p * t
            inner.append(p)
        return _wrap(a, _compose(list(a.coeffs), inner, n, zero))
