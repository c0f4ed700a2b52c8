"""Exact rationals: coercion, "num/den" serialization, decimal truncation."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from numbers import Rational

import mpmath

__all__ = [
    "as_fraction",
    "format_rational",
    "parse_rational",
    "truncate_decimal",
    "round_decimal",
    "decimal_matches",
    "format_mpf",
]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, gmpy2 mpq, decimal strings and "p/q" strings.

    Floats are taken at their exact binary value, so pass strings when the
    decimal literal is what you mean.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return parse_rational(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator"):  # gmpy2.mpq
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, (float, Decimal)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q) -> str:
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        q = Fraction(int(num), int(den))
    else:
        q = Fraction(Decimal(s))
    return q


def truncate_decimal(q, digits: int = 20) -> str:
    """Fixed-point rendering of ``q`` truncated (not rounded) after ``digits``."""
    q = as_fraction(q)
    sign = "-" if q < 0 else ""
    a = abs(q)
    scaled = a.numerator * 10**digits // a.denominator
    whole, frac = divmod(scaled, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def round_decimal(q, digits: int = 8) -> str:
    """Fixed-point rendering of ``q`` rounded half away from zero."""
    q = as_fraction(q)
    sign = "-" if q < 0 else ""
    a = abs(q)
    scaled = (2 * a.numerator * 10**digits + a.denominator) // (2 * a.denominator)
    whole, frac = divmod(scaled, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def decimal_matches(q, printed: str, ulps: int = 1) -> bool:
    """True if ``q`` agrees with a printed fixed-point value to its last digit.

    ``q`` is truncated to the printed number of places first; the comparison
    then allows ``ulps`` units in the last printed place, which
    absorbs rounding-versus-truncation differences in published tables.
    """
    digits = len(printed.split(".")[1]) if "." in printed else 0
    target = parse_rational(printed)
    ours = parse_rational(truncate_decimal(q, digits))
    return abs(ours - target) * 10**digits <= ulps


def format_mpf(x, digits: int | None = None) -> str:
    if digits is None:
        digits = max(1, int(mpmath.mp.dps))
    return mpmath.nstr(x, digits, strip_zeros=False)
