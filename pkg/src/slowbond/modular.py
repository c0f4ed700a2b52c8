"""Multi-modular helpers: word-size primes, CRT and rational reconstruction."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import gmpy2

__all__ = ["word_primes", "crt_pair", "rational_reconstruct", "to_residue", "MultiModular"]

PRIME_CEILING = 2**31


def word_primes(count: int, below: int = PRIME_CEILING) -> list[int]:
    """The ``count`` largest primes below ``below`` (products fit in int64)."""
    out = []
    p = below - 1
    while len(out) < count:
        if gmpy2.is_prime(p):
            out.append(p)
        p -= 2 if p % 2 else 1
    return out


def to_residue(q: Fraction, p: int) -> int:
    d = q.denominator % p
    if d == 0:
        raise ZeroDivisionError(f"denominator of {q} vanishes modulo {p}")
    return q.numerator * pow(d, -1, p) % p


def crt_pair(a: int, m: int, b: int, n: int) -> tuple[int, int]:
    """x = a mod m, x = b mod n  ->  (x mod mn, mn) for coprime m, n."""
    t = (b - a) * pow(m, -1, n) % n
    return a + m * t, m * n


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Smallest n/d with n = a d (mod m), |n|, d <= sqrt(m/2); None if none."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gmpy2.gcd(r1, s1) != 1:
        return None
    return Fraction(r1, s1) if s1 > 0 else Fraction(-r1, -s1)


class MultiModular:
    """Accumulates residues of many unknown rationals over a growing prime set.

    ``add(p, residues)`` folds in one prime.  ``reconstruct()`` returns the
    rationals once every value has produced the same reconstruction on two
    consecutive prime sets, else None.
    """

    def __init__(self, n_values: int):
        self.n = n_values
        self.modulus = 1
        self.values = [0] * n_values
        self.primes: list[int] = []
        self._last = None
        self.stable = False

    def add(self, p: int, residues):
        if self.modulus == 1:
            self.values = [int(r) % p for r in residues]
            self.modulus = p
        else:
            m = self.modulus
            inv = pow(m, -1, p)
            self.values = [a + m * ((int(b) - a) * inv % p) for a, b in zip(self.values, residues)]
            self.modulus = m * p
        self.primes.append(p)

    def reconstruct(self):
        cur = [rational_reconstruct(v, self.modulus) for v in self.values]
        if any(c is None for c in cur):
            self._last = None
            return None
        if self._last == cur:
            self.stable = True
            return cur
        self._last = cur
        return None
