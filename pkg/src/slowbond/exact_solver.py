"""Exact stationary current of small systems as a rational function of r.

The current is evaluated exactly at rational sample points (one exact
null-vector solve of M(r_i) each) and the rational function is recovered by
Cauchy interpolation: the polynomial interpolant is fed through the extended
Euclidean algorithm against prod (r - r_i) and stopped at the first remainder
within the numerator degree bound.  Held-out points then confirm the result.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import flint
import numpy as np

from .algebra.poly import Polynomial
from .algebra.roots import poly_roots
from .algebra.series import RationalSeries
from .modular import MultiModular, to_residue, word_primes
from .model import BLOCK, BULK, ENTRY, EXIT, AffineGenerator, Geometry, build_generator

log = logging.getLogger(__name__)

__all__ = [
    "CurrentRational",
    "ReconstructionError",
    "null_vector",
    "exact_current",
    "cauchy_interpolate",
    "current_rational",
    "denominator_zeros",
    "KNOWN_RING_DEGREES",
    "NEAR_ORIGIN_WINDOW",
    "in_window",
    "KNOWN_INTERVAL_DEGREES",
]

KNOWN_RING_DEGREES = {1: 1, 2: 2, 3: 5, 4: 14, 5: 42}
# observed for unit boundary rates; used only as a starting bound
KNOWN_INTERVAL_DEGREES = {1: 1, 2: 3, 3: 10, 4: 35}
# The closed unit disc isolates L near-origin zeros for L <= 4 and L + 2 for
# L = 5; the 1.5 x 1.5 box does not (it holds 8 zeros at L = 4).
NEAR_ORIGIN_WINDOW = ("disc", 1.0)
MAX_RING_L = 5
MAX_INTERVAL_L = 4


class ReconstructionError(ArithmeticError):
    pass


def _fq(x: Fraction):
    return flint.fmpq(x.numerator, x.denominator)


def null_vector(gen: AffineGenerator, r) -> list[Fraction]:
    """Exact stationary distribution of M(r) at rational ``r``.

    The last balance equation is replaced by normalisation; a non-singular
    system certifies that the null space is one-dimensional.
    """
    r = Fraction(r)
    g = gen.geometry
    n = gen.n
    rate = {BULK: Fraction(1), BLOCK: r, ENTRY: g.alpha, EXIT: g.beta}
    acc: dict = {}
    for s, d, k in zip(gen.src.tolist(), gen.dst.tolist(), gen.kind.tolist()):
        w = rate[k]
        acc[d, s] = acc.get((d, s), 0) + w
        acc[s, s] = acc.get((s, s), 0) - w
    m = flint.fmpq_mat(n, n)
    for (i, j), v in acc.items():
        if i != n - 1:
            m[i, j] = _fq(v)
    for j in range(n):
        m[n - 1, j] = 1
    rhs = flint.fmpq_mat(n, 1, [0] * (n - 1) + [1])
    try:
        x = m.solve(rhs)
    except ZeroDivisionError as exc:
        raise ArithmeticError(f"M({r}) has a degenerate null space") from exc
    out = []
    for i in range(n):
        v = x[i, 0]
        out.append(Fraction(int(v.p), int(v.q)))
    return out


def exact_current(gen: AffineGenerator, r) -> Fraction:
    """r * <eta_0 (1 - eta_1)> in the exact stationary state."""
    r = Fraction(r)
    p = null_vector(gen, r)
    blk = np.flatnonzero(gen.block_active()).tolist()
    return r * sum((p[i] for i in blk), Fraction(0))


def _from_flint(p) -> Polynomial:
    return Polynomial([Fraction(int(c.p), int(c.q)) for c in p.coeffs()] or [0])


def _newton_interpolant_mod(xs, ys, p):
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    poly = flint.nmod_poly([coef[-1]], p)
    for i in range(n - 2, -1, -1):
        poly = poly * flint.nmod_poly([-xs[i] % p, 1], p) + coef[i]
    return poly


def _cauchy_mod(xs, ys, num_degree, p):
    """Monic-denominator Cauchy interpolant modulo p, as coefficient lists."""
    big = flint.nmod_poly([1], p)
    for x in xs:
        big *= flint.nmod_poly([-x % p, 1], p)
    r0, r1 = big, _newton_interpolant_mod(xs, ys, p)
    t0, t1 = flint.nmod_poly([0], p), flint.nmod_poly([1], p)
    while r1.degree() > num_degree:
        q, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        t0, t1 = t1, t0 - q * t1
    g = r1.gcd(t1)
    P, Q = r1 // g, t1 // g
    lead = int(Q.leading_coefficient())
    inv = pow(lead, -1, p)
    return [int(c) * inv % p for c in P.coeffs()], [int(c) * inv % p for c in Q.coeffs()]


def _eval_mod(cs, x, p):
    acc = 0
    for c in reversed(cs):
        acc = (acc * x + c) % p
    return acc


def cauchy_interpolate(xs, ys, num_degree: int, den_degree: int, held_out=(), max_primes: int = 400):
    """Rational P/Q with deg P <= num_degree, deg Q <= den_degree through the data.

    Needs ``len(xs) >= num_degree + den_degree + 1``.  The interpolant is
    computed modulo word-size primes and lifted by rational reconstruction,
    which avoids the coefficient swell of Euclid over Q; the lifted result is
    then checked exactly at every sample point.  ``held_out`` pairs (x, y)
    are checked modulo the first prime, so a too-small degree bound fails
    fast, and exactly at the end.  Returns (P, Q) with Q(0) = 1
    when Q(0) != 0, else Q monic.  Raises :class:`ReconstructionError`.
    """
    xs = [Fraction(x) for x in xs]
    ys = [Fraction(y) for y in ys]
    if len(xs) < num_degree + den_degree + 1:
        raise ValueError("not enough interpolation points for the degree bounds")
    acc = None
    shape = None
    for p in word_primes(max_primes):
        try:
            rx = [to_residue(x, p) for x in xs]
            ry = [to_residue(y, p) for y in ys]
        except ZeroDivisionError:
            continue
        if len(set(rx)) < len(rx):
            continue
        P, Q = _cauchy_mod(rx, ry, num_degree, p)
        if len(Q) - 1 > den_degree:
            raise ReconstructionError(f"no rational function within degrees ({num_degree}, {den_degree})")
        if shape is None:
            for x, y in held_out:
                hx, hy = to_residue(Fraction(x), p), to_residue(Fraction(y), p)
                if _eval_mod(P, hx, p) != hy * _eval_mod(Q, hx, p) % p:
                    raise ReconstructionError("held-out points disagree")
        if shape is None or (len(P), len(Q)) > shape:
            # a larger shape means the earlier primes were unlucky
            shape = (len(P), len(Q))
            acc = MultiModular(len(P) + len(Q))
        elif (len(P), len(Q)) < shape:
            continue
        acc.add(p, P + Q)
        vals = acc.reconstruct()
        if vals is None:
            continue
        P = flint.fmpq_poly([_fq(v) for v in vals[: shape[0]]])
        Q = flint.fmpq_poly([_fq(v) for v in vals[shape[0]:]])
        pts = list(zip(xs, ys)) + [(Fraction(x), Fraction(y)) for x, y in held_out]
        if all(Q(_fq(x)) != 0 and P(_fq(x)) == _fq(y) * Q(_fq(x)) for x, y in pts):
            break
    else:
        raise ReconstructionError("modular reconstruction did not stabilise")
    c0 = Q.coeffs()[0]
    if c0 != 0:
        P, Q = P / c0, Q / c0
    return _from_flint(P), _from_flint(Q)


@dataclass(frozen=True)
class CurrentRational:
    """j(r) = P(r)/Q(r) with coprime integer polynomials, Q(0) > 0."""

    P: Polynomial
    Q: Polynomial
    geometry: Geometry

    def __call__(self, r):
        return self.P(r) / self.Q(r)

    def taylor(self, order: int) -> RationalSeries:
        return self.P.taylor_ratio(self.Q, order)

    def to_json(self) -> dict:
        return {
            "geometry": self.geometry.to_config(),
            "L": self.geometry.L,
            "P": [str(int(c)) for c in self.P.coeffs],
            "Q": [str(int(c)) for c in self.Q.coeffs],
        }


def _integer_pair(P: Polynomial, Q: Polynomial):
    m = reduce(lcm, (c.denominator for c in P.coeffs + Q.coeffs), 1)
    ip = [int(c * m) for c in P.coeffs]
    iq = [int(c * m) for c in Q.coeffs]
    g = reduce(gcd, ip + iq, 0)
    if iq[0] < 0:
        g = -g
    return Polynomial([c // g for c in ip]), Polynomial([c // g for c in iq])


def current_rational(g: Geometry, degree_bound: int | None = None, held_out: int = 5,
                     max_bound: int = 256, generator: AffineGenerator | None = None) -> CurrentRational:
    """Reconstruct the exact current of a small ring or interval."""
    if g.is_ring and g.L > MAX_RING_L:
        raise ValueError(f"exact rational current is limited to ring L <= {MAX_RING_L}")
    if not g.is_ring and g.L > MAX_INTERVAL_L:
        raise ValueError(f"exact rational current is limited to interval L <= {MAX_INTERVAL_L}")
    gen = build_generator(g) if generator is None else generator
    if degree_bound is None:
        known = KNOWN_RING_DEGREES if g.is_ring else KNOWN_INTERVAL_DEGREES
        degree_bound = known[g.L] + 1
    cache: dict[Fraction, Fraction] = {}

    def value(x):
        if x not in cache:
            cache[x] = exact_current(gen, x)
        return cache[x]

    D = degree_bound
    while D <= max_bound:
        n_pts = 2 * D + 1
        xs = [Fraction(i, D + 3) for i in range(1, n_pts + 1)]
        checks = [Fraction(2 * i + 1, 2 * (D + 3)) for i in range(n_pts, n_pts + held_out)]
        ys = [value(x) for x in xs]
        try:
            P, Q = cauchy_interpolate(xs, ys, D, D, held_out=[(x, value(x)) for x in checks])
        except ReconstructionError as exc:
            log.info("degree bound %d failed for %s: %s; doubling", D, g, exc)
            D *= 2
            continue
        P, Q = _integer_pair(P, Q)
        if P.coeffs[0] != 0:
            raise ReconstructionError("current does not vanish at r = 0")
        return CurrentRational(P, Q, g)
    raise ReconstructionError(f"no reconstruction with degree bound <= {max_bound}")


def in_window(z, window=NEAR_ORIGIN_WINDOW) -> bool:
    """Membership in a near-origin window.

    ``window`` is either ``("disc", radius)`` or ``("box", half_re, half_im)``.
    """
    kind = window[0]
    if kind == "disc":
        return abs(complex(z)) <= window[1] * (1 + 1e-12)
    if kind == "box":
        return abs(float(z.real)) <= window[1] and abs(float(z.imag)) <= window[2]
    raise ValueError(f"unknown window kind {kind!r}")


def denominator_zeros(cr: CurrentRational, precision_bits: int = 256, window=NEAR_ORIGIN_WINDOW):
    """All zeros of Q, sorted by modulus, and the subset inside ``window``."""
    zeros = sorted(poly_roots(cr.Q, precision_bits), key=lambda z: (abs(complex(z)), float(z.imag)))
    return zeros, [z for z in zeros if in_window(z, window)]
