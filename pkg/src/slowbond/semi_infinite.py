"""The solvable semi-infinite model: Q_L polynomials, currents, the limit law.

The finite current is j_L(r) = r Q_{L-1}(r) / Q_L(r).  Its zeros of Q_L
accumulate on the curve Gamma = {|r(1-r)| = 1/4, Re r <= 1/2}, the left lobe
of a lemniscate; the interior of that lobe is Omega_1, everything else
Omega_2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import mpmath
import numpy as np

from .algebra.poly import Polynomial
from .algebra.roots import poly_roots
from .algebra.series import RationalSeries

__all__ = [
    "OMEGA1",
    "OMEGA2",
    "OnCurveError",
    "SemiInfiniteCurrent",
    "q_explicit",
    "q_recursive",
    "current_series",
    "current_value",
    "limit_current",
    "region",
    "gamma_curve",
    "distance_to_gamma",
    "ScalingReport",
    "zero_scaling_report",
]

OMEGA1 = "Omega1"
OMEGA2 = "Omega2"
GAMMA_TOL = 1e-12


class OnCurveError(ValueError):
    pass


def q_explicit(L: int) -> Polynomial:
    """Q_L(r) = sum_j (L+1-j)/(L+1) C(L+j, L) r^j."""
    if L < 0:
        raise ValueError("L must be non-negative")
    return Polynomial([Fraction((L + 1 - j) * comb(L + j, L), L + 1) for j in range(L + 1)])


@lru_cache(maxsize=None)
def _q_rec_coeffs(L: int) -> tuple:
    if L == 0:
        return (Fraction(1),)
    # Q_{L-1} = (1 - r) Q_L + Cat_L r^{L+1}  =>  Q_L = (Q_{L-1} - Cat_L r^{L+1}) / (1 - r)
    prev = list(_q_rec_coeffs(L - 1)) + [Fraction(0)] * 2
    prev[L + 1] -= Fraction(comb(2 * L, L), L + 1)
    # exact division by (1 - r): q_k = sum_{i<=k} prev_i
    out, acc = [], Fraction(0)
    for k in range(L + 1):
        acc += prev[k]
        out.append(acc)
    if acc + prev[L + 1] != 0:
        raise ArithmeticError("recursion left a remainder on division by 1 - r")
    return tuple(out)


def q_recursive(L: int) -> Polynomial:
    """Q_L built upward from Q_0 = 1 through the recursion relating Q_{L-1} and Q_L."""
    if L < 0:
        raise ValueError("L must be non-negative")
    return Polynomial(_q_rec_coeffs(L))


@dataclass(frozen=True)
class SemiInfiniteCurrent:
    L: int
    Q_L: Polynomial = field(repr=False)
    Q_prev: Polynomial = field(repr=False)

    @classmethod
    def of(cls, L: int) -> "SemiInfiniteCurrent":
        if L < 1:
            raise ValueError("L must be at least 1")
        return cls(L, q_explicit(L), q_explicit(L - 1))

    def __call__(self, r, precision: int = 256):
        return current_value(self.L, r, precision)


def current_series(L: int, order: int) -> RationalSeries:
    """Taylor series of r Q_{L-1}(r) / Q_L(r) through r**order."""
    if L < 1:
        raise ValueError("L must be at least 1")
    if order < 0:
        raise ValueError("order must be non-negative")
    num = Polynomial([0]) if order == 0 else Polynomial([0] + list(q_explicit(L - 1).coeffs))
    return num.taylor_ratio(q_explicit(L), order)


def current_value(L: int, r, precision: int = 256):
    """j_L(r) at real or complex r, Horner in multiprecision on exact coefficients."""
    with mpmath.workprec(precision):
        z = mpmath.mpmathify(r)
        num = q_explicit(L - 1).eval_mp(z, precision)
        den = q_explicit(L).eval_mp(z, precision)
        return z * num / den


def region(r, tol: float = GAMMA_TOL) -> str:
    """OMEGA1 or OMEGA2; raises :class:`OnCurveError` within ``tol`` of Gamma."""
    r = complex(r)
    m = abs(r * (1 - r))
    left = r.real < 0.5
    if left and abs(m - 0.25) <= tol:
        raise OnCurveError(f"r = {r} lies on Gamma (|r(1-r)| - 1/4 = {m - 0.25:.3e})")
    if abs(r - 0.5) <= tol:
        raise OnCurveError("r = 1/2 lies on Gamma")
    return OMEGA1 if (left and m < 0.25) else OMEGA2


def limit_current(r, tol: float = GAMMA_TOL):
    """(lim_L j_L(r), region tag): r(1-r) inside Gamma, 1/4 outside."""
    tag = region(r, tol)
    if tag == OMEGA1:
        return r * (1 - r), tag
    return 0.25, tag


def _gamma_point(theta):
    return (1 - cmath.sqrt(1 - cmath.exp(1j * theta))) / 2


def gamma_curve(n: int) -> np.ndarray:
    """n points of Gamma, r(t) = (1 - sqrt(1 - e^{it}))/2 with t uniform in (0, 2 pi)."""
    if n < 3:
        raise ValueError("n must be at least 3")
    theta = 2 * np.pi * (np.arange(n) + 0.5) / n
    return (1 - np.sqrt(1 - np.exp(1j * theta))) / 2


def distance_to_gamma(z, n_samples: int = 10_000) -> float:
    """Euclidean distance from z to Gamma: dense sampling, then golden-section refinement."""
    z = complex(z)
    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    pts = (1 - np.sqrt(1 - np.exp(1j * theta))) / 2
    k = int(np.argmin(np.abs(pts - z)))
    h = 2 * np.pi / n_samples
    lo, hi = theta[k] - h, theta[k] + h
    f = lambda t: abs(_gamma_point(t) - z)  # noqa: E731
    g = (math.sqrt(5) - 1) / 2
    a, b = lo + (1 - g) * (hi - lo), lo + g * (hi - lo)
    fa, fb = f(a), f(b)
    for _ in range(80):
        if fa < fb:
            hi, b, fb = b, a, fa
            a = lo + (1 - g) * (hi - lo)
            fa = f(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + g * (hi - lo)
            fb = f(b)
        if hi - lo < 1e-15:
            break
    return min(fa, fb, float(np.abs(pts[k] - z)))


@dataclass
class ScalingReport:
    """Per-L zero distances and fitted exponents.

    ``p`` is fitted to the median distance of the zeros from Gamma; the max
    distance is dominated by the pair approaching r = 1/2, which scales like
    that pair (``p_max`` ~ ``q``), so it is reported separately.
    """

    L: list
    median_distance: list
    max_distance: list
    right_distance: list
    p: float
    p_max: float
    q: float
    roots: dict = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "median_distance_to_gamma": self.median_distance,
            "max_distance_to_gamma": self.max_distance,
            "rightmost_distance_to_half": self.right_distance,
            "p": self.p,
            "p_max": self.p_max,
            "q": self.q,
        }


def _slope(L, d):
    x, y = np.log(np.asarray(L, float)), np.log(np.asarray(d, float))
    return float(-np.polyfit(x, y, 1)[0])


def zero_scaling_report(L_list, precision_bits: int = 256) -> ScalingReport:
    """Distances of the zeros of Q_L to Gamma and of the rightmost pair to 1/2.

    Exponents come from log-log regression of dist ~ L^-p and
    right_dist ~ L^-q.
    """
    L_list = list(L_list)
    if any(L < 5 for L in L_list):
        raise ValueError("zero_scaling_report needs L >= 5")
    dmed, dmax, dright, roots = [], [], [], {}
    for L in L_list:
        zs = [complex(z) for z in poly_roots(q_explicit(L), precision_bits)]
        roots[L] = zs
        d = [distance_to_gamma(z) for z in zs]
        dmed.append(float(np.median(d)))
        dmax.append(max(d))
        right = max(zs, key=lambda z: (z.real, abs(z.imag)))
        dright.append(abs(right - 0.5))
    nan = float("nan")
    many = len(L_list) > 1
    return ScalingReport(
        L_list, dmed, dmax, dright,
        p=_slope(L_list, dmed) if many else nan,
        p_max=_slope(L_list, dmax) if many else nan,
        q=_slope(L_list, dright) if many else nan,
        roots=roots,
    )
