"""Taylor coefficients of exp(a/(1 - r)) and their large-k behaviour."""

from __future__ import annotations

from fractions import Fraction

import mpmath

from ..algebra.series import DEFAULT_PRECISION

__all__ = ["exp_singular_coeffs", "asymptotic_check", "mean_field_current"]


def exp_singular_coeffs(a, n: int, rational: bool = False, precision: int = DEFAULT_PRECISION):
    """b_0..b_n of exp(a/(1 - r)) from (1 - r)^2 f' = a f.

    The recurrence is (k+1) b_{k+1} = (2k + a) b_k - (k-1) b_{k-1}.  With
    ``rational=True`` the factor e^a is dropped (b_0 = 1) and a rational ``a``
    gives exact Fractions.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if rational:
        a = Fraction(a)
        if a <= 0:
            raise ValueError("a must be positive")
        b = [Fraction(1), a]
        for k in range(1, n):
            b.append(((2 * k + a) * b[k] - (k - 1) * b[k - 1]) / (k + 1))
        return b
    with mpmath.workprec(precision):
        a = mpmath.mpf(a)
        if a <= 0:
            raise ValueError("a must be positive")
        e = mpmath.exp(a)
        b = [e, a * e]
        for k in range(1, n):
            b.append(((2 * k + a) * b[k] - (k - 1) * b[k - 1]) / (k + 1))
        return b


def asymptotic_check(a, k_list, precision: int = 128) -> dict:
    """rho_k = b_k / (k^(-3/4) exp(2 sqrt(a k))) at each k in ``k_list``.

    Runs the recurrence once up to max(k_list) in multiprecision (the
    exponent range of mpf makes overflow a non-issue).  ``drift`` is the
    relative change of rho between the two largest k.
    """
    ks = sorted(int(k) for k in k_list)
    if ks[-1] > 10**6:
        raise ValueError("k above 10**6 is not supported")
    want = set(ks)
    rho = {}
    with mpmath.workprec(precision):
        a = mpmath.mpf(a)
        prev, cur = mpmath.mpf(0), mpmath.exp(a)  # b_{-1}, b_0
        for k in range(0, ks[-1] + 1):
            if k in want:
                rho[k] = cur / (mpmath.mpf(k) ** (-0.75) * mpmath.exp(2 * mpmath.sqrt(a * k))) if k else None
            prev, cur = cur, ((2 * k + a) * cur - (k - 1) * prev) / (k + 1)
        vals = {k: float(v) for k, v in rho.items() if v is not None}
    drift = float("nan")
    if len(ks) >= 2 and ks[-2] > 0:
        drift = abs(vals[ks[-1]] / vals[ks[-2]] - 1)
    return {"a": float(a), "k": ks, "rho": [vals.get(k) for k in ks], "drift": drift}


def mean_field_current(r: float) -> float:
    """r/(1+r)^2 below the mean-field threshold r = 1, 1/4 above."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return r / (1 + r) ** 2 if r <= 1 else 0.25
