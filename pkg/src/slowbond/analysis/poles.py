"""Locating the real pole r0 < 0 of the current series by two methods."""

from __future__ import annotations

import mpmath
import numpy as np

from ..algebra.poly import Polynomial
from ..algebra.roots import poly_roots
from ..algebra.series import DEFAULT_PRECISION, mobius_compose, mobius_r_of_u, series_reciprocal
from ._common import PoleEstimate, as_float_series, mpf_to_fraction

__all__ = ["SECOND_DIFFERENCE", "MOBIUS_ROOT", "oscillation", "pole_method1", "pole_method2", "default_r0_grid"]

SECOND_DIFFERENCE = "SecondDifference"
MOBIUS_ROOT = "MobiusRoot"
FIT_WINDOW = (8, 14)


def default_r0_grid(lo: float = -1.55, hi: float = -1.53, step: float = 1e-4) -> np.ndarray:
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def _coeffs(J) -> np.ndarray:
    return np.array([float(c) for c in as_float_series(J).coeffs])


def oscillation(J, r0: float, window=FIT_WINDOW):
    """Detrended second differences of the coefficients of (r - r0) J(r).

    Returns (score, residuals) where residuals are w^_k - w~(k) over the
    window and score is their max modulus.
    """
    c = _coeffs(J)
    w = np.concatenate([[-r0 * c[0]], c[:-1] - r0 * c[1:]])
    wh = w[2:] - 2 * w[1:-1] + w[:-2]
    lo, hi = window
    if hi >= len(wh):
        raise ValueError(f"series too short for the window {window}")
    k = np.arange(lo, hi + 1, dtype=float)
    y = wh[lo:hi + 1]
    design = np.column_stack([k, np.ones_like(k)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    res = y - design @ coef
    return float(np.max(np.abs(res))), res


def pole_method1(J, r0_grid=None, window=FIT_WINDOW) -> PoleEstimate:
    """Grid minimiser of the oscillation score.

    Flagged low-confidence unless the residual pattern changes sign across
    the minimiser (the two grid neighbours have anticorrelated patterns).
    """
    grid = default_r0_grid() if r0_grid is None else np.asarray(list(r0_grid), float)
    if len(J) < window[1] + 3:
        raise ValueError("pole_method1 needs the series through order window[1] + 2")
    scores = np.array([oscillation(J, g, window)[0] for g in grid])
    i = int(np.argmin(scores))
    step = float(np.min(np.diff(np.sort(grid)))) if len(grid) > 1 else 1e-4
    flagged = i in (0, len(grid) - 1)
    if not flagged:
        left = oscillation(J, grid[i - 1], window)[1]
        right = oscillation(J, grid[i + 1], window)[1]
        flagged = float(np.dot(left, right)) >= 0 and scores[i] > 0
    return PoleEstimate(
        float(grid[i]), SECOND_DIFFERENCE, step, flagged,
        {"score": float(scores[i]), "grid": [float(grid[0]), float(grid[-1]), len(grid)]},
    )


def _mobius_root(V, r1, order, precision):
    with mpmath.workprec(precision):
        Vh = mobius_compose(V, mpmath.mpf(r1), order)
        P = Polynomial([mpf_to_fraction(c) for c in Vh.coeffs])
    roots = poly_roots(P, precision // 2)
    with mpmath.workprec(precision):
        mapped = [mobius_r_of_u(z, mpmath.mpf(r1)) for z in roots]
    # the zero of V next to r1 is the one whose image is closest to r1
    j = min(range(len(roots)), key=lambda i: abs(complex(mapped[i]) - r1))
    return roots, j, mapped[j]


def pole_method2(J, r1: float = -1.5, window: float = 0.25, precision: int = DEFAULT_PRECISION) -> PoleEstimate:
    """Zero of V = 1/(1/4 - J) after the fractional linear map sending r1 to u = 1.

    The zero u0 of the u-series polynomial whose image r(u0) lies closest to
    r1 is selected; it must satisfy |u0 - 1| < ``window``.  The uncertainty
    is the change in r0 when the last available coefficient is dropped.
    """
    if not -3 <= r1 <= -1:
        raise ValueError("r1 must lie in [-3, -1]")
    J = as_float_series(J, precision)
    with mpmath.workprec(precision):
        V = series_reciprocal(mpmath.mpf(1) / 4 - J)
    n = V.order
    roots, j, r0 = _mobius_root(V, r1, n, precision)
    u0 = roots[j]
    if abs(complex(u0) - 1) >= window:
        raise ArithmeticError(f"no zero of the transformed series within |u - 1| < {window} (nearest {complex(u0)})")
    _, _, r0_short = _mobius_root(V, r1, n - 1, precision)
    others = [abs(complex(z)) for i, z in enumerate(roots) if i != j]
    unc = max(abs(float((r0 - r0_short).real)), 1e-12)
    return PoleEstimate(
        float(mpmath.re(r0)), MOBIUS_ROOT, unc, abs(float(mpmath.im(r0))) > 1e-8,
        {"r1": r1, "u0": [float(mpmath.re(u0)), float(mpmath.im(u0))],
         "min_other_distance": min(others) if others else float("inf")},
    )
