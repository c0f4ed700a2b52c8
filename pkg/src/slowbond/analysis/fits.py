"""Transformed series of the current and the two least-squares fits."""

from __future__ import annotations

import mpmath
import numpy as np
from scipy.optimize import least_squares

from ..algebra.series import DEFAULT_PRECISION, FloatSeries, series_log, series_reciprocal
from ._common import FitReport, as_float_series

__all__ = [
    "DEFAULT_WINDOW",
    "reciprocal_coeffs",
    "fit_growth_model",
    "fit_reciprocal_growth",
    "x_series",
    "cosine_model",
    "fit_cosine",
    "coefficient_growth",
]

DEFAULT_WINDOW = (7, 16)
C_GRID = (0.05, 1.5, 0.005)
D_GRID = (0.0, 4.0, 0.02)


def _ks(window):
    lo, hi = window
    return np.arange(lo, hi + 1)


def reciprocal_coeffs(J, precision: int = DEFAULT_PRECISION) -> FloatSeries:
    """u_k: Taylor coefficients of 1/(1/4 - J(r))."""
    J = as_float_series(J, precision)
    with mpmath.workprec(J.precision):
        return series_reciprocal(mpmath.mpf(1) / 4 - J)


def _report(model, names, coef, y, fitted, window, converged=True):
    res = np.asarray(y, float) - np.asarray(fitted, float)
    dof = len(y) - len(names)
    rss = float(np.dot(res, res))
    std = float(np.sqrt(rss / dof)) if dof > 0 else float("nan")
    return FitReport(model, dict(zip(names, map(float, coef))), tuple(window), std, dof,
                     converged, res.tolist())


def fit_growth_model(k, y, window=None) -> FitReport:
    """Linear least squares y_k ~ A1 sqrt(k) + B1 log k + C1."""
    k = np.asarray(k, float)
    y = np.asarray(y, float)
    design = np.column_stack([np.sqrt(k), np.log(k), np.ones_like(k)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    window = window if window is not None else (int(k[0]), int(k[-1]))
    return _report("sqrt-log-const", ("A1", "B1", "C1"), coef, y, design @ coef, window)


def fit_reciprocal_growth(J, window=DEFAULT_WINDOW, precision: int = DEFAULT_PRECISION) -> FitReport:
    """Growth fit of u_k, the coefficients of 1/(1/4 - J).

    The fitted quantity is log u_k, so A1 estimates 2 sqrt(a) for a
    singularity exp(a/(1 - r)).
    """
    u = reciprocal_coeffs(J, precision)
    ks = _ks(window)
    if ks[-1] > u.order:
        raise ValueError(f"series of order {u.order} is too short for window {window}")
    vals = [u[k] for k in ks]
    bad = [int(k) for k, v in zip(ks, vals) if v <= 0]
    if bad:
        raise ValueError(f"non-positive u_k at k = {bad}; the log reading needs u_k > 0")
    with mpmath.workprec(u.precision):
        y = [float(mpmath.log(v)) for v in vals]
    rep = fit_growth_model(ks, y, window)
    rep.model = "log u_k ~ sqrt-log-const"
    return rep


def x_series(J, r0: float, order: int | None = None, precision: int = DEFAULT_PRECISION) -> FloatSeries:
    """Coefficients of X(r) = log[(r - r0)(1/4 - J(r))]."""
    J = as_float_series(J, precision)
    n = J.order if order is None else order
    with mpmath.workprec(J.precision):
        r0 = mpmath.mpf(r0)
        f = mpmath.mpf(1) / 4 - J
        g = FloatSeries([-r0, 1], J.precision, J.order) * f
        if g[0] <= 0:
            raise ValueError("(r - r0)(1/4 - J) needs a positive constant term (r0 < 0)")
        return series_log(g, n)


def cosine_model(k, A, B, C, D):
    return A + B * np.cos(C * (np.asarray(k, float) - D))


def _arange(lo, hi, step):
    n = int(np.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


def fit_cosine(x, window=DEFAULT_WINDOW, c_grid=C_GRID, d_grid=D_GRID) -> FitReport:
    """x(k) = A + B cos(C (k - D)) over ``window``.

    Every (C, D) node of the grid gets the exact linear solve for (A, B); the
    best node seeds a Levenberg-Marquardt refinement of all four parameters.
    """
    ks = _ks(window).astype(float)
    xs = x.coeffs if hasattr(x, "coeffs") else x
    y = np.array([float(xs[int(k)]) for k in ks])
    Cs = _arange(c_grid[0], c_grid[1], c_grid[2])
    Cs = Cs[Cs > c_grid[0]] if c_grid[0] > 0 else Cs
    Ds = _arange(d_grid[0], d_grid[1] - d_grid[2], d_grid[2])
    # basis cos(C(k - D)) for every node at once: shape (nC, nD, nk)
    phase = Cs[:, None, None] * (ks[None, None, :] - Ds[None, :, None])
    cosv = np.cos(phase)
    n = len(ks)
    s1 = cosv.sum(-1)
    s2 = (cosv * cosv).sum(-1)
    sy = y.sum()
    sxy = (cosv * y).sum(-1)
    det = n * s2 - s1 * s1
    ok = np.abs(det) > 1e-12
    B = np.where(ok, (n * sxy - s1 * sy) / np.where(ok, det, 1), 0.0)
    A = np.where(ok, (sy - B * s1) / n, sy / n)
    rss = ((y - A[..., None] - B[..., None] * cosv) ** 2).sum(-1)
    rss = np.where(ok, rss, np.inf)
    i, j = np.unravel_index(int(np.argmin(rss)), rss.shape)
    start = np.array([A[i, j], B[i, j], Cs[i], Ds[j]])

    def resid(p):
        return cosine_model(ks, *p) - y

    sol = least_squares(resid, start, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    p = sol.x if sol.success else start
    if sol.success and np.sum(resid(sol.x) ** 2) > rss[i, j]:
        p = start
    A_, B_, C_, D_ = p
    # canonical form: B > 0, C > 0, D reduced to one period
    if C_ < 0:
        C_, D_ = -C_, -D_
    if B_ < 0:
        B_, D_ = -B_, D_ + np.pi / C_
    D_ = float(np.mod(D_, 2 * np.pi / C_))
    params = (A_, B_, C_, D_)
    return _report("A + B cos(C (k - D))", ("A", "B", "C", "D"), params, y,
                   cosine_model(ks, *params), window, bool(sol.success))


def coefficient_growth(J, r0: float, window=(6, 16)) -> dict:
    """Coefficients w_k of (r - r0) J_n(r) over ``window`` and growth ratios.

    ``max_ratio`` is the largest |w_{k+1} / w_k|; it blows up wherever w_k
    passes close to zero.  ``max_envelope_ratio`` uses the running maximum
    of |w_k| instead, which only grows if the coefficients do.
    """
    c = [float(v) for v in as_float_series(J).coeffs]
    w = [-r0 * c[0]] + [c[k - 1] - r0 * c[k] for k in range(1, len(c))]
    ks = list(range(window[0], window[1] + 1))
    vals = [w[k] for k in ks]
    mags = np.abs(vals)
    ratios = [mags[i + 1] / mags[i] for i in range(len(mags) - 1) if mags[i] != 0]
    env = np.maximum.accumulate(mags)
    return {
        "k": ks,
        "coefficients": vals,
        "max_abs": float(mags.max()),
        "max_ratio": float(max(ratios)),
        "max_envelope_ratio": float(np.max(env[1:] / env[:-1])),
    }
