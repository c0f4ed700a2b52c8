"""The closed-form approximant K(r) = 1/4 - exp(Y(r)) / (r - r0) and its |K| = 1/4 curve."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from ..algebra.series import DEFAULT_PRECISION, FloatSeries, series_exp
from ._common import FitReport

__all__ = ["KApproximant", "k_approximant", "x_hat", "gamma_hat_contour", "real_crossings"]

DEFAULT_WINDOW = (-1.2, 0.6, -1.2, 1.2)


def x_hat(r, A, B, C, D):
    """Function whose Taylor coefficients are exactly A + B cos(C (k - D))."""
    cos = np.cos if isinstance(r, (np.ndarray, float, complex, int)) else mpmath.cos
    return A / (1 - r) + B * (cos(C * D) - r * cos(C * (D + 1))) / (1 - 2 * r * cos(C) + r * r)


@dataclass
class KApproximant:
    A: float
    B: float
    C: float
    D: float
    r0: float
    correction: tuple  # x_k - x(k), k = 0..n
    precision: int = DEFAULT_PRECISION

    @property
    def n(self) -> int:
        return len(self.correction) - 1

    def model(self, k):
        A, B, C, D = (mpmath.mpf(v) for v in (self.A, self.B, self.C, self.D))
        return A + B * mpmath.cos(C * (k - D))

    def y_coeffs(self, order: int):
        with mpmath.workprec(self.precision):
            out = []
            for k in range(order + 1):
                v = self.model(k)
                if k <= self.n:
                    v += self.correction[k]
                out.append(v)
            return out

    def coeffs(self, order: int = 20):
        """Taylor coefficients of K through r**order."""
        with mpmath.workprec(self.precision):
            ey = series_exp(FloatSeries(self.y_coeffs(order), self.precision))
            r0 = mpmath.mpf(self.r0)
            # 1/(r - r0) = -sum r^k / r0^(k+1)
            inv = FloatSeries([-1 / r0 ** (k + 1) for k in range(order + 1)], self.precision)
            prod = ey * inv
            return [(mpmath.mpf(1) / 4 if k == 0 else 0) - prod[k] for k in range(order + 1)]

    def __call__(self, r):
        """K at real or complex r (multiprecision)."""
        with mpmath.workprec(self.precision):
            z = mpmath.mpmathify(r)
            y = x_hat(z, *map(mpmath.mpf, (self.A, self.B, self.C, self.D)))
            y += mpmath.polyval(list(reversed(self.correction)), z)
            return mpmath.mpf(1) / 4 - mpmath.exp(y) / (z - self.r0)

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        """Vectorised double-precision K for grids."""
        r = np.asarray(r, complex)
        corr = np.array([float(c) for c in reversed(self.correction)])
        y = x_hat(r, self.A, self.B, self.C, self.D) + np.polyval(corr, r)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return 0.25 - np.exp(y) / (r - self.r0)


def k_approximant(x: FloatSeries, fit: FitReport, r0: float, precision: int = DEFAULT_PRECISION) -> KApproximant:
    """Build K from the x_k coefficients and a cosine fit of them."""
    if set(fit.params) != {"A", "B", "C", "D"}:
        raise ValueError("k_approximant needs a cosine FitReport")
    p = fit.params
    with mpmath.workprec(precision):
        A, B, C, D = (mpmath.mpf(p[n]) for n in "ABCD")
        model = lambda k: A + B * mpmath.cos(C * (k - D))  # noqa: E731
        corr = tuple(mpmath.mpf(x[k]) - model(k) for k in range(x.order + 1))
    return KApproximant(p["A"], p["B"], p["C"], p["D"], float(r0), corr, precision)


def _bisect(f, a, b, fa, tol=1e-13, max_iter=200):
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0 or abs(b - a) < tol:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def real_crossings(K: KApproximant, lo: float = -1.0, hi: float = 0.0, n: int = 2001):
    """Real r in (lo, hi) with |K(r)| = 1/4, by sampling plus bisection."""
    xs = np.linspace(lo, hi, n)[1:-1]
    f = np.abs(K.evaluate(xs)) - 0.25
    out = []
    g = lambda t: float(abs(K.evaluate(np.array([t]))[0]) - 0.25)  # noqa: E731
    for i in np.flatnonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0):
        out.append(_bisect(g, xs[i], xs[i + 1], f[i]))
    return out


def gamma_hat_contour(K: KApproximant, window=DEFAULT_WINDOW, n: int = 200):
    """Curves |K(r)| = 1/4 inside ``window`` = (re_lo, re_hi, im_lo, im_hi).

    Marching squares on an n x n grid; every edge crossing is refined by
    bisection along its grid edge.  Returns a list of polylines (complex
    arrays); closed loops repeat their first point.
    """
    x0, x1, y0, y1 = window
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    Z = xs[:, None] + 1j * ys[None, :]
    F = np.abs(K.evaluate(Z)) - 0.25
    F = np.where(np.isfinite(F), F, 1e300)
    pos = F > 0

    def g(z):
        v = abs(K.evaluate(np.array([z]))[0]) - 0.25
        return float(v) if np.isfinite(v) else 1e300

    cache = {}

    def crossing(edge):
        if edge not in cache:
            kind, i, j = edge
            a = Z[i, j]
            b = Z[i + 1, j] if kind == "h" else Z[i, j + 1]
            t = _bisect(lambda s: g(a + s * (b - a)), 0.0, 1.0, F[i, j])
            cache[edge] = a + t * (b - a)
        return cache[edge]

    def cut(edge):
        kind, i, j = edge
        other = pos[i + 1, j] if kind == "h" else pos[i, j + 1]
        return pos[i, j] != other

    links: dict = {}

    def link(e1, e2):
        links.setdefault(e1, []).append(e2)
        links.setdefault(e2, []).append(e1)

    for i in range(n - 1):
        for j in range(n - 1):
            edges = [("h", i, j), ("v", i + 1, j), ("h", i, j + 1), ("v", i, j)]
            hit = [e for e in edges if cut(e)]
            if len(hit) == 2:
                link(*hit)
            elif len(hit) == 4:
                centre = g(Z[i, j] + 0.5 * ((xs[1] - xs[0]) + 1j * (ys[1] - ys[0])))
                # pair edges so the centre's sign region stays connected
                if (centre > 0) == pos[i, j]:
                    link(hit[0], hit[1])
                    link(hit[2], hit[3])
                else:
                    link(hit[3], hit[0])
                    link(hit[1], hit[2])

    seen = set()
    lines = []
    ends = [e for e, nb in links.items() if len(nb) == 1]
    for start in ends + list(links):
        if start in seen:
            continue
        path = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [e for e in links[cur] if e != prev and (e not in seen or (e == start and len(path) > 2))]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            path.append(cur)
            if cur == start:
                break
            seen.add(cur)
        lines.append(np.array([crossing(e) for e in path]))
    if not lines:
        raise ValueError("no |K| = 1/4 contour inside the window")
    return lines
