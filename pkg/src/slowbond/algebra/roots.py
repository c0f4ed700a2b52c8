"""All complex roots of a rational polynomial (Aberth-Ehrlich + mp polishing).

A double-precision Aberth sweep on a rescaled copy of the polynomial gives
starting values; the same iteration then runs in mpmath at the requested
precision until every correction is negligible.  Near-multiple roots are
reported as a cluster, not separated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np

from .._jit import USE_NUMBA, njit
from .poly import Polynomial

__all__ = ["poly_roots", "RootFindingError", "RootResult", "match_roots"]


class RootFindingError(RuntimeError):
    def __init__(self, message, roots=None):
        super().__init__(message)
        self.roots = roots


@njit
def _aberth_numba(c, z, tol, max_iter):
    # c: coefficients, highest degree first
    n = z.shape[0]
    deg = c.shape[0] - 1
    done = np.zeros(n, dtype=np.bool_)
    it = 0
    for it in range(max_iter):
        n_done = 0
        for i in range(n):
            if done[i]:
                n_done += 1
                continue
            zi = z[i]
            p = c[0]
            dp = 0j
            for k in range(1, deg + 1):
                dp = dp * zi + p
                p = p * zi + c[k]
            if p == 0:
                done[i] = True
                continue
            ratio = dp / p
            s = 0j
            for j in range(n):
                if j != i:
                    s += 1.0 / (zi - z[j])
            w = 1.0 / (ratio - s)
            z[i] = zi - w
            if abs(w) <= tol * max(abs(z[i]), 1e-300):
                done[i] = True
        if n_done == n:
            break
    return z, done, it


def _aberth_numpy(c, z, tol, max_iter):
    n = z.shape[0]
    done = np.zeros(n, dtype=bool)
    eye = np.eye(n, dtype=bool)
    it = 0
    for it in range(max_iter):
        if done.all():
            break
        p = np.full(n, c[0], dtype=complex)
        dp = np.zeros(n, dtype=complex)
        for ck in c[1:]:
            dp = dp * z + p
            p = p * z + ck
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        inv = 1.0 / diff
        inv[eye] = 0.0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = 1.0 / (dp / p - s)
        w[p == 0] = 0.0
        w[done] = 0.0
        z = z - w
        done |= np.abs(w) <= tol * np.maximum(np.abs(z), 1e-300)
    return z, done, it


def aberth_float(c, z0, tol=1e-14, max_iter=500, use_numba=None):
    """Run the double-precision Aberth iteration.  ``c`` is highest-degree first."""
    c = np.ascontiguousarray(c, dtype=np.complex128)
    z = np.array(z0, dtype=np.complex128)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        return _aberth_numba(c, z, tol, max_iter)
    return _aberth_numpy(c, z, tol, max_iter)


@dataclass
class RootResult:
    roots: list
    clusters: list = field(default_factory=list)
    max_residual: float = 0.0


def _float_start(p: Polynomial, n: int):
    """Scaled float coefficients and initial guesses on a circle."""
    with mpmath.workprec(128):
        a = [mpmath.mpf(c.numerator) / c.denominator for c in p.coeffs]
        rho = (abs(a[0]) / abs(a[-1])) ** (mpmath.mpf(1) / n)
        scaled = [a[k] * rho**k for k in range(n + 1)]
        big = max(abs(x) for x in scaled)
        c = np.array([complex(float(x / big)) for x in reversed(scaled)])
    ang = 2 * np.pi * np.arange(n) / n + 0.4
    z0 = np.exp(1j * ang)
    return c, float(rho), z0


def _cancellation_bits(p: Polynomial, rho: float) -> int:
    with mpmath.workprec(64):
        terms = [abs(mpmath.mpf(c.numerator) / c.denominator) * mpmath.mpf(rho) ** k
                 for k, c in enumerate(p.coeffs) if c != 0]
        ends = min(terms[0], terms[-1])
        return max(0, int(mpmath.ceil(mpmath.log(max(terms) / ends, 2))))


def _mp_aberth(coeffs, z, prec, max_iter=200):
    """mpmath Aberth sweeps until corrections fall below 2**(-0.8*prec)."""
    n = len(z)
    tol = mpmath.mpf(2) ** (-int(0.8 * prec))
    done = [False] * n
    for _ in range(max_iter):
        if all(done):
            break
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            p = coeffs[0]
            dp = mpmath.mpc(0)
            for ck in coeffs[1:]:
                dp = dp * zi + p
                p = p * zi + ck
            if p == 0:
                done[i] = True
                continue
            s = mpmath.fsum(1 / (zi - z[j]) for j in range(n) if j != i)
            w = 1 / (dp / p - s)
            z[i] = zi - w
            if abs(w) <= tol * max(abs(z[i]), tol):
                done[i] = True
    return z, all(done)


def poly_roots(p: Polynomial, precision_bits: int = 256, max_iter: int = 500,
               full: bool = False):
    """Roots of ``p`` as mpmath complex numbers, sorted by (re, im).

    Raises :class:`RootFindingError` (carrying the unconverged set) if the
    iteration cap is hit or a root fails the residual test
    ``|p(z)| / ||p|| < 2**(-precision_bits/2)``.
    """
    if p.degree < 1:
        raise ValueError("poly_roots needs degree >= 1")
    # zero roots first
    m = 0
    while p.coeffs[m] == 0:
        m += 1
    q = Polynomial(p.coeffs[m:])
    n = q.degree
    roots = []
    if n >= 1:
        c, rho, z0 = _float_start(q, n)
        zf, _, _ = aberth_float(c, z0, max_iter=max_iter)
        # guard bits against cancellation among the rescaled terms
        guard = _cancellation_bits(q, rho)
        with mpmath.workprec(precision_bits + 32 + guard):
            coeffs = [mpmath.mpf(x.numerator) / x.denominator for x in reversed(q.coeffs)]
            lead = coeffs[0]
            coeffs = [x / lead for x in coeffs]
            zs = [mpmath.mpc(complex(v)) * rho for v in zf]
            zs, ok = _mp_aberth(coeffs, zs, precision_bits + guard, max_iter)
            if not ok:
                raise RootFindingError(f"Aberth iteration did not converge (degree {n})", zs)
            roots = zs
    with mpmath.workprec(precision_bits + 32):
        roots = [mpmath.mpc(0)] * m + list(roots)
        norm = mpmath.sqrt(mpmath.fsum((mpmath.mpf(c.numerator) / c.denominator) ** 2 for c in p.coeffs))
        bound = mpmath.mpf(2) ** (-precision_bits / 2)
        worst = mpmath.mpf(0)
        for z in roots:
            res = abs(p.eval_mp(z, precision_bits + 32)) / norm
            worst = max(worst, res)
        if worst >= bound:
            raise RootFindingError(f"residual {mpmath.nstr(worst, 5)} above 2^(-{precision_bits}/2)", roots)
        roots.sort(key=lambda z: (float(z.real), float(z.imag)))
        clusters = _clusters(roots, precision_bits)
    with mpmath.workprec(precision_bits):
        roots = [mpmath.mpc(z) for z in roots]
    if full:
        return RootResult(roots, clusters, float(worst))
    return roots


def _clusters(roots, precision_bits):
    tol = 2.0 ** (-precision_bits / 4)
    out = []
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < tol * max(1.0, float(abs(roots[i]))):
                out.append((i, j))
    return out


def match_roots(a, b, tol) -> bool:
    """Greedy multiset comparison of two root lists within ``tol``."""
    if len(a) != len(b):
        return False
    remaining = list(b)
    for z in a:
        dists = [abs(z - w) for w in remaining]
        k = int(np.argmin([float(d) for d in dists]))
        if dists[k] > tol:
            return False
        remaining.pop(k)
    return True


def roots_to_complex(roots) -> np.ndarray:
    return np.array([complex(z) for z in roots])

