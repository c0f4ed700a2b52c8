"""Exact expansion of the stationary state in powers of the slow-bond rate r.

Writing P(eta) = sum_k p_k(eta) r^k, the null-vector condition
(M0 + r M1) P = 0 splits into M0 p_k = -M1 p_{k-1}.  M0 is triangular in
the potential order of :mod:`slowbond.model`, with the step configuration as
its only absorbing state, so each p_k follows by one back-substitution sweep:

    p_k(eta) = [sum_{zeta -> eta} rate * p_k(zeta) + (M1 p_{k-1})(eta)] / exit0(eta)

for every eta other than the step configuration, whose value then comes from
sum_eta p_k(eta) = 0 (k >= 1).

Two routes produce the same numbers:

* ``expand`` keeps exact gmpy2 rationals throughout (the reference route);
* ``modular_coefficients`` runs the sweep modulo word-size primes in a
  numba kernel (or a level-vectorised numpy fallback) and recovers the
  observables by CRT and rational reconstruction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpq

from ._jit import USE_NUMBA, njit
from .algebra.rational import as_fraction, format_rational, truncate_decimal
from .model import BLOCK, BULK, ENTRY, EXIT, AffineGenerator, Geometry, build_generator
from .modular import MultiModular, to_residue, word_primes

log = logging.getLogger(__name__)

__all__ = [
    "SteadyStateExpansion",
    "CoefficientTable",
    "ResidualError",
    "expand",
    "current_coeffs",
    "density_coeffs",
    "validated_order",
    "modular_coefficients",
    "coefficient_table",
]


class ResidualError(AssertionError):
    pass


@dataclass
class SteadyStateExpansion:
    """Result of :func:`expand`.

    ``p`` holds the exact state vectors p_0..p_order when requested with
    ``keep_vectors=True``; the observables ``c`` (current, c_0..c_order) and
    ``d`` (density per site, orders 0..order) are always filled.
    """

    geometry: Geometry
    order: int
    c: list
    d: dict
    p: list | None = None
    generator: AffineGenerator | None = field(default=None, repr=False)


@dataclass
class CoefficientTable:
    geometry: Geometry
    c: list
    d: dict
    validated_order: int
    density_validated: dict

    def flagged(self) -> list[int]:
        """Current orders beyond the geometry-independent range."""
        return [k for k in range(len(self.c)) if k > self.validated_order]

    def to_json(self, digits: int = 20) -> dict:
        return {
            "geometry": self.geometry.to_config(),
            "order": len(self.c) - 1,
            "validated_order": self.validated_order,
            "c": [
                {"k": k, "exact": format_rational(v), "decimal": truncate_decimal(v, digits),
                 "geometry_dependent": k > self.validated_order}
                for k, v in enumerate(self.c)
            ],
            "d": {
                str(i): [
                    {"k": k, "exact": format_rational(v), "decimal": truncate_decimal(v, digits),
                     "geometry_dependent": k > self.density_validated[i]}
                    for k, v in enumerate(vals)
                ]
                for i, vals in self.d.items()
            },
        }


# -- validated orders ---------------------------------------------------------


def validated_order(g: Geometry, j: int = 1, observable: str = "current") -> int:
    """Highest order whose coefficient is independent of L (and of alpha, beta).

    ``observable="local"`` is a function of the 2j sites -j+1..j; its
    coefficients are L-independent through L - j, one more on the interval
    with alpha = beta = 1.  The current is r times the j = 1 observable
    eta_0 (1 - eta_1), which shifts its range up by one order.
    """
    if j < 1:
        raise ValueError("observable half-width must be >= 1")
    bonus = 1 if (not g.is_ring and g.alpha == 1 and g.beta == 1) else 0
    if observable == "current":
        return g.L + bonus
    if observable != "local":
        raise ValueError(f"unknown observable kind {observable!r}")
    return g.L - j + bonus


# -- exact route --------------------------------------------------------------


class _Plan:
    """Per-state incoming lists in Python form for the exact sweep."""

    def __init__(self, gen: AffineGenerator):
        n = gen.n
        self.n = n
        ptr0, src0, kind0 = gen.incoming(m1=False)
        ptr1, src1, _ = gen.incoming(m1=True)
        g = gen.geometry
        rate = {BULK: mpq(1), ENTRY: mpq(g.alpha.numerator, g.alpha.denominator),
                EXIT: mpq(g.beta.numerator, g.beta.denominator)}
        src0l, kind0l = src0.tolist(), kind0.tolist()
        p0l, p1l, src1l = ptr0.tolist(), ptr1.tolist(), src1.tolist()
        self.in0 = []
        for e in range(n):
            lo, hi = p0l[e], p0l[e + 1]
            ks = kind0l[lo:hi]
            if all(k == BULK for k in ks):
                self.in0.append((src0l[lo:hi], None))
            else:
                self.in0.append((src0l[lo:hi], [rate[k] for k in ks]))
        self.in1 = [src1l[p1l[e]:p1l[e + 1]] for e in range(n)]
        self.blk = gen.block_active().tolist()
        self.exit0 = [mpq(q.numerator, q.denominator) for q in gen.exit_rates_m0()]
        self.blk_idx = [i for i, b in enumerate(self.blk) if b]


def _sweep(plan: _Plan, p):
    n = plan.n
    q = [None] * n
    zero = mpq(0)
    for e in range(n - 1):
        srcs, rates = plan.in0[e]
        acc = zero
        if rates is None:
            for z in srcs:
                acc += q[z]
        else:
            for z, w in zip(srcs, rates):
                acc += w * q[z]
        for z in plan.in1[e]:
            acc += p[z]
        if plan.blk[e]:
            acc -= p[e]
        q[e] = acc / plan.exit0[e]
    tail = zero
    for v in q[: n - 1]:
        tail += v
    q[n - 1] = -tail
    return q


def _residues(vec, prime):
    out = np.empty(len(vec), dtype=np.int64)
    for i, v in enumerate(vec):
        out[i] = int(gmpy2.f_mod(v.numerator * gmpy2.invert(v.denominator, prime), prime))
    return out


_CHECK_PRIMES = (2147483629, 2147483587)


def _check_residual(gen: AffineGenerator, p_prev, p_k, exact: bool):
    """Verify M0 p_k + M1 p_{k-1} = 0 by a column-oriented scatter.

    Exact over Q when ``exact``; otherwise modulo two 31-bit primes.
    """
    g = gen.geometry
    if exact:
        res = [mpq(0)] * gen.n
        rate = {BULK: mpq(1), BLOCK: None, ENTRY: mpq(g.alpha.numerator, g.alpha.denominator),
                EXIT: mpq(g.beta.numerator, g.beta.denominator)}
        for s, d, k in zip(gen.src.tolist(), gen.dst.tolist(), gen.kind.tolist()):
            v = p_prev[s] if k == BLOCK else rate[k] * p_k[s]
            res[d] += v
            res[s] -= v
        if any(x != 0 for x in res):
            raise ResidualError("M0 p_k + M1 p_{k-1} != 0")
        return
    for prime in _CHECK_PRIMES:
        a, b = _residues(p_k, prime), _residues(p_prev, prime)
        w = np.empty(len(gen.kind), dtype=np.int64)
        w[gen.kind == BULK] = 1
        w[gen.kind == ENTRY] = to_residue(g.alpha, prime)
        w[gen.kind == EXIT] = to_residue(g.beta, prime)
        blk = gen.kind == BLOCK
        w[blk] = 1
        val = np.where(blk, b[gen.src], a[gen.src]) * w % prime
        res = np.zeros(gen.n, dtype=np.int64)
        np.add.at(res, gen.dst, val)
        np.subtract.at(res, gen.src, val)
        if (res % prime).any():
            raise ResidualError(f"M0 p_k + M1 p_(k-1) != 0 modulo {prime}")


EXACT_CHECK_LIMIT = 20000


def expand(g: Geometry, order: int, sites=None, keep_vectors: bool = False,
           check: bool = True, generator: AffineGenerator | None = None) -> SteadyStateExpansion:
    """Exact back substitution to ``order``.

    ``sites`` selects the density observables (default: every site).  With
    ``check`` the residual of each order is verified, exactly for state
    spaces up to ``EXACT_CHECK_LIMIT`` states and modulo two primes above.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    gen = build_generator(g) if generator is None else generator
    plan = _Plan(gen)
    n = gen.n
    sites = list(g.sites) if sites is None else [int(i) for i in sites]
    masks = {i: np.flatnonzero(gen.states.site_occupation(i)).tolist() for i in sites}

    p = [mpq(0)] * n
    p[n - 1] = mpq(1)
    vectors = [p] if keep_vectors else None
    c = [mpq(0)]
    d = {i: [_masked_sum(p, masks[i])] for i in sites}
    for k in range(1, order + 1):
        c.append(_masked_sum(p, plan.blk_idx))
        q = _sweep(plan, p)
        if check:
            _check_residual(gen, p, q, exact=n <= EXACT_CHECK_LIMIT)
        for i in sites:
            d[i].append(_masked_sum(q, masks[i]))
        p = q
        if keep_vectors:
            vectors.append(q)
        log.debug("order %d done (%s)", k, g)
    if check:
        if sum(p, mpq(0)) != (1 if order == 0 else 0):
            raise ResidualError("normalisation violated")
    to_f = lambda v: Fraction(int(v.numerator), int(v.denominator))
    return SteadyStateExpansion(
        geometry=g,
        order=order,
        c=[to_f(v) for v in c],
        d={i: [to_f(v) for v in vals] for i, vals in d.items()},
        p=[[to_f(v) for v in vec] for vec in vectors] if keep_vectors else None,
        generator=gen,
    )


def _masked_sum(vec, idx):
    acc = mpq(0)
    for i in idx:
        acc += vec[i]
    return acc


def current_coeffs(e: SteadyStateExpansion) -> list[Fraction]:
    """c_0..c_order with c_k = sum_eta p_{k-1}(eta) eta_0 (1 - eta_1)."""
    if e.p is None:
        return list(e.c)
    blk = np.flatnonzero(e.generator.block_active()).tolist()
    out = [Fraction(0)]
    for k in range(1, e.order + 1):
        out.append(sum((e.p[k - 1][i] for i in blk), Fraction(0)))
    return out


def density_coeffs(e: SteadyStateExpansion, site: int) -> list[Fraction]:
    """d_{site,k} = sum_eta p_k(eta) eta_site for k = 0..order."""
    e.geometry.pos(site)
    if e.p is None:
        if site not in e.d:
            raise KeyError(f"site {site} was not requested in expand()")
        return list(e.d[site])
    idx = np.flatnonzero(e.generator.states.site_occupation(site)).tolist()
    return [sum((vec[i] for i in idx), Fraction(0)) for vec in e.p]


# -- modular route ------------------------------------------------------------


@njit
def _sweep_mod_numba(prime, order, ptr0, src0, w0, ptr1, src1, inv_exit, blk, masks):
    n = inv_exit.shape[0]
    n_sites = masks.shape[0]
    c = np.zeros(order + 1, dtype=np.int64)
    d = np.zeros((n_sites, order + 1), dtype=np.int64)
    p = np.zeros(n, dtype=np.int64)
    p[n - 1] = 1
    for s in range(n_sites):
        d[s, 0] = masks[s, n - 1]
    q = np.zeros(n, dtype=np.int64)
    for k in range(1, order + 1):
        acc = 0
        for i in range(n):
            if blk[i]:
                acc += p[i]
        c[k] = acc % prime
        total = 0
        for e in range(n - 1):
            a = 0
            for t in range(ptr0[e], ptr0[e + 1]):
                a = (a + w0[t] * q[src0[t]]) % prime
            for t in range(ptr1[e], ptr1[e + 1]):
                a += p[src1[t]]
            if blk[e]:
                a -= p[e]
            a %= prime
            q[e] = a * inv_exit[e] % prime
            total += q[e]
        q[n - 1] = (-total) % prime
        for s in range(n_sites):
            acc = 0
            for i in range(n):
                if masks[s, i]:
                    acc += q[i]
            d[s, k] = acc % prime
        for i in range(n):
            p[i] = q[i]
    return c, d


def _segment_sums(values, ptr_local):
    """Sums of ``values`` over consecutive segments given by offsets."""
    cs = np.concatenate([[0], np.cumsum(values)])
    return cs[ptr_local[1:]] - cs[ptr_local[:-1]]


def _sweep_mod_numpy(prime, order, ptr0, src0, w0, ptr1, src1, inv_exit, blk, masks, levels):
    n = inv_exit.shape[0]
    c = np.zeros(order + 1, dtype=np.int64)
    d = np.zeros((masks.shape[0], order + 1), dtype=np.int64)
    p = np.zeros(n, dtype=np.int64)
    p[n - 1] = 1
    d[:, 0] = masks[:, n - 1]
    for k in range(1, order + 1):
        c[k] = p[blk].sum() % prime
        m1p = (_segment_sums(p[src1], ptr1) - np.where(blk, p, 0)) % prime
        q = np.zeros(n, dtype=np.int64)
        for lo, hi in zip(levels[:-1], levels[1:]):
            hi = min(hi, n - 1)
            if lo >= hi:
                continue
            e_lo, e_hi = ptr0[lo], ptr0[hi]
            contrib = w0[e_lo:e_hi] * q[src0[e_lo:e_hi]] % prime
            seg = _segment_sums(contrib, ptr0[lo:hi + 1] - e_lo)
            q[lo:hi] = (seg + m1p[lo:hi]) % prime * inv_exit[lo:hi] % prime
        q[n - 1] = (-q[: n - 1].sum()) % prime
        d[:, k] = (masks.astype(np.int64) @ q) % prime
        p = q
    return c, d


class _ModPlan:
    def __init__(self, gen: AffineGenerator, sites):
        self.gen = gen
        self.ptr0, self.src0, self.kind0 = gen.incoming(m1=False)
        self.ptr1, self.src1, _ = gen.incoming(m1=True)
        self.blk = gen.block_active()
        self.exit0 = gen.exit_rates_m0()
        self.sites = list(sites)
        self.masks = np.array([gen.states.site_occupation(i) for i in self.sites], dtype=np.bool_).reshape(
            len(self.sites), gen.n)
        self.levels = gen.states.level_bounds()
        self._distinct_exit = {}
        codes = np.empty(gen.n, dtype=np.int64)
        for i, v in enumerate(self.exit0):
            codes[i] = self._distinct_exit.setdefault(v, len(self._distinct_exit))
        self.exit_codes = codes

    def run(self, prime: int, order: int, use_numba: bool):
        g = self.gen.geometry
        inv_table = np.zeros(len(self._distinct_exit), dtype=np.int64)
        for v, code in self._distinct_exit.items():
            if v != 0:
                inv_table[code] = pow(to_residue(v, prime), -1, prime)
        inv_exit = inv_table[self.exit_codes]
        w0 = np.ones(len(self.kind0), dtype=np.int64)
        w0[self.kind0 == ENTRY] = to_residue(g.alpha, prime)
        w0[self.kind0 == EXIT] = to_residue(g.beta, prime)
        if use_numba:
            return _sweep_mod_numba(prime, order, self.ptr0, self.src0, w0, self.ptr1, self.src1,
                                    inv_exit, self.blk, self.masks)
        return _sweep_mod_numpy(prime, order, self.ptr0, self.src0, w0, self.ptr1, self.src1,
                                inv_exit, self.blk, self.masks, self.levels)


def modular_coefficients(g: Geometry, order: int, sites=(), max_primes: int = 400,
                         batch: int = 4, use_numba: bool | None = None,
                         generator: AffineGenerator | None = None):
    """Current and density coefficients via mod-p sweeps + rational reconstruction.

    Primes are added in batches until every reconstructed value is unchanged
    between two consecutive batches; the result is then confirmed against one
    further prime it was not built from.
    Returns ``(c, d, primes_used)``.
    """
    use_numba = USE_NUMBA if use_numba is None else use_numba
    gen = build_generator(g) if generator is None else generator
    plan = _ModPlan(gen, sites)
    n_sites = len(plan.sites)
    primes = iter(word_primes(max_primes + 1))
    acc = MultiModular((order + 1) * (1 + n_sites))
    result = None
    used = 0
    while result is None:
        for _ in range(batch):
            if used >= max_primes:
                raise RuntimeError(f"no stable reconstruction after {max_primes} primes")
            prime = next(primes)
            c, d = plan.run(prime, order, use_numba)
            acc.add(prime, np.concatenate([c, d.ravel()]).tolist())
            used += 1
        result = acc.reconstruct()
    prime = next(primes)
    c, d = plan.run(prime, order, use_numba)
    check = np.concatenate([c, d.ravel()]).tolist()
    if [to_residue(v, prime) for v in result] != [int(x) % prime for x in check]:
        raise ResidualError("modular reconstruction failed the confirmation prime")
    cs = result[: order + 1]
    ds = {i: result[(order + 1) * (1 + s):(order + 1) * (2 + s)] for s, i in enumerate(plan.sites)}
    return cs, ds, acc.primes + [prime]


def coefficient_table(g: Geometry, order: int, sites=None, method: str = "exact",
                      check: bool = True) -> CoefficientTable:
    """Current and density coefficients with their validated orders."""
    sites = list(range(1, min(5, g.L) + 1)) if sites is None else list(sites)
    if method == "exact":
        e = expand(g, order, sites=sites, check=check)
        c, d = e.c, e.d
    elif method == "modular":
        c, d, _ = modular_coefficients(g, order, sites=sites)
    else:
        raise ValueError(f"unknown method {method!r}")
    dens_valid = {i: validated_order(g, i if i >= 1 else 1 - i, "local")
                  for i in sites}
    return CoefficientTable(g, list(c), dict(d), validated_order(g), dens_valid)
