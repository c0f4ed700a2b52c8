"""Finite TASEP geometries with one slow bond and their affine generators.

Sites are labelled ``-L+1 .. L`` and the slow bond joins sites 0 and 1.  A
configuration is stored as an integer whose bit ``i + L - 1`` is the
occupation of site ``i``.

States are ordered by a *potential* that every rate-1 transition (and every
entry/exit move on the interval) raises by exactly one, so the r = 0 part of
the generator is triangular in this order and the step configuration, which
maximises the potential, is the unique absorbing state.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from ._jit import USE_NUMBA, njit
from .algebra.rational import as_fraction

__all__ = [
    "Geometry",
    "Configuration",
    "StateSpace",
    "AffineGenerator",
    "StateSpaceTooLarge",
    "BULK",
    "BLOCK",
    "ENTRY",
    "EXIT",
    "enumerate_states",
    "build_generator",
    "stationary_at_r0",
]

BULK, BLOCK, ENTRY, EXIT = 0, 1, 2, 3

MAX_RING_L = 14
MAX_INTERVAL_L = 12


class StateSpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Geometry:
    kind: str
    L: int
    alpha: Fraction = Fraction(1)
    beta: Fraction = Fraction(1)

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in ("ring", "interval"):
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if int(self.L) != self.L or self.L < 1:
            raise ValueError("L must be a positive integer")
        object.__setattr__(self, "L", int(self.L))
        a, b = as_fraction(self.alpha), as_fraction(self.beta)
        if a < 0 or b < 0:
            raise ValueError("entry and exit rates must be non-negative")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def ring(cls, L: int) -> "Geometry":
        return cls("ring", L)

    @classmethod
    def interval(cls, L: int, alpha=1, beta=1) -> "Geometry":
        return cls("interval", L, as_fraction(alpha), as_fraction(beta))

    @property
    def is_ring(self) -> bool:
        return self.kind == "ring"

    @property
    def n_sites(self) -> int:
        return 2 * self.L

    @property
    def sites(self) -> range:
        return range(-self.L + 1, self.L + 1)

    def pos(self, site: int) -> int:
        if not -self.L + 1 <= site <= self.L:
            raise ValueError(f"site {site} outside -{self.L - 1}..{self.L}")
        return site + self.L - 1

    @property
    def n_states(self) -> int:
        return comb(2 * self.L, self.L) if self.is_ring else 2 ** (2 * self.L)

    def to_config(self) -> dict:
        d = {"kind": self.kind, "L": self.L}
        if not self.is_ring:
            d["alpha"] = f"{self.alpha.numerator}/{self.alpha.denominator}"
            d["beta"] = f"{self.beta.numerator}/{self.beta.denominator}"
        return d

    @classmethod
    def from_config(cls, d: dict) -> "Geometry":
        return cls(d["kind"], int(d["L"]), as_fraction(d.get("alpha", 1)), as_fraction(d.get("beta", 1)))

    def __str__(self):
        if self.is_ring:
            return f"Ring(L={self.L})"
        return f"Interval(L={self.L}, alpha={self.alpha}, beta={self.beta})"


@dataclass(frozen=True)
class Configuration:
    geometry: Geometry
    bits: int

    def __post_init__(self):
        g = self.geometry
        if self.bits < 0 or self.bits >> g.n_sites:
            raise ValueError("occupancy has bits outside the lattice")
        if g.is_ring and bin(self.bits).count("1") != g.L:
            raise ValueError("ring configurations carry exactly L particles")

    @classmethod
    def from_sites(cls, g: Geometry, occupied) -> "Configuration":
        bits = 0
        for i in occupied:
            bits |= 1 << g.pos(i)
        return cls(g, bits)

    def __getitem__(self, site: int) -> int:
        return (self.bits >> self.geometry.pos(site)) & 1

    def occupancy(self) -> tuple:
        return tuple(self[i] for i in self.geometry.sites)

    def __str__(self):
        return "".join(str(b) for b in self.occupancy())


# -- enumeration --------------------------------------------------------------


@njit
def _gosper(n, k, count):
    out = np.empty(count, dtype=np.int64)
    x = (np.int64(1) << k) - 1
    limit = np.int64(1) << n
    i = 0
    while x < limit and i < count:
        out[i] = x
        i += 1
        c = x & -x
        rr = x + c
        x = (((rr ^ x) >> 2) // c) | rr
    return out


def _fixed_popcount(n: int, k: int) -> np.ndarray:
    count = comb(n, k)
    if USE_NUMBA:
        return _gosper(n, k, count)
    out = []
    chunk = 1 << 20
    for start in range(0, 1 << n, chunk):
        x = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        pc = np.zeros_like(x)
        y = x.copy()
        while y.any():
            pc += y & 1
            y >>= 1
        out.append(x[pc == k])
    return np.concatenate(out)


def _bit_matrix(occ: np.ndarray, n: int) -> np.ndarray:
    return ((occ[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int8)


def _potential_weights(g: Geometry):
    """Per-site weights (occupied, empty) whose sum gives the potential."""
    L = g.L
    site = np.arange(2 * L) - L + 1
    if g.is_ring:
        # chain order 1, 2, .., L, -L+1, .., 0
        occ_w = np.where(site >= 1, site, site + 2 * L)
        emp_w = np.zeros_like(occ_w)
    else:
        occ_w = np.where(site <= 0, site + L, 0)
        emp_w = np.where(site >= 1, L + 1 - site, 0)
    return occ_w.astype(np.int64), emp_w.astype(np.int64)


@dataclass
class StateSpace:
    """States sorted by (potential, occupancy integer)."""

    geometry: Geometry
    occ: np.ndarray
    potential: np.ndarray
    _sorted_occ: np.ndarray = field(repr=False)
    _perm: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.occ)

    def index(self, bits):
        """State index for occupancy integer(s); -1 where absent."""
        bits = np.asarray(bits, dtype=np.int64)
        j = np.searchsorted(self._sorted_occ, bits)
        j = np.clip(j, 0, len(self._sorted_occ) - 1)
        hit = self._sorted_occ[j] == bits
        return np.where(hit, self._perm[j], -1)

    def config(self, idx: int) -> Configuration:
        return Configuration(self.geometry, int(self.occ[idx]))

    def bits(self) -> np.ndarray:
        return _bit_matrix(self.occ, self.geometry.n_sites)

    def site_occupation(self, site: int) -> np.ndarray:
        return ((self.occ >> self.geometry.pos(site)) & 1).astype(bool)

    def level_bounds(self) -> np.ndarray:
        """Start offsets of each potential level, plus the end sentinel."""
        starts = np.flatnonzero(np.diff(self.potential)) + 1
        return np.concatenate([[0], starts, [len(self.occ)]])


def enumerate_states(g: Geometry, max_ring_L: int = MAX_RING_L, max_interval_L: int = MAX_INTERVAL_L) -> StateSpace:
    if g.is_ring and g.L > max_ring_L:
        raise StateSpaceTooLarge(f"ring L={g.L} exceeds the guard L <= {max_ring_L}")
    if not g.is_ring and g.L > max_interval_L:
        raise StateSpaceTooLarge(f"interval L={g.L} exceeds the guard L <= {max_interval_L}")
    n = g.n_sites
    if g.is_ring:
        occ = _fixed_popcount(n, g.L)
    else:
        occ = np.arange(1 << n, dtype=np.int64)
    occ_w, emp_w = _potential_weights(g)
    pot = np.zeros(len(occ), dtype=np.int64)
    for s in range(n):
        b = (occ >> s) & 1
        pot += np.where(b == 1, occ_w[s], emp_w[s])
    order = np.lexsort((occ, pot))
    occ, pot = occ[order], pot[order]
    perm = np.argsort(occ, kind="stable")
    return StateSpace(g, occ, pot, occ[perm], perm)


# -- generator ----------------------------------------------------------------


@dataclass
class AffineGenerator:
    """M(r) = M0 + r M1 stored as a transition list.

    Each transition ``src -> dst`` has a kind in {BULK, BLOCK, ENTRY, EXIT}
    with rate 1, r, alpha, beta respectively.  Only BLOCK transitions enter
    M1.  Columns are states (M[dst, src] is the rate src -> dst), so every
    column sums to zero once the diagonal is included.
    """

    geometry: Geometry
    states: StateSpace
    src: np.ndarray
    dst: np.ndarray
    kind: np.ndarray

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def potential(self) -> np.ndarray:
        return self.states.potential

    def kind_rate(self, kind: int) -> Fraction:
        g = self.geometry
        return {BULK: Fraction(1), ENTRY: g.alpha, EXIT: g.beta}[kind]

    def block_active(self) -> np.ndarray:
        """States with eta_0 (1 - eta_1) = 1."""
        s = self.states
        return s.site_occupation(0) & ~s.site_occupation(1)

    def exit_rates_m0(self) -> list:
        """-diag(M0) per state as exact rationals."""
        counts = [np.bincount(self.src[self.kind == k], minlength=self.n).tolist() for k in (BULK, ENTRY, EXIT)]
        a, b = self.geometry.alpha, self.geometry.beta
        return [Fraction(n0) + a * ne + b * nx for n0, ne, nx in zip(*counts)]

    def absorbing_index(self) -> int:
        return self.n - 1

    def entries(self, which: int):
        """Exact (row, col, value) triples of M0 (which=0) or M1 (which=1)."""
        out = {}
        if which == 1:
            sel = self.kind == BLOCK
            for s, d in zip(self.src[sel].tolist(), self.dst[sel].tolist()):
                out[(d, s)] = out.get((d, s), Fraction(0)) + 1
                out[(s, s)] = out.get((s, s), Fraction(0)) - 1
        else:
            sel = self.kind != BLOCK
            for s, d, k in zip(self.src[sel].tolist(), self.dst[sel].tolist(), self.kind[sel].tolist()):
                rate = self.kind_rate(k)
                out[(d, s)] = out.get((d, s), Fraction(0)) + rate
                out[(s, s)] = out.get((s, s), Fraction(0)) - rate
        return out

    def to_scipy(self, r: float):
        """Float sparse matrix of M(r) (CSC)."""
        import scipy.sparse as sp

        rates = np.empty(len(self.kind))
        rates[self.kind == BULK] = 1.0
        rates[self.kind == BLOCK] = r
        rates[self.kind == ENTRY] = float(self.geometry.alpha)
        rates[self.kind == EXIT] = float(self.geometry.beta)
        out = np.bincount(self.src, weights=rates, minlength=self.n)
        rows = np.concatenate([self.dst, np.arange(self.n)])
        cols = np.concatenate([self.src, np.arange(self.n)])
        vals = np.concatenate([rates, -out])
        return sp.csc_matrix((vals, (rows, cols)), shape=(self.n, self.n))

    def incoming(self, m1: bool = False):
        """CSR-by-destination arrays (indptr, src, kind) of M0 or M1 off-diagonals."""
        sel = (self.kind == BLOCK) if m1 else (self.kind != BLOCK)
        src, dst, kind = self.src[sel], self.dst[sel], self.kind[sel]
        order = np.lexsort((src, dst))
        src, dst, kind = src[order], dst[order], kind[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(dst, minlength=self.n), out=indptr[1:])
        return indptr, src, kind

    def to_coo_text(self) -> str:
        """Debug export: one line per off-diagonal entry, ``row col part rate``."""
        buf = io.StringIO()
        buf.write(f"# {self.geometry} states={self.n}\n")
        names = {BULK: "1", BLOCK: "r", ENTRY: "alpha", EXIT: "beta"}
        for s, d, k in zip(self.src.tolist(), self.dst.tolist(), self.kind.tolist()):
            part = "M1" if k == BLOCK else "M0"
            buf.write(f"{d} {s} {part} {names[k]}\n")
        return buf.getvalue()


def _moves(g: Geometry):
    """(from_pos, to_pos, kind) for hops; None marks the reservoir."""
    n = g.n_sites
    blk = g.pos(0)
    moves = []
    last = n if g.is_ring else n - 1
    for s in range(last):
        t = (s + 1) % n
        moves.append((s, t, BLOCK if s == blk else BULK))
    if not g.is_ring:
        if g.alpha != 0:
            moves.append((None, 0, ENTRY))
        if g.beta != 0:
            moves.append((n - 1, None, EXIT))
    return moves


def build_generator(g: Geometry, states: StateSpace | None = None) -> AffineGenerator:
    states = enumerate_states(g) if states is None else states
    occ = states.occ
    srcs, dsts, kinds = [], [], []
    for a, b, kind in _moves(g):
        if a is None:  # entry into site -L+1
            ok = ((occ >> b) & 1) == 0
            new = occ | (1 << b)
        elif b is None:  # exit from site L
            ok = ((occ >> a) & 1) == 1
            new = occ & ~(1 << a)
        else:
            ok = (((occ >> a) & 1) == 1) & (((occ >> b) & 1) == 0)
            new = occ ^ ((1 << a) | (1 << b))
        idx = np.flatnonzero(ok)
        tgt = states.index(new[idx])
        if (tgt < 0).any():
            raise AssertionError("transition leaves the enumerated state space")
        srcs.append(idx)
        dsts.append(tgt)
        kinds.append(np.full(len(idx), kind, dtype=np.int8))
    src = np.concatenate(srcs).astype(np.int64)
    dst = np.concatenate(dsts).astype(np.int64)
    kind = np.concatenate(kinds)
    gen = AffineGenerator(g, states, src, dst, kind)
    _check_triangular(gen)
    return gen


def _check_triangular(gen: AffineGenerator):
    pot = gen.states.potential
    m0 = gen.kind != BLOCK
    step = pot[gen.dst[m0]] - pot[gen.src[m0]]
    if not (step == 1).all():
        raise AssertionError("an r = 0 transition does not raise the potential by one")
    g = gen.geometry
    if not g.is_ring and (g.alpha == 0 or g.beta == 0):
        return
    out0 = np.bincount(gen.src[m0], minlength=gen.n)
    if out0[-1] != 0 or (out0[:-1] == 0).any():
        raise AssertionError("the step configuration must be the unique r = 0 absorbing state")


def stationary_at_r0(g: Geometry) -> Configuration:
    """The step configuration: sites <= 0 occupied, sites >= 1 empty."""
    if not g.is_ring and (g.alpha <= 0 or g.beta <= 0):
        raise ValueError("the interval needs alpha, beta > 0 for a unique r = 0 state")
    return Configuration.from_sites(g, range(-g.L + 1, 1))
