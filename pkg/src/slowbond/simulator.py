"""Continuous-time kinetic Monte Carlo for the slow-bond TASEP.

Randomness comes from numpy's counter-based Philox4x64 generator keyed by
(seed, stream).  Uniforms are drawn in fixed-size batches and handed to the
event kernels, so the numba and interpreted kernels consume the same stream
and produce identical trajectories for a given seed.

Two engines:

* :func:`estimate_current` runs one ring or interval with the rejection-free
  direct method over active bonds and estimates the blockage-bond current
  by batch means.
* :func:`coupled_run` drives three processes (eta and zeta on a window of
  Z, tau on an interval) from one shared family of bond clocks, realised as
  a superposition: event times at the total clock rate, the ringing bond
  chosen in proportion to its rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._jit import backend_name, njit
from .model import Geometry

__all__ = [
    "PRNG_ID",
    "SimRun",
    "SimResult",
    "CouplingViolation",
    "estimate_current",
    "coupled_run",
    "CoupledResult",
    "finite_size_probe",
    "default_burn_in",
    "exact_ring_current_r1",
]

PRNG_ID = "numpy.Philox4x64-10(key=[seed, stream]); float64 = random() in [0, 1)"
BATCH = 1 << 16
STREAM_SINGLE = 1
STREAM_COUPLED = 2
MASK64 = (1 << 64) - 1


class CouplingViolation(AssertionError):
    pass


def _uniforms(seed: int, stream: int):
    gen = np.random.Generator(np.random.Philox(key=np.array([seed & MASK64, stream], dtype=np.uint64)))
    while True:
        yield gen.random(BATCH)


def default_burn_in(L: int) -> float:
    return max(10.0 * (2 * L) ** 2, 1e3)


# -- single-system kernel ------------------------------------------------------


@njit
def _set_active(b, on, bulk, where, nbulk):
    if on and where[b] < 0:
        where[b] = nbulk
        bulk[nbulk] = b
        nbulk += 1
    elif not on and where[b] >= 0:
        i = where[b]
        last = bulk[nbulk - 1]
        bulk[i] = last
        where[last] = i
        where[b] = -1
        nbulk -= 1
    return nbulk


@njit
def _single_kernel(occ, ring, blk, rates, u, t, t_end, edges, counts, bulk, where, nbulk):
    """Advance one system until t_end or the uniforms run out.

    ``rates`` = (r, alpha, beta).  Bonds are b = 0..n-2 (b -> b+1), plus
    n-1 (last -> first) on the ring.  The blockage bond ``blk`` is kept out
    of the bulk set.  Crossings of ``blk`` are binned by the batch ``edges``.
    Returns (t, used, nbulk, done).
    """
    n = occ.shape[0]
    nb = n if ring else n - 1
    r = rates[0]
    alpha = rates[1]
    beta = rates[2]
    used = 0
    m = u.shape[0]
    nedge = edges.shape[0]
    while used + 2 <= m:
        blk_on = occ[blk] == 1 and occ[(blk + 1) % n] == 0
        ent_on = (not ring) and occ[0] == 0
        ext_on = (not ring) and occ[n - 1] == 1
        total = nbulk + (r if blk_on else 0.0) + (alpha if ent_on else 0.0) + (beta if ext_on else 0.0)
        if total <= 0.0:
            return t_end, used, nbulk, True
        t = t - math.log(1.0 - u[used]) / total
        x = u[used + 1] * total
        used += 2
        if t >= t_end:
            return t_end, used, nbulk, True
        moved = -1
        if x < nbulk:
            moved = bulk[min(int(x), nbulk - 1)]
        else:
            x -= nbulk
            if blk_on and x < r:
                moved = blk
                # bin the crossing
                j = 0
                while j < nedge - 1 and t >= edges[j + 1]:
                    j += 1
                if t >= edges[0] and j < nedge - 1:
                    counts[j] += 1
            else:
                if blk_on:
                    x -= r
                if ent_on and x < alpha:
                    occ[0] = 1
                    nbulk = _set_active(0, occ[1] == 0 and blk != 0, bulk, where, nbulk)
                elif ext_on:
                    occ[n - 1] = 0
                    if n - 2 != blk:
                        nbulk = _set_active(n - 2, occ[n - 2] == 1, bulk, where, nbulk)
                continue
        a = moved
        c = (a + 1) % n
        occ[a] = 0
        occ[c] = 1
        # bonds touching sites a and c: a-1, a, c
        for d in (a - 1, a, c):
            if d < 0:
                if not ring:
                    continue
                d += nb
            if d >= nb or d == blk:
                continue
            nbulk = _set_active(d, occ[d] == 1 and occ[(d + 1) % n] == 0, bulk, where, nbulk)
    return t, used, nbulk, False


@dataclass
class SimRun:
    geometry: Geometry
    r: float
    t_max: float
    seed: int = 0
    t_burn: float | None = None
    n_batches: int = 20
    initial: np.ndarray | None = None

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.r < 0:
            raise ValueError("r must be non-negative")


@dataclass
class SimResult:
    mean: float
    stderr: float
    batches: list
    crossings: int
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"current": self.mean, "stderr": self.stderr, "batches": self.batches,
                "crossings": self.crossings, **self.meta}


def _initial_occ(g: Geometry) -> np.ndarray:
    # step configuration: sites <= 0 occupied
    occ = np.zeros(2 * g.L, dtype=np.int8)
    occ[: g.L] = 1
    return occ


def _run_single(run: SimRun):
    g = run.geometry
    n = 2 * g.L
    occ = (_initial_occ(g) if run.initial is None else np.asarray(run.initial, dtype=np.int8)).copy()
    if occ.shape[0] != n:
        raise ValueError("initial configuration has the wrong length")
    ring = g.is_ring
    blk = g.L - 1
    nb = n if ring else n - 1
    bulk = np.zeros(nb, dtype=np.int64)
    where = -np.ones(nb, dtype=np.int64)
    nbulk = 0
    for b in range(nb):
        if b != blk and occ[b] == 1 and occ[(b + 1) % n] == 0:
            nbulk = _set_active(b, True, bulk, where, nbulk)
    t_burn = default_burn_in(g.L) if run.t_burn is None else float(run.t_burn)
    if t_burn >= run.t_max:
        raise ValueError(f"t_max = {run.t_max} leaves no measurement time after burn-in {t_burn}")
    edges = np.linspace(t_burn, run.t_max, run.n_batches + 1)
    counts = np.zeros(run.n_batches, dtype=np.int64)
    rates = np.array([float(run.r), float(g.alpha), float(g.beta)])
    t = 0.0
    for u in _uniforms(run.seed, STREAM_SINGLE):
        t, _, nbulk, done = _single_kernel(occ, ring, blk, rates, u, t, float(run.t_max), edges, counts,
                                           bulk, where, nbulk)
        if done:
            break
    if ring and int(occ.sum()) != g.L:
        raise AssertionError("particle number changed on the ring")
    return counts, edges, occ


def estimate_current(run: SimRun) -> SimResult:
    """Blockage-bond current after burn-in, with batch-means standard error."""
    if run.n_batches < 20:
        raise ValueError("at least 20 batches are required")
    counts, edges, _ = _run_single(run)
    width = edges[1] - edges[0]
    per = counts / width
    mean = float(counts.sum() / (edges[-1] - edges[0]))
    stderr = float(per.std(ddof=1) / math.sqrt(len(per)))
    meta = {
        "geometry": run.geometry.to_config(),
        "r": run.r,
        "t_max": run.t_max,
        "t_burn": float(edges[0]),
        "seed": run.seed,
        "prng": PRNG_ID,
        "backend": backend_name(),
    }
    return SimResult(mean, stderr, per.tolist(), int(counts.sum()), meta)


# -- coupled three-process kernel -------------------------------------------------


@njit
def _coupled_kernel(eta, zeta, tau, W, L, fill, r, u, t, t_end, checks, out, ci, counters, check_all):
    """Shared-clock dynamics of eta, zeta (window sites -W+1..W) and tau (-L+1..L).

    Window bond b = 0..2W joins site s = b - W to s + 1; outside the window
    sites are frozen (left: eta full, zeta ``fill``; right: empty).  Bond
    s = 0 rings at rate r, the rest at rate 1.  Returns (t, used, ci, bad)
    where ``bad`` is the index of a violating event or -1.
    """
    used = 0
    m = u.shape[0]
    total = 2.0 * W + r
    nchk = checks.shape[0]
    while used + 2 <= m:
        t = t - math.log(1.0 - u[used]) / total
        x = u[used + 1] * total
        used += 2
        while ci < nchk and checks[ci] <= t:
            out[ci, 0] = counters[0]
            out[ci, 1] = counters[1]
            out[ci, 2] = counters[2]
            ci += 1
        if t >= t_end:
            return t_end, used, ci, -1
        if x < r:
            s = 0
        else:
            k = min(int(x - r), 2 * W - 1)
            s = k - W if k < W else k - W + 1  # skip s = 0
        # eta and zeta on the window, index p = site + W - 1
        p = s + W - 1
        for which in range(2):
            occ = eta if which == 0 else zeta
            left = (1 if which == 0 else fill) if s <= -W else occ[p]
            right = 0 if s + 1 >= W + 1 else occ[p + 1]
            if left == 1 and right == 0:
                if s > -W:
                    occ[p] = 0
                if s + 1 < W + 1:
                    occ[p + 1] = 1
                if s == 0:
                    counters[1 + which] += 1
        # tau on -L+1..L, index q = site + L - 1; entry on s = -L, exit on s = L
        if -L <= s <= L:
            q = s + L - 1
            left = 1 if s == -L else tau[q]
            right = 0 if s == L else tau[q + 1]
            if left == 1 and right == 0:
                if s > -L:
                    tau[q] = 0
                if s < L:
                    tau[q + 1] = 1
                if s == 0:
                    counters[0] += 1
        if check_all and (counters[0] < counters[1] or counters[1] < counters[2]):
            return t, used, ci, used // 2
    return t, used, ci, -1


@dataclass
class CoupledResult:
    times: np.ndarray
    N_tau: np.ndarray
    N_eta: np.ndarray
    N_zeta: np.ndarray
    meta: dict = field(default_factory=dict)

    def holds(self) -> bool:
        return bool(np.all(self.N_tau >= self.N_eta) and np.all(self.N_eta >= self.N_zeta))

    def to_json(self) -> dict:
        return {
            "t": self.times.tolist(),
            "N_tau": self.N_tau.tolist(),
            "N_eta": self.N_eta.tolist(),
            "N_zeta": self.N_zeta.tolist(),
            **self.meta,
        }


def _zeta_initial(zeta0, W):
    if isinstance(zeta0, str):
        if zeta0 == "step":
            z = np.zeros(2 * W, dtype=np.int8)
            z[:W] = 1
            return z, 1
        if zeta0 == "empty":
            return np.zeros(2 * W, dtype=np.int8), 0
        if zeta0 == "full":
            return np.ones(2 * W, dtype=np.int8), 1
        raise ValueError(f"unknown zeta0 preset {zeta0!r}")
    z = np.asarray(zeta0, dtype=np.int8).copy()
    if z.shape != (2 * W,) or not np.isin(z, (0, 1)).all():
        raise ValueError(f"zeta0 must be a 0/1 array of length {2 * W}")
    return z, int(z[0])


def coupled_run(L: int, W: int, r: float, t_max: float, seed: int = 0, zeta0="empty",
                zeta_left_fill: int | None = None, n_checkpoints: int = 50,
                debug: bool = False) -> CoupledResult:
    """Crossing counts of the three coupled processes at evenly spaced checkpoints.

    eta starts from the step configuration, tau from its restriction to
    -L+1..L.  ``zeta0`` is a window configuration (sites -W+1..W) or one of
    "step", "empty", "full"; the frozen sites left of the window hold
    ``zeta_left_fill`` (default: the leftmost window site of zeta0).  With
    ``debug`` the inequality N_tau >= N_eta >= N_zeta is checked after every
    event; it is always checked at the checkpoints.
    """
    if L < 1 or W < 4 * L:
        raise ValueError(f"window too small: need W >= 4L (W={W}, L={L})")
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    eta = np.zeros(2 * W, dtype=np.int8)
    eta[:W] = 1
    tau = np.zeros(2 * L, dtype=np.int8)
    tau[:L] = 1
    zeta, fill = _zeta_initial(zeta0, W)
    if zeta_left_fill is not None:
        fill = int(zeta_left_fill)
    checks = np.linspace(0.0, t_max, n_checkpoints + 1)[1:]
    out = np.zeros((n_checkpoints, 3), dtype=np.int64)
    counters = np.zeros(3, dtype=np.int64)
    t, ci, events = 0.0, 0, 0
    for u in _uniforms(seed, STREAM_COUPLED):
        t, used, ci, bad = _coupled_kernel(eta, zeta, tau, W, L, fill, float(r), u, t, float(t_max),
                                           checks, out, ci, counters, debug)
        if bad >= 0:
            raise CouplingViolation(
                f"N_tau >= N_eta >= N_zeta violated at event {events + bad} (seed {seed}): {counters.tolist()}")
        events += used // 2
        if t >= t_max:
            break
    while ci < n_checkpoints:
        out[ci] = counters
        ci += 1
    res = CoupledResult(checks, out[:, 0].copy(), out[:, 1].copy(), out[:, 2].copy(),
                        {"L": L, "W": W, "r": r, "t_max": t_max, "seed": seed, "events": events,
                         "prng": PRNG_ID, "backend": backend_name()})
    if not res.holds():
        raise CouplingViolation(f"coupling inequality violated at a checkpoint (seed {seed})")
    return res


def finite_size_probe(L_list, r: float, t_max: float, seeds=(0,), geometry: str = "ring"):
    """Monte Carlo currents for several sizes; seeds are pooled by averaging.

    Rows are (L, current, stderr).  Nothing is asserted about the trend.
    """
    rows = []
    for L in L_list:
        if L > 512:
            raise ValueError("L above 512 is not supported")
        g = Geometry.ring(L) if geometry == "ring" else Geometry.interval(L)
        res = [estimate_current(SimRun(g, r, t_max, s)) for s in seeds]
        means = np.array([x.mean for x in res])
        errs = np.array([x.stderr for x in res])
        rows.append((L, float(means.mean()), float(np.sqrt((errs ** 2).sum()) / len(res))))
    return rows


def exact_ring_current_r1(L: int) -> Fraction:
    """Current of the homogeneous ring (uniform stationary measure)."""
    return Fraction(L, 2 * (2 * L - 1))

