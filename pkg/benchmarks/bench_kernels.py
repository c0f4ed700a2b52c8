"""Time the numba kernels against their fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Kernels: the mod-p back-substitution sweep (numba loop vs level-vectorised
numpy), the double-precision Aberth iteration (numba loop vs broadcast
numpy) and the KMC event loop (numba vs the same code interpreted).  Each
pair is also checked to return identical results.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from slowbond._jit import USE_NUMBA
from slowbond.algebra.roots import aberth_float
from slowbond.model import Geometry, build_generator
from slowbond.series_engine import _ModPlan
from slowbond.simulator import _set_active, _single_kernel, _uniforms


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench_sweep(repeat):
    plan = _ModPlan(build_generator(Geometry.ring(8)), [1, 2, 3])
    prime, order = 2147483647, 8
    plan.run(prime, 1, True)  # compile
    t_nb, a = best_of(lambda: plan.run(prime, order, True), repeat)
    t_np, b = best_of(lambda: plan.run(prime, order, False), repeat)
    same = np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    return {"kernel": "mod-p sweep, ring L=8 (12870 states), order 8", "numba_s": t_nb, "numpy_s": t_np,
            "identical": bool(same)}


def bench_aberth(repeat):
    rng = np.random.default_rng(1)
    c = rng.standard_normal(81) + 1j * rng.standard_normal(81)
    z0 = 1.1 * np.exp(2j * np.pi * (np.arange(80) + 0.25) / 80)
    aberth_float(c, z0, use_numba=True)
    t_nb, a = best_of(lambda: aberth_float(c, z0, use_numba=True), repeat)
    t_np, b = best_of(lambda: aberth_float(c, z0, use_numba=False), repeat)
    ra, rb = np.sort_complex(a[0]), np.sort_complex(b[0])
    return {"kernel": "Aberth, degree 80", "numba_s": t_nb, "numpy_s": t_np,
            "identical": bool(np.allclose(ra, rb, rtol=1e-10, atol=1e-12))}


def _kmc(kernel, setter, L, t_end):
    n = 2 * L
    occ = np.zeros(n, dtype=np.int8)
    occ[:L] = 1
    blk = L - 1
    bulk = np.zeros(n, dtype=np.int64)
    where = -np.ones(n, dtype=np.int64)
    nbulk = 0
    for b in range(n):
        if b != blk and occ[b] == 1 and occ[(b + 1) % n] == 0:
            nbulk = setter(b, True, bulk, where, nbulk)
    edges = np.linspace(0.0, t_end, 2)
    counts = np.zeros(1, dtype=np.int64)
    rates = np.array([0.7, 1.0, 1.0])
    t = 0.0
    for u in _uniforms(0, 1):
        t, _, nbulk, done = kernel(occ, True, blk, rates, u, t, t_end, edges, counts, bulk, where, nbulk)
        if done:
            break
    return int(counts[0])


def bench_kmc(repeat):
    if not USE_NUMBA:
        return {"kernel": "KMC ring L=8", "skipped": "numba disabled"}
    py_kernel, py_set = _single_kernel.py_func, _set_active.py_func
    _kmc(_single_kernel, _set_active, 8, 10.0)
    t_nb, a = best_of(lambda: _kmc(_single_kernel, _set_active, 8, 2e3), repeat)
    t_py, b = best_of(lambda: _kmc(py_kernel, py_set, 8, 2e3), repeat)
    return {"kernel": "KMC ring L=8, t=2000", "numba_s": t_nb, "python_s": t_py, "identical": a == b}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)
    if not USE_NUMBA:
        print("numba is disabled (SLOWBOND_DISABLE_NUMBA); only the fallbacks are available")
    rows = [bench_sweep(args.repeat), bench_aberth(args.repeat), bench_kmc(args.repeat)]
    for r in rows:
        if "skipped" in r:
            print(f"{r['kernel']:<48s} skipped: {r['skipped']}")
            continue
        slow = r.get("numpy_s", r.get("python_s"))
        print(f"{r['kernel']:<48s} numba {r['numba_s']:8.4f}s  fallback {slow:8.4f}s  "
              f"speedup {slow / r['numba_s']:7.1f}x  identical={r['identical']}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
