import json
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from slowbond.exact_solver import exact_current
from slowbond.model import Geometry, build_generator
from slowbond.simulator import (
    PRNG_ID,
    SimRun,
    coupled_run,
    estimate_current,
    exact_ring_current_r1,
    finite_size_probe,
)


def within(res, exact, k=4.0):
    return abs(res.mean - float(exact)) <= k * res.stderr


def test_ring_one():
    res = estimate_current(SimRun(Geometry.ring(1), 0.5, 20_000, seed=1))
    assert within(res, Fraction(1, 3))
    assert res.stderr < 0.01
    assert res.meta["prng"] == PRNG_ID and len(res.batches) == 20


def test_blocked_bond_carries_nothing():
    res = estimate_current(SimRun(Geometry.ring(3), 0.0, 2_000, seed=2))
    assert res.mean == 0 and res.crossings == 0


@pytest.mark.parametrize("L,r", [(2, 0.3), (3, 0.7)])
def test_ring_against_exact(L, r):
    exact = exact_current(build_generator(Geometry.ring(L)), Fraction(r).limit_denominator())
    res = estimate_current(SimRun(Geometry.ring(L), r, 40_000, seed=L))
    assert within(res, exact)


def test_interval_against_exact():
    g = Geometry.interval(2, Fraction(3, 2), 1)
    exact = exact_current(build_generator(g), Fraction(1, 2))
    res = estimate_current(SimRun(g, 0.5, 40_000, seed=5))
    assert within(res, exact)


def test_homogeneous_ring():
    assert exact_ring_current_r1(3) == Fraction(3, 10)
    res = estimate_current(SimRun(Geometry.ring(3), 1.0, 40_000, seed=9))
    assert within(res, exact_ring_current_r1(3))


def test_same_seed_same_result():
    a = estimate_current(SimRun(Geometry.ring(2), 0.7, 2_000, seed=4))
    b = estimate_current(SimRun(Geometry.ring(2), 0.7, 2_000, seed=4))
    assert a.batches == b.batches


def test_fallback_matches_numba():
    code = ("import json; from slowbond.model import Geometry; "
            "from slowbond.simulator import SimRun, estimate_current; "
            "r = estimate_current(SimRun(Geometry.ring(3), 0.7, 3000, seed=11)); "
            "print(json.dumps([r.crossings, r.meta['backend']]))")
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, SLOWBOND_DISABLE_NUMBA=flag)
        p = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outs.append(json.loads(p.stdout))
    assert outs[0][0] == outs[1][0]
    assert outs[0][1] != outs[1][1]


def test_argument_checks():
    with pytest.raises(ValueError):
        estimate_current(SimRun(Geometry.ring(2), 0.5, 1000, n_batches=10))
    with pytest.raises(ValueError):
        SimRun(Geometry.ring(2), -0.1, 10)
    with pytest.raises(ValueError):
        estimate_current(SimRun(Geometry.ring(2), 0.5, 10, t_burn=20))
    with pytest.raises(ValueError):
        coupled_run(3, 11, 0.5, 10)


@pytest.mark.parametrize("zeta0", ["empty", "step", "full"])
def test_coupling_holds(zeta0):
    for seed in range(5):
        res = coupled_run(3, 12, 0.6, 40.0, seed=seed, zeta0=zeta0, debug=True)
        assert res.holds()
        assert np.all(np.diff(res.N_eta) >= 0)


def test_coupling_custom_zeta():
    W = 8
    z = np.zeros(2 * W, dtype=np.int8)
    z[::2] = 1
    res = coupled_run(2, W, 0.4, 30.0, seed=3, zeta0=z, zeta_left_fill=1, debug=True)
    assert res.holds() and res.N_tau[-1] > 0


def test_finite_size_probe():
    rows = finite_size_probe([1, 2], 1.0, 3_000, seeds=(0, 1))
    assert [L for L, _, _ in rows] == [1, 2]
    assert all(err > 0 for _, _, err in rows)
    assert abs(rows[0][1] - 0.5) < 0.05
