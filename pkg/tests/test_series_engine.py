from fractions import Fraction

import numpy as np
import pytest

from slowbond.algebra.rational import truncate_decimal
from slowbond.model import Geometry, build_generator
from slowbond.series_engine import (
    ResidualError,
    _check_residual,
    _ModPlan,
    coefficient_table,
    current_coeffs,
    density_coeffs,
    expand,
    modular_coefficients,
    validated_order,
)
from slowbond.tables import CURRENT_COEFFS

F = Fraction


def alternating(n):
    # r/(1+r) = r - r^2 + r^3 - ...
    return [F(0)] + [F((-1) ** (k + 1)) for k in range(1, n + 1)]


def test_p0_is_step_indicator():
    e = expand(Geometry.ring(3), 2, keep_vectors=True)
    p0 = e.p[0]
    assert p0[e.generator.absorbing_index()] == 1
    assert sum(p0) == 1 and sum(1 for v in p0 if v) == 1


def test_ring_one_vectors():
    e = expand(Geometry.ring(1), 3, keep_vectors=True)
    st = e.generator.states
    g = e.geometry
    i10 = int(st.index(1 << g.pos(0)))
    i01 = int(st.index(1 << g.pos(1)))
    # stationary vector (1/(1+r), r/(1+r))
    assert [p[i10] for p in e.p] == [1, -1, 1, -1]
    assert [p[i01] for p in e.p] == [0, 1, -1, 1]
    assert current_coeffs(e) == alternating(3)


def test_normalisation_ring_four():
    e = expand(Geometry.ring(4), 5, keep_vectors=True)
    assert sum(e.p[0]) == 1
    assert all(sum(p) == 0 for p in e.p[1:])


def test_low_order_current():
    c = expand(Geometry.ring(4), 4, sites=[]).c
    assert c[:4] == [0, 1, F(-3, 2), F(19, 16)]
    assert truncate_decimal(c[4], 20) == "-0.77889901620370370370"


def test_current_coeffs_from_vectors_agree():
    e = expand(Geometry.interval(2, 2, 1), 4, keep_vectors=True)
    assert current_coeffs(e) == e.c
    assert density_coeffs(e, 1) == e.d[1]


def test_density_examples():
    e = expand(Geometry.ring(6), 3, sites=[1, 2, 3, 4, 5])
    assert e.d[1][2] == F(-3, 4)
    assert e.d[5][1] == 1
    assert all(e.d[i][0] == 0 for i in range(1, 6))
    with pytest.raises(KeyError):
        density_coeffs(e, 6)


def test_validated_orders():
    assert validated_order(Geometry.ring(10)) == 10
    assert validated_order(Geometry.ring(10), 5, "local") == 5
    # the interval with unit boundary rates gains one order
    assert validated_order(Geometry.interval(8)) == 9
    assert validated_order(Geometry.interval(8, 2, 1)) == 8
    with pytest.raises(ValueError):
        validated_order(Geometry.ring(3), 0)


@pytest.mark.parametrize("L", [4, 6])
def test_L_stability(L):
    a = modular_coefficients(Geometry.ring(L), L, max_primes=200)[0]
    b = modular_coefficients(Geometry.ring(L + 1), L, max_primes=200)[0]
    assert a == b


@pytest.mark.parametrize("L", [3, 5])
def test_ring_interval_agree(L):
    ring = expand(Geometry.ring(L), L, sites=[]).c
    interval = expand(Geometry.interval(L), L, sites=[]).c
    assert ring == interval


def test_interval_rates_independence():
    tables = [expand(Geometry.interval(4, a, b), 3, sites=[]).c for a, b in
              [(1, 1), (2, 1), (F(3, 2), F(5, 4))]]
    assert tables[0] == tables[1] == tables[2]


@pytest.mark.parametrize("L", [2, 3])
def test_particle_hole_densities(L):
    e = expand(Geometry.interval(L, F(3, 2), F(3, 2)), 5)
    for i in e.geometry.sites:
        s = [a + b for a, b in zip(e.d[i], e.d[1 - i])]
        assert s == [1] + [0] * 5


def test_published_signs_alternate():
    vals = [Fraction(s) for s in CURRENT_COEFFS]
    assert all((v > 0) == (k % 2 == 1) for k, v in enumerate(vals) if k >= 1)


@pytest.mark.parametrize("g,order", [(Geometry.ring(6), 8), (Geometry.interval(3, 2, F(1, 3)), 6)])
def test_modular_matches_exact(g, order):
    sites = [1, 2]
    e = expand(g, order, sites=sites)
    c, d, primes = modular_coefficients(g, order, sites=sites)
    assert c == e.c
    assert d == e.d
    assert len(primes) >= 2


def test_modular_backends_identical():
    plan = _ModPlan(build_generator(Geometry.ring(5)), [1, 3])
    prime = 2147483629
    a = plan.run(prime, 6, True)
    b = plan.run(prime, 6, False)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_residual_check_detects_corruption():
    e = expand(Geometry.ring(3), 2, keep_vectors=True)
    from gmpy2 import mpq

    prev = [mpq(v.numerator, v.denominator) for v in e.p[1]]
    cur = [mpq(v.numerator, v.denominator) for v in e.p[2]]
    _check_residual(e.generator, prev, cur, exact=True)
    cur[3] += 1
    with pytest.raises(ResidualError):
        _check_residual(e.generator, prev, cur, exact=True)
    with pytest.raises(ResidualError):
        _check_residual(e.generator, prev, cur, exact=False)


def test_coefficient_table_flags():
    t = coefficient_table(Geometry.ring(3), 5)
    assert t.flagged() == [4, 5]
    js = t.to_json()
    assert js["c"][3]["exact"] == "19/16" and not js["c"][3]["geometry_dependent"]
    assert js["c"][5]["geometry_dependent"]
    assert set(js["d"]) == {"1", "2", "3"}
    assert js["d"]["1"][2]["geometry_dependent"] is False


def test_negative_order():
    with pytest.raises(ValueError):
        expand(Geometry.ring(2), -1)
