import random
from fractions import Fraction

import pytest

from slowbond.exact_solver import (
    KNOWN_RING_DEGREES,
    ReconstructionError,
    cauchy_interpolate,
    current_rational,
    denominator_zeros,
    exact_current,
    in_window,
    null_vector,
)
from slowbond.model import Geometry, build_generator
from slowbond.series_engine import expand

F = Fraction


@pytest.fixture(scope="module")
def rings():
    return {L: current_rational(Geometry.ring(L)) for L in range(1, 5)}


def test_ring_one_closed_form(rings):
    cr = rings[1]
    assert cr.P.coeffs == (0, 1) and cr.Q.coeffs == (1, 1)
    zeros, near = denominator_zeros(cr)
    assert len(zeros) == 1 and complex(zeros[0]) == pytest.approx(-1)
    assert len(near) == 1


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_degrees(rings, L):
    cr = rings[L]
    assert cr.Q.degree == KNOWN_RING_DEGREES[L]
    assert cr.Q.coeffs[0] > 0 and cr.P.coeffs[0] == 0


@pytest.mark.parametrize("L", [2, 3, 4])
def test_taylor_matches_series_engine(rings, L):
    e = expand(Geometry.ring(L), L + 3, sites=[])
    assert list(rings[L].taylor(L + 3).coeffs) == e.c


def test_values_match_null_vector(rings):
    rnd = random.Random(3)
    for L in (2, 3, 4):
        gen = build_generator(Geometry.ring(L))
        for _ in range(2):
            r = F(rnd.randint(1, 97), rnd.randint(1, 53))
            assert rings[L](r) == exact_current(gen, r)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_unit_rate_current(rings, L):
    assert rings[L](F(1)) == F(L, 2 * (2 * L - 1))


def test_null_vector_normalised():
    gen = build_generator(Geometry.interval(2, 2, F(1, 2)))
    p = null_vector(gen, F(2, 5))
    assert sum(p) == 1 and all(v >= 0 for v in p)


def test_zeros_conjugate_closed(rings):
    zs = [complex(z) for z in denominator_zeros(rings[4])[0]]
    for z in zs:
        assert min(abs(z.conjugate() - w) for w in zs) < 1e-30 or abs(z.imag) < 1e-30


def test_near_origin_counts(rings):
    counts = [len(denominator_zeros(rings[L])[1]) for L in range(1, 5)]
    assert counts == [1, 2, 3, 4]


def test_interval_small():
    cr = current_rational(Geometry.interval(2))
    assert cr.Q.degree == 3
    assert list(cr.taylor(4).coeffs) == expand(Geometry.interval(2), 4, sites=[]).c


def test_cauchy_known_rational():
    f = lambda x: (1 + 2 * x - x**2) / (3 - x + 5 * x**3)  # noqa: E731
    xs = [F(i, 7) for i in range(1, 8)]
    P, Q = cauchy_interpolate(xs, [f(x) for x in xs], 2, 3, held_out=[(F(9, 2), f(F(9, 2)))])
    assert Q.coeffs[0] == 1
    assert all(P(x) / Q(x) == f(x) for x in xs)
    assert P.coeffs == (F(1, 3), F(2, 3), F(-1, 3))


def test_cauchy_degree_too_small():
    f = lambda x: 1 / (1 + x + x**2 + x**3)  # noqa: E731
    xs = [F(i, 5) for i in range(1, 6)]
    with pytest.raises(ReconstructionError):
        cauchy_interpolate(xs, [f(x) for x in xs], 2, 2, held_out=[(F(7), f(F(7)))])
    with pytest.raises(ValueError):
        cauchy_interpolate(xs[:2], [f(x) for x in xs[:2]], 2, 2)


def test_in_window():
    assert in_window(complex(0.6, 0.8))
    assert not in_window(complex(0.6, 0.81))
    assert in_window(complex(-1.5, 0.1), ("box", 2, 0.5))
    with pytest.raises(ValueError):
        in_window(0, ("annulus", 1))


def test_size_limits():
    with pytest.raises(ValueError):
        current_rational(Geometry.ring(6))
