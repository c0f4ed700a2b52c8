import cmath
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from slowbond.algebra import poly_roots
from slowbond.semi_infinite import (
    OMEGA1,
    OMEGA2,
    OnCurveError,
    SemiInfiniteCurrent,
    current_series,
    current_value,
    distance_to_gamma,
    gamma_curve,
    limit_current,
    q_explicit,
    q_recursive,
    region,
    zero_scaling_report,
)

F = Fraction


def test_small_q():
    assert q_explicit(0).coeffs == (1,)
    assert q_explicit(1).coeffs == (1, 1)
    assert q_explicit(2).coeffs == (1, 2, 2)


def test_recursion_agrees_to_200():
    for L in range(201):
        assert q_recursive(L) == q_explicit(L)


@pytest.mark.parametrize("L", [1, 7, 30])
def test_leading_coefficient_is_catalan(L):
    assert q_explicit(L).coeffs[-1] == F(comb(2 * L, L), L + 1)


@pytest.mark.parametrize("L", [1, 5, 10, 40])
def test_current_series_matches_bulk_limit(L):
    s = current_series(L, L + 4).coeffs
    # r(1 - r) through order L + 1
    assert list(s[: L + 2]) == [0, 1, -1] + [0] * (L - 1)
    assert s[L + 2] != 0


def test_series_examples():
    assert current_series(1, 3).coeffs == (0, 1, -1, 1)
    assert current_series(5, 6).coeffs == (0, 1, -1, 0, 0, 0, 0)
    assert current_series(10, 12).coeffs[12] != 0
    with pytest.raises(ValueError):
        current_series(0, 3)


def test_current_value_matches_series():
    s = current_series(3, 60)
    r = F(1, 5)
    approx = sum(float(c) * 0.2**k for k, c in enumerate(s.coeffs))
    assert float(current_value(3, r)) == pytest.approx(approx, rel=1e-14)
    assert complex(SemiInfiniteCurrent.of(3)(r)) == pytest.approx(approx)


POINTS = [(0, OMEGA1), (0.3, OMEGA1), (0.45, OMEGA1), (0.2 + 0.1j, OMEGA1), (0.8, OMEGA2), (1.5, OMEGA2)]


@pytest.mark.parametrize("r,tag", POINTS)
def test_regions_and_limits(r, tag):
    val, got = limit_current(r)
    assert got == tag == region(r)
    assert val == (r * (1 - r) if tag == OMEGA1 else 0.25)


def test_on_curve():
    z = complex(gamma_curve(7)[2])
    with pytest.raises(OnCurveError):
        region(z)
    with pytest.raises(OnCurveError):
        limit_current(0.5)


def test_gamma_curve_shape():
    pts = gamma_curve(400)
    assert np.allclose(np.abs(pts * (1 - pts)), 0.25)
    assert np.all(pts.real <= 0.5 + 1e-12)
    assert abs(min(pts.real) - (1 - np.sqrt(2)) / 2) < 1e-4
    left = (1 - cmath.sqrt(2)) / 2
    assert distance_to_gamma(left) < 1e-12
    assert distance_to_gamma(0) == pytest.approx(-left.real, rel=1e-9)


@pytest.mark.parametrize("r", [0.1, 0.3, 0.45, 0.2 + 0.1j])
def test_omega1_converges(r):
    errs = [abs(complex(current_value(L, r)) - r * (1 - r)) for L in (10, 20, 40)]
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("r", [0.8, 1.5, 0.5 + 0.5j])
def test_omega2_slow_approach(r):
    Ls = [20, 40, 80, 160]
    errs = [abs(complex(current_value(L, r)) - 0.25) for L in Ls]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    scaled = [L * e for L, e in zip(Ls, errs)]
    # about 1/L: L * error levels off
    assert max(scaled) / min(scaled) < 1.5


@pytest.mark.parametrize("L", [10, 40, 80])
def test_no_zeros_in_right_half_disc(L):
    zs = [complex(z) for z in poly_roots(q_explicit(L), 256)]
    # zeros stay outside Gamma, so the right half-disc inside it is free of poles
    assert all(region(z) == OMEGA2 for z in zs)
    assert not any(abs(z) <= 0.24 and z.real >= 0 for z in zs)
    assert all(min(abs(z.conjugate() - w) for w in zs) < 1e-20 for z in zs)


def test_scaling_report():
    rep = zero_scaling_report([20, 40, 80])
    assert 0.7 <= rep.p <= 1.3
    assert 0.35 <= rep.q <= 0.65
    assert set(rep.to_json()) >= {"p", "q", "L"}
    with pytest.raises(ValueError):
        zero_scaling_report([3])
