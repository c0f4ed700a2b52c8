from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slowbond.algebra import (
    FloatSeries,
    Polynomial,
    RationalSeries,
    SingularSeriesError,
    as_fraction,
    decimal_matches,
    format_rational,
    match_roots,
    mobius_compose,
    mobius_r_of_u,
    mobius_u_of_r,
    parse_rational,
    poly_gcd,
    poly_roots,
    round_decimal,
    series_arith,
    series_exp,
    series_log,
    series_reciprocal,
    truncate_decimal,
)

F = Fraction
small_q = st.fractions(min_value=-5, max_value=5, max_denominator=30)


def series_st(nonzero_const=False, zero_const=False):
    head = (small_q.filter(lambda q: q != 0) if nonzero_const
            else st.just(F(0)) if zero_const else small_q)
    return st.builds(lambda h, t: RationalSeries([h] + t), head, st.lists(small_q, min_size=12, max_size=12))


# -- rationals ------------------------------------------------------------------------


def test_rational_serialization_round_trip():
    q = F(-19, 16)
    assert format_rational(q) == "-19/16"
    assert parse_rational("-19/16") == q
    assert parse_rational("0.5") == F(1, 2)
    assert format_rational(0) == "0/1"
    assert as_fraction("3/6") == F(1, 2)


def test_truncate_and_round():
    assert truncate_decimal(F(19, 16), 20) == "1.18750000000000000000"
    assert truncate_decimal(F(-2, 3), 4) == "-0.6666"
    assert round_decimal(F(-2, 3), 4) == "-0.6667"
    assert round_decimal(F(-623046875, 10**9), 8) == "-0.62304688"
    assert decimal_matches(F(-2, 3), "-0.6667", ulps=1)
    assert not decimal_matches(F(-2, 3), "-0.6669", ulps=1)


# -- series -----------------------------------------------------------------------------


def test_difference_of_squares():
    a = RationalSeries([1, 1, 0])
    b = RationalSeries([1, -1, 0])
    assert series_arith(a, b, "mul").coeffs == (1, 0, -1)


def test_common_order_truncation():
    a = RationalSeries([1, 2, 3, 4])
    b = RationalSeries([1, 1])
    assert series_arith(a, b, "add").coeffs == (2, 3)


def test_additive_inverse(J16):
    z = series_arith(J16, -J16, "add")
    assert all(c == 0 for c in z)


def test_w_series_constant_term(J16):
    w = FloatSeries([mpmath.mpf("1.5437"), 1], 256, J16.order) * J16
    assert w[0] == 0


def test_geometric_reciprocal():
    assert series_reciprocal(RationalSeries([1, -1]), 4).coeffs == (1,) * 5


def test_reciprocal_singular():
    with pytest.raises(SingularSeriesError):
        series_reciprocal(RationalSeries([0, 1]))


def test_reciprocal_of_quarter_minus_J(J16):
    u = series_reciprocal(mpmath.mpf(1) / 4 - J16)
    assert u[0] == 4


def test_log_geometric():
    s = series_log(series_reciprocal(RationalSeries([1, -1]), 3))
    assert s.coeffs == (0, 1, F(1, 2), F(1, 3))


def test_exp_of_a_over_one_minus_r():
    with mpmath.workprec(256):
        a = FloatSeries([1] * 3, 256)
        e = series_exp(a)
        E = mpmath.e
        assert [mpmath.almosteq(x, y, 2**-240) for x, y in zip(e, [E, E, 1.5 * E])] == [True] * 3


def test_exp_log_round_trip_on_w_series(J16):
    with mpmath.workprec(128):
        J = J16.to_float(128)
        w = FloatSeries([mpmath.mpf("1.5437"), 1], 128, J.order) * (mpmath.mpf(1) / 4 - J)
        back = series_exp(series_log(w))
        assert max(abs(x - y) for x, y in zip(back, w)) < mpmath.mpf(10) ** -30


@settings(max_examples=40, deadline=None)
@given(series_st(), series_st())
def test_ring_identities(a, b):
    assert series_arith(a, b, "mul") == series_arith(b, a, "mul")
    assert series_arith(series_arith(a, b, "add"), b, "sub") == a


@settings(max_examples=40, deadline=None)
@given(series_st(nonzero_const=True))
def test_reciprocal_involution(a):
    assert series_reciprocal(series_reciprocal(a)) == a
    prod = a * series_reciprocal(a)
    assert prod.coeffs == (1,) + (0,) * a.order


@settings(max_examples=25, deadline=None)
@given(series_st(zero_const=True))
def test_exp_log_inverse_exact(a):
    assert series_log(series_exp(a)) == a


@settings(max_examples=15, deadline=None)
@given(series_st(zero_const=True))
def test_exp_log_inverse_float(a):
    p = 128
    f = a.to_float(p)
    with mpmath.workprec(p):
        back = series_log(series_exp(f))
        assert max(abs(x - y) for x, y in zip(back, f)) < mpmath.mpf(2) ** (-p // 2)


# -- fractional linear map --------------------------------------------------------------


def test_mobius_identity_series():
    s = mobius_compose(RationalSeries([0, 1, 0, 0, 0]), F(-3, 2))
    # r(u) = (-3/2) u / (1 + (3/2)(1 - u)): ratio -3/5
    assert s.coeffs == (0, F(-3, 5), F(-9, 25), F(-27, 125), F(-81, 625))


def test_mobius_constant_unchanged():
    assert mobius_compose(RationalSeries([7, 0, 0]), F(-3, 2)).coeffs == (7, 0, 0)


def test_mobius_inverse_pair():
    r1 = F(-3, 2)
    u = F(7, 10)
    assert mobius_u_of_r(mobius_r_of_u(u, r1), r1) == u
    assert mobius_r_of_u(F(1), r1) == r1


def test_mobius_compose_matches_pointwise():
    a = RationalSeries([F(1, n + 1) for n in range(30)])
    r1 = F(-3, 2)
    comp = mobius_compose(a, r1)
    u = F(1, 20)
    r = mobius_r_of_u(u, r1)
    lhs = sum(c * u**k for k, c in enumerate(comp.coeffs))
    rhs = sum(c * r**k for k, c in enumerate(a.coeffs))
    assert abs(float(lhs - rhs)) < 1e-25


def test_mobius_degenerate():
    with pytest.raises(ValueError):
        mobius_compose(RationalSeries([0, 1]), 0)


# -- polynomials and roots -----------------------------------------------------------


def test_poly_arithmetic_and_gcd():
    p = Polynomial([0, 1]) * Polynomial([1, 1])
    q = Polynomial([1, 1]) * Polynomial([2, 0, 1])
    assert p.degree == 2
    g = poly_gcd(p, q)
    assert g.monic() == Polynomial([1, 1])


def test_roots_factored():
    zs = poly_roots(Polynomial([0, 1, 1]), 128)
    assert [complex(z) for z in zs] == pytest.approx([-1, 0])


def test_roots_linear():
    (z,) = poly_roots(Polynomial([1, 1]), 128)
    assert complex(z) == pytest.approx(-1)


def test_roots_residual_contract():
    p = Polynomial([F(k % 7 - 3, k + 1) for k in range(25)])
    res = poly_roots(p, 200, full=True)
    assert len(res.roots) == p.degree == 23
    assert res.max_residual < 2.0 ** -100


def test_roots_sorted():
    zs = [complex(z) for z in poly_roots(Polynomial([3, -1, 4, 1, -5, 9]), 128)]
    assert zs == sorted(zs, key=lambda z: (z.real, z.imag))


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=7), st.lists(st.integers(-9, 9), min_size=3, max_size=7))
def test_roots_of_product(a, b):
    a[-1] = a[-1] or 1
    b[-1] = b[-1] or 1
    a[0] = a[0] or 2
    b[0] = b[0] or 3
    p, q = Polynomial(a), Polynomial(b)
    bits = 192
    ra, rb, rab = poly_roots(p, bits), poly_roots(q, bits), poly_roots(p * q, bits)
    # repeated roots are only resolved to about half the working precision
    assert match_roots(rab, ra + rb, 1e-20)


def test_roots_degree_zero():
    with pytest.raises(ValueError):
        poly_roots(Polynomial([3]))
