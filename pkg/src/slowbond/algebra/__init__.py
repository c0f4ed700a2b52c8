"""Exact and multiprecision arithmetic used throughout the package."""

from .poly import Polynomial, poly_gcd
from .rational import as_fraction, decimal_matches, format_rational, parse_rational, round_decimal, truncate_decimal
from .roots import RootFindingError, match_roots, poly_roots
from .series import (
    DEFAULT_PRECISION,
    FloatSeries,
    RationalSeries,
    SingularSeriesError,
    mobius_compose,
    mobius_r_of_u,
    mobius_u_of_r,
    series_arith,
    series_exp,
    series_log,
    series_reciprocal,
)
