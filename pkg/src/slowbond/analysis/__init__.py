"""Series analysis of the current: pole location, fits, approximant, asymptotics."""

from ._common import FitReport, PoleEstimate, as_float_series, table_series
from .approximant import KApproximant, gamma_hat_contour, k_approximant, real_crossings, x_hat
from .asymptotics import asymptotic_check, exp_singular_coeffs, mean_field_current
from .fits import (
    coefficient_growth,
    cosine_model,
    fit_cosine,
    fit_growth_model,
    fit_reciprocal_growth,
    reciprocal_coeffs,
    x_series,
)
from .poles import MOBIUS_ROOT, SECOND_DIFFERENCE, default_r0_grid, oscillation, pole_method1, pole_method2

__all__ = [
    "FitReport",
    "PoleEstimate",
    "as_float_series",
    "table_series",
    "KApproximant",
    "gamma_hat_contour",
    "k_approximant",
    "real_crossings",
    "x_hat",
    "asymptotic_check",
    "exp_singular_coeffs",
    "mean_field_current",
    "coefficient_growth",
    "cosine_model",
    "fit_cosine",
    "fit_growth_model",
    "fit_reciprocal_growth",
    "reciprocal_coeffs",
    "x_series",
    "MOBIUS_ROOT",
    "SECOND_DIFFERENCE",
    "default_r0_grid",
    "oscillation",
    "pole_method1",
    "pole_method2",
]
