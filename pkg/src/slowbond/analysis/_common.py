from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from ..algebra.series import DEFAULT_PRECISION, FloatSeries, RationalSeries
from ..tables import current_table


def as_float_series(J, precision: int = DEFAULT_PRECISION) -> FloatSeries:
    if isinstance(J, RationalSeries):
        return J.to_float(precision)
    if isinstance(J, FloatSeries):
        return J.to_float(max(J.precision, precision)) if J.precision < precision else J
    with mpmath.workprec(precision):
        return FloatSeries([mpmath.mpmathify(c) for c in J], precision)


def mpf_to_fraction(x) -> Fraction:
    """Exact value of a finite mpf."""
    p, q = mpmath.libmp.to_rational(mpmath.mpf(x)._mpf_)
    return Fraction(int(p), int(q))


def table_series(precision: int = DEFAULT_PRECISION) -> FloatSeries:
    """J_16 built from the published c_0..c_16."""
    return FloatSeries(current_table(precision), precision)


@dataclass
class FitReport:
    """Least-squares fit summary; residual_std = sqrt(RSS / dof)."""

    model: str
    params: dict
    window: tuple
    residual_std: float
    dof: int
    converged: bool = True
    residuals: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "params": dict(self.params),
            "window": list(self.window),
            "residual_std": self.residual_std,
            "dof": self.dof,
            "converged": self.converged,
        }


@dataclass
class PoleEstimate:
    r0: float
    method: str
    uncertainty: float
    low_confidence: bool = False
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.uncertainty > 0:
            raise ValueError("uncertainty must be positive")

    def to_json(self) -> dict:
        return {
            "r0": self.r0,
            "method": self.method,
            "uncertainty": self.uncertainty,
            "low_confidence": self.low_confidence,
            **self.details,
        }
