"""Published coefficient tables for the slow-bond current and densities.

Values are kept as the printed decimal strings so comparisons can be made
digit by digit.  ``CURRENT_COEFFS[k]`` is c_k; ``DENSITY_COEFFS[i][k]`` is the
coefficient of r**k in the density at site i (i = 1..5, k <= 16 - i).
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

CURRENT_COEFFS = (
    "0.00000000000000000000",
    "1.00000000000000000000",
    "-1.50000000000000000000",
    "1.18750000000000000000",
    "-0.77889901620370370370",
    "0.52961027553406380931",
    "-0.32787247554422253211",
    "0.22700745336484005616",
    "-0.13514784111152134747",
    "0.09696668201649961665",
    "-0.05607405058503243547",
    "0.04033294103506195933",
    "-0.02482314806701423240",
    "0.01477809455732788252",
    "-0.01328263357536883488",
    "0.00277198065020739725",
    "-0.00936905520626202337",
)

_DENSITY_ROWS = """
0.00000000 0.00000000 0.00000000 0.00000000 0.00000000
1.00000000 1.00000000 1.00000000 1.00000000 1.00000000
-0.75000000 -0.68750000 -0.65625000 -0.63671875 -0.62304688
0.45312500 0.40075231 0.37939743 0.36763019 0.36002612
-0.32345016 -0.31775049 -0.32035731 -0.32441081 -0.32884964
0.19113754 0.16723143 0.15934419 0.15807536 0.16042006
-0.13508488 -0.13527025 -0.14002291 -0.14544675 -0.15090756
0.08218276 0.07251374 0.06758191 0.06440565 0.06221118
-0.05412219 -0.05222456 -0.05418729 -0.05745286 -0.06108373
0.03743811 0.03658774 0.03602396 0.03505521 0.03382992
-0.01961547 -0.01492080 -0.01314674 -0.01296838 -0.01376695
0.01873543 0.02252206 0.02556734 0.02764994 0.02887908
-0.00544623 0.00051738 0.00480082 0.00795647
0.01025427 0.01536259 0.02003591
-0.00040069 0.00489313
0.00558944
"""


def _density_columns():
    rows = [line.split() for line in _DENSITY_ROWS.strip().splitlines()]
    cols = {i: [] for i in range(1, 6)}
    for row in rows:
        for i, s in enumerate(row, start=1):
            cols[i].append(s)
    return {i: tuple(v) for i, v in cols.items()}


DENSITY_COEFFS = _density_columns()


def current_table(precision: int = 256):
    """c_0..c_16 as mpmath floats (the printed 20-digit values)."""
    with mpmath.workprec(precision):
        return [mpmath.mpf(s) for s in CURRENT_COEFFS]


def current_table_exact() -> list[Fraction]:
    """The printed values read as exact decimals."""
    return [Fraction(s) for s in CURRENT_COEFFS]
