"""Exact series, exact small-system solutions, series analysis and kinetic
Monte Carlo for the totally asymmetric exclusion process with one slow bond."""

__version__ = "0.1.0"
