"""Certified computations for weighted inequalities on logarithmic coefficients
of univalent functions."""

__version__ = "0.1.0"
