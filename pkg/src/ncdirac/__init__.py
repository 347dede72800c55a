"""Hodge-Dirac operators for q-Gaussian Schur and Fourier multiplier semigroups."""

__version__ = "0.1.0"
