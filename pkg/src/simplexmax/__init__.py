"""Lattice enumeration, multilinear averages and exponent regions for simplex maximal operators."""

__version__ = "0.1.0"
