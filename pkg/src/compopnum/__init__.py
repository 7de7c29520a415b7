"""Numerical study of approximation-number decay for composition operators
on the Dirichlet space."""

__version__ = "0.1.0"
