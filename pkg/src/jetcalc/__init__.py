"""Exact computer algebra for jet invariants and Euler characteristics."""

__version__ = "0.1.0"
