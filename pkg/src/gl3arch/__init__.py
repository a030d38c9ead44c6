"""Exact and numerical archimedean computations for GL(3) x GL(2)."""
__version__ = "0.1.0"
