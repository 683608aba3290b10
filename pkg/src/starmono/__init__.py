"""Exact and numerical tools for star-graph monodromy problems."""

__version__ = "0.1.0"
