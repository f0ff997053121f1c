"""Exact and Monte Carlo toolkit for interchange processes on weighted graphs."""

__version__ = "0.1.0"
