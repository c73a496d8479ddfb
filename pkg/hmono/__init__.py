"""Numerical certification toolkit for h-monotone transport maps under power-like costs."""

__version__ = "0.1.0"
