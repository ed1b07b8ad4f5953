"""Exact curve-sequence toolkit on the five-punctured sphere."""

__version__ = "0.1.0"
