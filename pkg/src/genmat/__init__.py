"""Exact computations with words in generic 2x2 matrices over truncated polynomial rings."""

__version__ = "0.1.0"
