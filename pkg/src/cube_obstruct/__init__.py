"""Sums of two cubes over cyclotomic Z_p-extensions and cyclic degree-p fields."""

__version__ = "0.1.0"
