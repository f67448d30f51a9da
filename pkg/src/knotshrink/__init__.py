"""Shrinkage rates and shrinkage types of knots from reduced Alexander polynomials."""

__version__ = "0.1.0"
