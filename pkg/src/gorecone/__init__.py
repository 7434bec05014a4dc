"""Tangent cones of Gorenstein non-complete-intersection monomial curves
in 4-dimensional affine space."""

__version__ = "0.1.0"
