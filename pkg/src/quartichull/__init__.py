"""Semidefinite representations of convex hulls of plane quartic curves."""

from .poly import (
    BivarPoly,
    HomogForm3,
    ProjPoint,
    SupportLine,
    parse_poly,
    parse_homog,
    format_poly,
)

__version__ = "0.1.0"
