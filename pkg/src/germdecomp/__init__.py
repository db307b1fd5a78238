"""Decomposition of surface germs z3^d = g(z1, z2) with one-dimensional
singular locus into metric-cone pieces, with numeric verification of the
model-metric scaling laws."""

__version__ = "0.1.0"

from .polynomials import MPoly, ParseError, PolyError, parse_poly
from .germ import CapabilityError, classify_input

__all__ = [
    "MPoly",
    "ParseError",
    "PolyError",
    "parse_poly",
    "CapabilityError",
    "classify_input",
]
