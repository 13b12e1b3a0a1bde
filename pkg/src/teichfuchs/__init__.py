"""Exact arithmetic for Picard-Fuchs operators of genus-2 Teichmueller curves."""
from __future__ import annotations

from .numring import PadicQuad, PrimeContext, QuadNum
from .polyalg import AlgebraicPoint, Poly, RationalFunction, SeriesPrefix

__version__ = "0.1.0"

__all__ = [
    "AlgebraicPoint",
    "PadicQuad",
    "Poly",
    "PrimeContext",
    "QuadNum",
    "RationalFunction",
    "SeriesPrefix",
]
