"""Bordered Floer morphism spaces over the strands algebra, computed combinatorially."""

from .pmc import PMCError, PointedMatchedCircle, SurgeryDisconnected, genus2_antipodal, genus2_split, torus, validate_pmc
from .strands import Algebra, AlgebraElement, StrandTerm, algebra_for

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraElement",
    "PMCError",
    "PointedMatchedCircle",
    "StrandTerm",
    "SurgeryDisconnected",
    "algebra_for",
    "genus2_antipodal",
    "genus2_split",
    "torus",
    "validate_pmc",
]
