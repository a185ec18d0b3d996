"""Exact bialgebroids and Hopf algebroids over a noncommutative base, and their twists."""

from .algebra import Algebra, AlgebraMap
from .antipode import AntipodePair, check_hopf
from .bialgebroid import BialgebroidInstance, check_bialgebroid
from .report import Report
from .twist import Cocycle, check_cocycle, twist_structure, untwist_roundtrip, verify_main_theorem

__all__ = [
    "Algebra", "AlgebraMap", "AntipodePair", "BialgebroidInstance", "Cocycle", "Report",
    "check_bialgebroid", "check_cocycle", "check_hopf", "twist_structure", "untwist_roundtrip",
    "verify_main_theorem",
]
