"""Rewriting, normal forms and PBW bases for universal enveloping Rota-Baxter algebras."""

__version__ = "0.1.0"

from .terms import Letter, RBracket, R, StarContext, compare, deg_r, breadth, substitute, occurrences
from .algebra import Element, multiply, apply_r, leading, eq3_defect, eq4_element, eq5_delta
from .presentation import (BracketOracle, OracleIncomplete, PrePostLie, forced_oracle, validate,
                           doubling, check_doubling)
from .engine import RewriteSystem, match9, Bounds, enumerate_compositions, check_composition, check_gs

__all__ = [
    "Letter", "RBracket", "R", "StarContext", "compare", "deg_r", "breadth", "substitute", "occurrences",
    "Element", "multiply", "apply_r", "leading", "eq3_defect", "eq4_element", "eq5_delta",
    "BracketOracle", "OracleIncomplete", "PrePostLie", "forced_oracle", "validate", "doubling",
    "check_doubling", "RewriteSystem", "match9", "Bounds", "enumerate_compositions",
    "check_composition", "check_gs",
]
