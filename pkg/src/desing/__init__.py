"""Exact idealistic spaces over the rationals and their resolution by coordinate blow-ups."""
from .charts import Chart, DivisorLabel, LabelMint
from .driver import Resolution, redsing, replay
from .groebner import IdealBasis, dimension, groebner, is_empty_variety
from .idealistic import IdealisticSpace, MarkedIdeal, delta, delta_along, is_permissible_center, singular_ideal
from .parsing import parse_poly
from .poly import Poly, format_poly
from .problem import ProblemFile, load_problem

__all__ = [
    "Chart", "DivisorLabel", "LabelMint", "Resolution", "redsing", "replay", "IdealBasis",
    "dimension", "groebner", "is_empty_variety", "IdealisticSpace", "MarkedIdeal", "delta",
    "delta_along", "is_permissible_center", "singular_ideal", "parse_poly", "Poly",
    "format_poly", "ProblemFile", "load_problem",
]
