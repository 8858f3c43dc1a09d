"""Symbols of multiple polylogarithms via polygon dissections.

Exact computation of the symbol tensor of G/Li/H functions through maximal
dissections of rooted decorated polygons, a shuffle-tensor algebra with
projectors and a partition filtration, and integration of symbols back to
polylogarithmic expressions with numerically fixed kernel constants.
"""

from .alphabet import Alphabet, MultVector, NotFactorable, decompose, extend_alphabet
from .exact import MPoly, RatFunc, parse_poly, parse_ratfunc, poly_gcd
from .expr import FuncExpr, format_expr, parse_expr, symbol_of
from .polygon import Polygon, enumerate_maximal_dissections, polygon_symbol, recursive_symbol
from .tensor import Symbol, integrability_check, partitions_desc, project_partition, project_pi, shuffle

__all__ = [
    "Alphabet",
    "FuncExpr",
    "MPoly",
    "MultVector",
    "NotFactorable",
    "Polygon",
    "RatFunc",
    "Symbol",
    "decompose",
    "enumerate_maximal_dissections",
    "extend_alphabet",
    "format_expr",
    "integrability_check",
    "parse_expr",
    "parse_poly",
    "parse_ratfunc",
    "partitions_desc",
    "poly_gcd",
    "polygon_symbol",
    "project_partition",
    "project_pi",
    "recursive_symbol",
    "shuffle",
    "symbol_of",
]

__version__ = "0.1.0"
