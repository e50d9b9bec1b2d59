"""Exact Euler calculus on simplicial complexes.

Constructible functions, characteristic cycles on embedded charts, PL Morse
evaluation, cosheaf gluing and global-quotient orbifolds, all over the
rationals.
"""
from .charts import EmbeddedChart, LagrangianCycleTable, cc, cc_inverse, intersect_zero_section
from .complex import OpenSet, SimplicialComplex, SubdivisionMap, barycentric_subdivision, euler_char_cc
from .constructible import ConstructibleFunction, euler_integral, extend_by_zero, pullback_subdivision
from .morse import VertexOrder, local_index, morse_evaluate

__all__ = [
    "ConstructibleFunction", "EmbeddedChart", "LagrangianCycleTable", "OpenSet",
    "SimplicialComplex", "SubdivisionMap", "VertexOrder", "barycentric_subdivision", "cc",
    "cc_inverse", "euler_char_cc", "euler_integral", "extend_by_zero", "intersect_zero_section",
    "local_index", "morse_evaluate", "pullback_subdivision",
]
