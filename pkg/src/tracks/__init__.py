"""Patterns and tracks in 2-dimensional complexes.

A toolbox for codimension-one pattern calculus on finite and truncated
2-complexes: construction and normalization of patterns, complexity over
ideal hyperbolic triangle structures, cut-and-paste surgery, complement
and ends analysis, bounded shortest-pattern search, and axis-crossing
combinatorics on truncated covers.
"""

from .complex2 import Complex2, CoverSpec, InputError, build_cyclic_cover, parse_complex
from .hypgeom import Complexity, HypStructure, assign_structure, chord_length, minimize_length, pattern_complexity
from .pattern import Pattern, PatternError, carried_index, component_split, is_normal, sidedness

__version__ = "0.1.0"

__all__ = [
    "Complex2",
    "CoverSpec",
    "Complexity",
    "HypStructure",
    "InputError",
    "Pattern",
    "PatternError",
    "assign_structure",
    "build_cyclic_cover",
    "carried_index",
    "chord_length",
    "component_split",
    "is_normal",
    "minimize_length",
    "parse_complex",
    "pattern_complexity",
    "sidedness",
]
