"""Twisted Alexander polynomials, Thurston norm bounds and fibering obstructions."""
from .fpgroup import BraidWord, Presentation, Word, braid_longitude, braid_to_presentation, zero_surgery
from .knot_io import parse_braid, parse_hom, parse_presentation, resolve_input, table_entry
from .reps import PermHom, SearchOptions, adjoint, build_representation, search_homs
from .twisted import (
    FiberingVerdict,
    InvariantReport,
    chain_complex,
    classical_alexander,
    compute_invariants,
    fibering_check,
)

__version__ = "0.1.0"

__all__ = [
    "BraidWord", "Presentation", "Word", "braid_longitude", "braid_to_presentation", "zero_surgery",
    "parse_braid", "parse_hom", "parse_presentation", "resolve_input", "table_entry",
    "PermHom", "SearchOptions", "adjoint", "build_representation", "search_homs",
    "FiberingVerdict", "InvariantReport", "chain_complex", "classical_alexander",
    "compute_invariants", "fibering_check",
]
