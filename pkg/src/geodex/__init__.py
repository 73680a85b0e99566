"""Digraphs of excess one: verification, arithmetic feasibility and search."""

from .arithmetic import FactoredSpectrum, IntPoly, moore_bound, moore_bound_mod
from .automorphism import PermutationVector, VertexPermutation
from .canon import canonical_form
from .digraph import Digraph, excess_profile, load_digraph, outlier_map, store_digraph
from .errors import CheckpointError, DigraphFormatError, GeodexError, NotAutomorphism, NotExcessOne
from .report import FeasibilityReport, ReasonKind, Verdict
from .search import SearchConfig, SearchResult, search_excess_one

__all__ = [
    "CheckpointError",
    "Digraph",
    "DigraphFormatError",
    "FactoredSpectrum",
    "FeasibilityReport",
    "GeodexError",
    "IntPoly",
    "NotAutomorphism",
    "NotExcessOne",
    "PermutationVector",
    "ReasonKind",
    "SearchConfig",
    "SearchResult",
    "Verdict",
    "VertexPermutation",
    "canonical_form",
    "excess_profile",
    "load_digraph",
    "moore_bound",
    "moore_bound_mod",
    "outlier_map",
    "search_excess_one",
    "store_digraph",
]
