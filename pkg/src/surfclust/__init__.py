"""Triangulated marked surfaces, their exchange quivers, and recovery of the surface from a quiver."""

__version__ = "0.1.0"

from .quiver import Quiver, QuiverError, automorphism_count, canonical_form, find_isomorphism, mutate
from .surface import SignatureError, SurfaceSig, classify_exceptions, edge_bound, is_valid, parse_sig, rank
from .triangulation import (
    Triangulation,
    TriangulationError,
    exchange_quiver,
    flip,
    is_maximal,
    predicted_edges,
    stats,
    surface_signature,
)
from .tagged import TaggedTriangulation, retag, tau, to_ordinary
from .builder import ExceptionSurface, build_max_connected
from .blocks import BlockDecomposition, enumerate_decompositions, is_unique
from .reconstruct import Ambiguous, NotInClass, Recovered, check_match1, recover, transport
from .explore import enumerate_triangulations, mutation_class, verify_sweep

__all__ = [
    "__version__",
    "Quiver",
    "QuiverError",
    "mutate",
    "find_isomorphism",
    "canonical_form",
    "automorphism_count",
    "SurfaceSig",
    "SignatureError",
    "parse_sig",
    "is_valid",
    "rank",
    "edge_bound",
    "classify_exceptions",
    "Triangulation",
    "TriangulationError",
    "exchange_quiver",
    "flip",
    "stats",
    "is_maximal",
    "predicted_edges",
    "surface_signature",
    "TaggedTriangulation",
    "tau",
    "to_ordinary",
    "retag",
    "build_max_connected",
    "ExceptionSurface",
    "BlockDecomposition",
    "enumerate_decompositions",
    "is_unique",
    "recover",
    "Recovered",
    "Ambiguous",
    "NotInClass",
    "transport",
    "check_match1",
    "enumerate_triangulations",
    "mutation_class",
    "verify_sweep",
]
