"""Cone package - convex-cone screening of eigenvalue types."""

from .criterion import (
    F28_SEPARATOR,
    ConeCertificate,
    EigenvalueType,
    Root,
    canonical_type,
    cone_test,
    cone_vector,
    convex3_holds,
    convex4_inequalities,
    is_separating,
    parse_type,
    primitive,
    root_set,
    roots,
    separating_vector_family,
)
from .screen import Screened, ScreenResult, Survivor, screen_free, screen_grid
from .node import screen_node

__all__ = [
    "F28_SEPARATOR", "ConeCertificate", "EigenvalueType", "Root", "canonical_type", "cone_test",
    "cone_vector", "convex3_holds", "convex4_inequalities", "is_separating", "parse_type",
    "primitive", "root_set", "roots", "separating_vector_family",
    "Screened", "ScreenResult", "Survivor", "screen_free", "screen_grid", "screen_node",
]
