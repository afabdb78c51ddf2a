"""Free nilpotent Lie algebras - Hall basis, structure constants, derivations and automorphisms."""

from .words import LieWord, content, mobius, witt_dimension, witt_dimensions, witt_table, dimension
from .hall import HallTree, hall_basis
from .algebra import Element, FreeLieAlgebra, build_algebra, bracket, normal_form
from .operators import (
    LinearOperator,
    ad,
    canonical_derivation,
    elementary,
    extend_automorphism,
    extend_derivation,
    permutation_matrix,
)
from .named import chain, e, iota, is_lie_invariant, lie_invariant, q, r, theta, theta_power, u, z

__all__ = [
    "LieWord", "content", "mobius", "witt_dimension", "witt_dimensions", "witt_table", "dimension",
    "HallTree", "hall_basis",
    "Element", "FreeLieAlgebra", "build_algebra", "bracket", "normal_form",
    "LinearOperator", "ad", "canonical_derivation", "elementary", "extend_automorphism",
    "extend_derivation", "permutation_matrix",
    "chain", "e", "iota", "is_lie_invariant", "lie_invariant", "q", "r", "theta", "theta_power", "u", "z",
]
