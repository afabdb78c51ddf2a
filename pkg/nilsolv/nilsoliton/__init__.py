"""Nilsoliton package - symbolic equations, exact solving and certificates."""

from .monomials import MonomialVariable, format_relation, relations
from .equations import Equation, EquationSystem, assemble_equations, combine, evaluate, named_vectors
from .roots import minimal_polynomial, real_roots
from .solver import (
    ClassificationOutcome,
    EinsteinNilradical,
    LinearSolution,
    NotEinstein,
    PositiveCombinationCertificate,
    UnivariateNoPositiveRoot,
    eliminate,
    positive_combination,
    solve_equations,
    univariate_certificate,
    verify_combination,
)
from .node import assemble_node, describe_extension, extend_node, solve_node

__all__ = [
    "MonomialVariable", "format_relation", "relations",
    "Equation", "EquationSystem", "assemble_equations", "combine", "evaluate", "named_vectors",
    "minimal_polynomial", "real_roots",
    "ClassificationOutcome", "EinsteinNilradical", "LinearSolution", "NotEinstein",
    "PositiveCombinationCertificate", "UnivariateNoPositiveRoot", "eliminate", "positive_combination",
    "solve_equations", "univariate_certificate", "verify_combination",
    "assemble_node", "describe_extension", "extend_node", "solve_node",
]
