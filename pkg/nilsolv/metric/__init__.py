"""Metric package - admissible inner products, Ricci forms and rank-one Einstein extensions."""

from .params import (
    BLOCK_SLOTS,
    BLOCKS,
    SLOT_DEGREE,
    SYMBOLIC,
    MetricParams,
    ParameterRing,
    is_covered,
    is_symbolic,
    required_slots,
)
from .admissible import Anchor, GradedInnerProduct, admissible_components, admissible_metric, anchors, v_basis, w_basis
from .ricci import MetricLieAlgebra, RicciForm, ricci_general, ricci_nilpotent, scalar_curvature
from .soliton import (
    Residual,
    SolvableExtension,
    abelian_extension,
    eigen_constants,
    nilsoliton_residual,
    nilsoliton_target,
    rank_one_extension,
    ricci_coefficient,
    theorem_presentation,
    trace_identity_check,
)

__all__ = [
    "BLOCK_SLOTS", "BLOCKS", "SLOT_DEGREE", "SYMBOLIC",
    "MetricParams", "ParameterRing", "is_covered", "is_symbolic", "required_slots",
    "Anchor", "GradedInnerProduct", "admissible_components", "admissible_metric", "anchors",
    "v_basis", "w_basis",
    "MetricLieAlgebra", "RicciForm", "ricci_general", "ricci_nilpotent", "scalar_curvature",
    "Residual", "SolvableExtension", "abelian_extension", "eigen_constants", "nilsoliton_residual",
    "nilsoliton_target", "rank_one_extension", "ricci_coefficient", "theorem_presentation",
    "trace_identity_check",
]
