"""Pipeline nodes - assemble the nilsoliton equations, solve them, build the Einstein extension."""

import logging
from typing import Any, Dict

from nilsolv.core.errors import NilsolvError, PreconditionError
from nilsolv.core.state import CaseState
from nilsolv.freelie import build_algebra
from nilsolv.metric import abelian_extension, admissible_metric, eigen_constants, rank_one_extension
from nilsolv.nilsoliton.equations import assemble_equations
from nilsolv.nilsoliton.solver import EinsteinNilradical, solve_equations

logger = logging.getLogger(__name__)


def _failed(state: CaseState, error: NilsolvError) -> CaseState:
    logger.warning("f(%d,%d): %s", state["m"], state["p"], error)
    return {**state, "stage": "failed", "error": str(error), "error_kind": error.kind, "next_node": "end"}


def assemble_node(state: CaseState) -> CaseState:
    """Symbolic Ricci form and equation system for the surviving case."""
    try:
        system = assemble_equations(state["m"], state["p"], state.get("max_dim"))
    except NilsolvError as e:
        return _failed(state, e)
    return {**state, "system": system, "stage": "assembled", "next_node": "solve"}


def solve_node(state: CaseState) -> CaseState:
    try:
        outcome = solve_equations(state["system"])
    except NilsolvError as e:
        return _failed(state, e)
    next_node = "extend" if isinstance(outcome, EinsteinNilradical) else "end"
    return {**state, "outcome": outcome, "stage": "solved", "next_node": next_node}


def describe_extension(outcome: EinsteinNilradical, max_dim=None) -> Dict[str, Any]:
    """Rank-one solvable extension of an Einstein nilradical, checked to be Einstein.

    Raises PreconditionError when the extended metric is not Einstein.
    """
    alg = build_algebra(outcome.m, outcome.p, max_dim)
    g = admissible_metric(alg, outcome.params)
    ext = abelian_extension(alg, g) if outcome.p == 1 else rank_one_extension(alg, g, outcome.C)
    if not ext.is_einstein():
        raise PreconditionError(f"rank-one extension of f({outcome.m},{outcome.p}) is not Einstein")
    tr, _ = eigen_constants(alg)
    return {
        "C": ext.C,
        "c_hat": ext.c_hat,
        "h_norm2": ext.h_norm2,
        "einstein_constant": ext.einstein_constant,
        "dim": ext.dim,
        "field": ext.domain,
        "trace_phi": tr,
        "is_einstein": True,
    }


def extend_node(state: CaseState) -> CaseState:
    try:
        extension = describe_extension(state["outcome"], state.get("max_dim"))
    except NilsolvError as e:
        return _failed(state, e)
    return {**state, "extension": extension, "stage": "extended", "next_node": "end"}
