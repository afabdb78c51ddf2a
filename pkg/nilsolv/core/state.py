"""Shared state for the nilsolv case pipeline."""

from typing import Any, Dict, Literal, Optional, TypedDict


class CaseState(TypedDict, total=False):
    """State passed between the pipeline nodes for one (m, p) case."""

    # Case
    m: int
    p: int
    max_dim: Optional[int]

    # Progress
    stage: Literal["start", "screened", "assembled", "solved", "extended", "failed"]
    next_node: Literal["screen", "assemble", "solve", "extend", "end"]

    # Results
    screen: Any  # Survivor or Screened
    system: Any  # EquationSystem
    outcome: Any  # ClassificationOutcome
    extension: Optional[Dict[str, Any]]  # c, c_hat, h_norm2, dim_g

    # Failure
    error: Optional[str]
    error_kind: Optional[str]
