"""Screen node - cone test of the canonical eigenvalue type before any symbolic work."""

import logging

from nilsolv.cone.screen import Screened, screen_free
from nilsolv.core.errors import NilsolvError
from nilsolv.core.state import CaseState

logger = logging.getLogger(__name__)


def screen_node(state: CaseState) -> CaseState:
    """Screen f(m, p); survivors move on to assembly."""
    m, p = state["m"], state["p"]
    try:
        result = screen_free(m, p)
    except NilsolvError as e:
        logger.warning("screening f(%d,%d) failed: %s", m, p, e)
        return {**state, "stage": "failed", "error": str(e), "error_kind": e.kind, "next_node": "end"}

    if isinstance(result, Screened):
        return {**state, "screen": result, "outcome": result, "stage": "screened", "next_node": "end"}

    return {**state, "screen": result, "stage": "screened", "next_node": "assemble"}
