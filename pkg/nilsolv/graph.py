"""LangGraph pipeline classifying free nilpotent Lie algebras case by case."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from langgraph.graph import END, StateGraph

from config import WORKERS
from nilsolv.cone import screen_node
from nilsolv.core.errors import DomainError
from nilsolv.core.state import CaseState
from nilsolv.nilsoliton import assemble_node, extend_node, solve_node

logger = logging.getLogger(__name__)


def route_next_node(state: CaseState) -> str:
    """Route to next node based on state."""
    next_node = state.get("next_node", "end")
    if next_node == "end":
        return END
    return next_node


def create_case_graph():
    """screen -> assemble -> solve -> extend, any node may stop the case."""
    graph = StateGraph(CaseState)

    graph.add_node("screen", screen_node)
    graph.add_node("assemble", assemble_node)
    graph.add_node("solve", solve_node)
    graph.add_node("extend", extend_node)

    graph.set_entry_point("screen")

    graph.add_conditional_edges("screen", route_next_node, {"assemble": "assemble", END: END})
    graph.add_conditional_edges("assemble", route_next_node, {"solve": "solve", END: END})
    graph.add_conditional_edges("solve", route_next_node, {"extend": "extend", END: END})
    graph.add_edge("extend", END)

    return graph.compile()


@dataclass
class ClassificationReport:
    """Final states of every case, in (m, p) order."""

    cases: List[CaseState] = field(default_factory=list)

    def _with(self, verdict: str) -> List[Tuple[int, int]]:
        return [
            (c["m"], c["p"]) for c in self.cases
            if c.get("outcome") is not None and c["outcome"].verdict == verdict
        ]

    @property
    def einstein(self) -> List[Tuple[int, int]]:
        return self._with("einstein")

    @property
    def not_einstein(self) -> List[Tuple[int, int]]:
        return self._with("not_einstein")

    @property
    def screened(self) -> List[Tuple[int, int]]:
        return self._with("screened")

    @property
    def failed(self) -> List[CaseState]:
        return [c for c in self.cases if c.get("error")]

    def case(self, m: int, p: int) -> CaseState:
        for c in self.cases:
            if (c["m"], c["p"]) == (m, p):
                return c
        raise DomainError(f"f({m},{p}) is not part of this report")


class Classifier:
    """Runs (m, p) cases through the compiled graph, concurrently."""

    def __init__(self, workers: Optional[int] = None, max_dim: Optional[int] = None):
        self.workers = WORKERS if workers is None else workers
        self.max_dim = max_dim
        self.graph = create_case_graph()

    def _initial_state(self, m: int, p: int) -> CaseState:
        return {
            "m": m,
            "p": p,
            "max_dim": self.max_dim,
            "stage": "start",
            "next_node": "screen",
            "extension": None,
            "error": None,
            "error_kind": None,
        }

    def run_case(self, m: int, p: int) -> CaseState:
        return self.graph.invoke(self._initial_state(m, p))

    def run(self, cases: List[Tuple[int, int]]) -> ClassificationReport:
        states = [self._initial_state(m, p) for m, p in cases]
        results = self.graph.batch(states, config={"max_concurrency": max(1, self.workers)})
        report = ClassificationReport(sorted(results, key=lambda s: (s["m"], s["p"])))
        logger.info("classified %d cases: %d Einstein, %d not Einstein, %d screened, %d failed",
                    len(report.cases), len(report.einstein), len(report.not_einstein),
                    len(report.screened), len(report.failed))
        return report


def classify(m_max: int, p_max: int, workers: Optional[int] = None, max_dim: Optional[int] = None) -> ClassificationReport:
    """Every f(m, p) with 2 <= m <= m_max and 1 <= p <= p_max."""
    if m_max < 2 or p_max < 1:
        raise DomainError(f"need max m >= 2 and max p >= 1, got ({m_max}, {p_max})")
    cases = [(m, p) for m in range(2, m_max + 1) for p in range(1, p_max + 1)]
    return Classifier(workers, max_dim).run(cases)
