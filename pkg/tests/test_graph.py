from dataclasses import replace

import pytest
from langgraph.graph import END
from sympy.polys.domains import QQ

from nilsolv.cone import Screened
from nilsolv.core.errors import DomainError
from nilsolv.graph import Classifier, classify, route_next_node
from nilsolv.metric import SolvableExtension
from nilsolv.nilsoliton import extend_node


@pytest.fixture(scope="module")
def classifier():
    return Classifier(workers=2)


@pytest.mark.parametrize(
    "state, expected",
    [({"next_node": "end"}, END), ({"next_node": "solve"}, "solve"), ({}, END)],
)
def test_route_next_node(state, expected):
    assert route_next_node(state) == expected


def test_einstein_case_reaches_extension(classifier):
    state = classifier.run_case(2, 4)
    assert state["stage"] == "extended"
    assert state["outcome"].C == QQ(1, 16)
    assert state["extension"]["is_einstein"]
    assert state["error"] is None


def test_screened_case_stops_early(classifier):
    state = classifier.run_case(6, 3)
    assert state["stage"] == "screened"
    assert isinstance(state["outcome"], Screened)
    assert state.get("system") is None


def test_resource_failure_is_recorded():
    state = Classifier(workers=1, max_dim=5).run_case(2, 4)
    assert state["stage"] == "failed"
    assert state["error_kind"] == "resource"


def test_classify_small_grid():
    report = classify(3, 3, workers=2)
    assert len(report.cases) == 6
    assert report.einstein == [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)]
    assert report.not_einstein == []
    assert report.failed == []
    assert report.case(3, 2)["outcome"].C == QQ(1, 6)
    with pytest.raises(DomainError):
        report.case(4, 1)


def test_classify_mixed_grid():
    report = classify(6, 3, workers=4)
    assert (6, 3) in report.screened
    assert (5, 3) in report.einstein


def test_classify_rejects_empty_range():
    with pytest.raises(DomainError):
        classify(1, 3)


def test_extension_failure_is_recorded(classifier, monkeypatch):
    monkeypatch.setattr(SolvableExtension, "is_einstein", lambda self: False)
    state = classifier.run_case(2, 2)
    assert state["stage"] == "failed"
    assert state["error_kind"] == "precondition"
    assert state["extension"] is None


def test_extend_node_rejects_wrong_constant(classifier):
    solved = classifier.run_case(2, 3)
    wrong = {**solved, "outcome": replace(solved["outcome"], C=solved["outcome"].C * 2), "extension": None}
    state = extend_node(wrong)
    assert state["stage"] == "failed"
    assert state["error_kind"] == "precondition"
    assert state["next_node"] == "end"


@pytest.mark.slow
def test_classify_reproduces_verdicts():
    report = classify(5, 7, workers=4)
    low = [(m, p) for m in range(2, 6) for p in (1, 2)]
    assert sorted(report.einstein) == sorted(low + [(2, 3), (2, 4), (2, 5), (3, 3), (4, 3), (5, 3)])
    assert sorted(report.not_einstein) == [(2, 6), (2, 7), (3, 4)]
    assert report.failed == []
    assert len(report.screened) == 11
    for m, p in report.einstein:
        extension = report.case(m, p)["extension"]
        assert extension["is_einstein"]
        assert extension["h_norm2"] == extension["c_hat"] * extension["trace_phi"]
