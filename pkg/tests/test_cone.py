import pytest
from sympy.polys.domains import QQ

from nilsolv.cone import (
    F28_SEPARATOR,
    Screened,
    Survivor,
    canonical_type,
    cone_test,
    cone_vector,
    convex3_holds,
    convex4_inequalities,
    is_separating,
    parse_type,
    primitive,
    root_set,
    screen_free,
    screen_grid,
    screen_node,
    separating_vector_family,
)
from nilsolv.core.errors import DomainError, ResourceError
from nilsolv.freelie import witt_dimensions


def test_parse_type():
    t = parse_type("1,2,3;2,1,2")
    assert t.p == 3
    assert t.trace == 10
    assert str(t) == "1,2,3;2,1,2"
    assert parse_type("1/2,1;3,1").mu == (QQ(1, 2), QQ(1))


@pytest.mark.parametrize("text", ["1,2", "1,1;2,2", "0,1;1,1", "1,2;1", "1,2;1,0", "1,2;a,b"])
def test_parse_type_rejects(text):
    with pytest.raises(DomainError):
        parse_type(text)


def test_cone_vector():
    t = parse_type("1,2,3;2,1,2")
    assert cone_vector(t) == [-28, -4, 12]
    v = cone_vector(canonical_type(3, 4))
    assert sum(k * x for k, x in enumerate(v, start=1)) == 0


def test_root_set():
    t = parse_type("1,2,3;2,1,2")
    assert root_set(t) == [(-2, 1, 0), (-1, -1, 1)]


def test_feasible_type():
    cert = cone_test(parse_type("1,2,3;2,1,2"))
    assert cert.feasible
    assert cert.verdict == "feasible"
    assert all(v >= 0 for v in cert.T.values())
    assert cert.verify()


def test_infeasible_type_has_separator():
    t = canonical_type(6, 3)
    cert = cone_test(t)
    assert not cert.feasible
    assert is_separating(cert.a, root_set(t), cone_vector(t))
    assert cert.verify()


def test_type_without_roots():
    cert = cone_test(parse_type("1,3;1,1"))
    assert not cert.feasible
    assert cert.verify()


def test_scaling_does_not_change_verdict():
    t = canonical_type(2, 4)
    assert cone_test(t.scaled(QQ(3, 2))).feasible == cone_test(t).feasible


def test_survivors_up_to_class_four():
    assert screen_grid(6, 4) == [(2, 3), (2, 4), (3, 3), (3, 4), (4, 3), (5, 3)]


def test_two_generator_survivors():
    assert screen_grid(2, 8) == [(2, 3), (2, 4), (2, 5), (2, 6), (2, 7)]


def test_f28_separator():
    t = canonical_type(2, 8)
    v = cone_vector(t)
    assert is_separating(F28_SEPARATOR, root_set(t), v)
    assert sum(a * x for a, x in zip(F28_SEPARATOR, v)) == 72828
    assert separating_vector_family(2, 8)["explicit"] == tuple(QQ(a) for a in F28_SEPARATOR)


def test_hand_built_separators_are_orthogonal_to_v():
    t = canonical_type(3, 5)
    v = cone_vector(t)
    for name in ("generic", "ones"):
        a = separating_vector_family(3, 5)[name]
        assert sum(x * y for x, y in zip(a, v)) == 0


@pytest.mark.parametrize("m, holds", [(2, True), (3, True), (4, True), (5, True), (6, False), (7, False)])
def test_convex3_closed_form(m, holds):
    d = witt_dimensions(m, 3)
    assert convex3_holds(d) is holds
    assert isinstance(screen_free(m, 3), Survivor) is holds


def test_convex4_is_necessary():
    for m in (2, 3):
        assert all(convex4_inequalities(witt_dimensions(m, 4)))


@pytest.mark.parametrize("p", [1, 2])
def test_low_classes_survive_without_test(p):
    result = screen_free(7, p)
    assert isinstance(result, Survivor)
    assert result.certificate is None


def test_screen_ceiling():
    with pytest.raises(ResourceError):
        screen_free(2, 9, max_p=8)


def test_primitive():
    assert primitive([QQ(1, 2), QQ(-3, 4), 0]) == (2, -3, 0)


def test_screen_node_routes():
    survivor = screen_node({"m": 2, "p": 4, "stage": "start"})
    assert survivor["next_node"] == "assemble"
    screened = screen_node({"m": 6, "p": 3, "stage": "start"})
    assert screened["next_node"] == "end"
    assert isinstance(screened["outcome"], Screened)
    failed = screen_node({"m": 1, "p": 3, "stage": "start"})
    assert failed["stage"] == "failed"
    assert failed["error_kind"] == "domain"


GRID = [(m, p) for m in range(2, 11) for p in range(3, 11)] + [(2, p) for p in range(11, 15)]


@pytest.mark.parametrize("m, p", GRID)
def test_grid_type_has_verified_certificate(m, p):
    t = canonical_type(m, p)
    cert = cone_test(t)
    assert cert.verify()
    if not cert.feasible:
        assert is_separating(cert.a, root_set(t), cone_vector(t))


def test_grid_survivors():
    survivors = [(m, p) for m, p in GRID if isinstance(screen_free(m, p), Survivor)]
    assert sorted(survivors) == [(2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (3, 3), (3, 4), (4, 3), (5, 3)]


@pytest.mark.parametrize("m, p", [(2, 9), (4, 4), (3, 5)])
def test_screened_cases_carry_separators(m, p):
    result = screen_free(m, p)
    assert isinstance(result, Screened)
    assert not result.certificate.feasible
    assert result.certificate.verify()
