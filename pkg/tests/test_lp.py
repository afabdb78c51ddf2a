import pytest
from sympy.polys.domains import QQ

from nilsolv.core import lp
from nilsolv.core.errors import DomainError

A_UB = [[-1, 5, 2, 5]]
B_UB = [5]
A_EQ = [[0, 3, 0, 1], [-1, 0, 1, 2]]
B_EQ = [2, 1]
COST = [-1, 5, 1, 4]


@pytest.mark.parametrize("engine", lp.ENGINES)
def test_minimize_mixed_constraints(engine):
    optimum, x = lp.minimize(COST, A_UB, B_UB, A_EQ, B_EQ, engine=engine)
    assert optimum == QQ(9, 2)
    assert lp.satisfies(x, A_UB, B_UB, A_EQ, B_EQ)


def test_tableau_drops_redundant_rows():
    optimum, x = lp.minimize([1, 0], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2], engine="tableau")
    assert optimum == 0
    assert x == [0, 1]


@pytest.mark.parametrize("engine", lp.ENGINES)
def test_infeasible_is_none(engine):
    assert lp.feasible_point([[1, 1]], [-1], engine=engine) is None


def test_unbounded_raises():
    with pytest.raises(DomainError):
        lp.minimize([-1, 0], [[1, -1]], [1], engine="tableau")


def test_feasible_point_is_checked():
    A_eq = [[-2, -1, 1], [1, -1, 0]]
    b_eq = [QQ(-1, 2), QQ(1, 3)]
    x = lp.feasible_point(A_eq, b_eq)
    assert x is not None
    assert lp.satisfies(x, A_eq=A_eq, b_eq=b_eq)


def test_unknown_engine():
    with pytest.raises(DomainError):
        lp.minimize([1], engine="scipy")


def test_mismatched_rows():
    with pytest.raises(DomainError):
        lp.minimize([1, 1], [[1]], [1])
