"""Exact rational linear programs.

sympy's simplex runs first. Its answer is only used after an exact check in QQ
(x >= 0, A_ub x <= b_ub, A_eq x = b_eq); when the check fails, or sympy reports
infeasibility, a two-phase tableau with Bland's rule decides instead.
"""

import logging
from typing import Any, List, Optional, Sequence, Tuple

from sympy import Rational
from sympy.polys.domains import QQ
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, linprog

from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import rational

logger = logging.getLogger(__name__)

Row = Sequence[Any]

ENGINES = ("sympy", "tableau")


def _sym(q: Any) -> Rational:
    q = rational(q)
    return Rational(int(q.numerator), int(q.denominator))


def _dot(a: Sequence[Any], b: Sequence[Any]) -> Any:
    return sum((x * y for x, y in zip(a, b)), QQ(0))


def satisfies(x: Sequence[Any], A_ub: Sequence[Row] = (), b_ub: Row = (), A_eq: Sequence[Row] = (), b_eq: Row = ()) -> bool:
    """Exact feasibility of x in QQ."""
    return (
        all(v >= 0 for v in x)
        and all(_dot(row, x) <= b for row, b in zip(A_ub, b_ub))
        and all(_dot(row, x) == b for row, b in zip(A_eq, b_eq))
    )


class Tableau:
    """Dense simplex tableau over QQ; Bland's rule on entering and leaving variables."""

    def __init__(self, rows: List[List[Any]], rhs: List[Any], basis: List[int], width: int):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.width = width
        self.z: List[Any] = []
        self.z_rhs = QQ(0)

    def set_cost(self, cost: Sequence[Any]):
        """Reduced-cost row of min cost.x for the current basis."""
        self.z = list(cost)
        self.z_rhs = QQ(0)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                self.z = [zj - cb * aij for zj, aij in zip(self.z, self.rows[i])]
                self.z_rhs -= cb * self.rhs[i]

    def pivot(self, i: int, j: int):
        piv = self.rows[i][j]
        self.rows[i] = [a / piv for a in self.rows[i]]
        self.rhs[i] = self.rhs[i] / piv
        pivot_row = self.rows[i]
        for k, row in enumerate(self.rows):
            f = row[j]
            if k != i and f:
                self.rows[k] = [a - f * b for a, b in zip(row, pivot_row)]
                self.rhs[k] -= f * self.rhs[i]
        f = self.z[j] if self.z else 0
        if f:
            self.z = [a - f * b for a, b in zip(self.z, pivot_row)]
            self.z_rhs -= f * self.rhs[i]
        self.basis[i] = j

    def optimize(self, allowed: Sequence[bool]) -> bool:
        """Run to optimality; False when unbounded."""
        while True:
            entering = next((j for j in range(self.width) if allowed[j] and self.z[j] < 0), None)
            if entering is None:
                return True
            candidates = [
                (self.rhs[i] / row[entering], self.basis[i], i)
                for i, row in enumerate(self.rows)
                if row[entering] > 0
            ]
            if not candidates:
                return False
            _, _, leaving = min(candidates)
            self.pivot(leaving, entering)

    @property
    def objective(self) -> Any:
        return -self.z_rhs

    def point(self, n: int) -> List[Any]:
        x = [QQ(0)] * n
        for i, b in enumerate(self.basis):
            if b < n:
                x[b] = self.rhs[i]
        return x


def _tableau_minimize(c, A_ub, b_ub, A_eq, b_eq) -> Optional[Tuple[Any, List[Any]]]:
    n = len(c)
    n_slack = len(A_ub)
    specs = [(list(row), QQ(b), n + k) for k, (row, b) in enumerate(zip(A_ub, b_ub))]
    specs += [(list(row), QQ(b), None) for row, b in zip(A_eq, b_eq)]

    # slack columns, then one artificial column per row lacking a feasible slack
    needs_artificial = [slack is None or b < 0 for _, b, slack in specs]
    n_art = sum(needs_artificial)
    width = n + n_slack + n_art
    rows: List[List[Any]] = []
    rhs: List[Any] = []
    basis: List[int] = []
    art = n + n_slack
    for (coeffs, b, slack), artificial in zip(specs, needs_artificial):
        row = [QQ(v) for v in coeffs] + [QQ(0)] * (n_slack + n_art)
        if slack is not None:
            row[slack] = QQ(1)
        if b < 0:
            row, b = [-v for v in row], -b
        if artificial:
            row[art] = QQ(1)
            basis.append(art)
            art += 1
        else:
            basis.append(slack)
        rows.append(row)
        rhs.append(b)

    tab = Tableau(rows, rhs, basis, width)
    is_artificial = [j >= n + n_slack for j in range(width)]
    if n_art:
        tab.set_cost([QQ(1) if a else QQ(0) for a in is_artificial])
        tab.optimize([True] * width)
        if tab.objective > 0:
            return None
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if is_artificial[tab.basis[i]]:
                j = next((j for j in range(n + n_slack) if tab.rows[i][j]), None)
                if j is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, j)
            i += 1

    tab.set_cost([QQ(v) for v in c] + [QQ(0)] * (width - n))
    if not tab.optimize([not a for a in is_artificial]):
        raise DomainError("linear program is unbounded")
    return tab.objective, tab.point(n)


def _sympy_minimize(c, A_ub, b_ub, A_eq, b_eq) -> Optional[Tuple[Any, List[Any]]]:
    n = len(c)
    rows = [[_sym(v) for v in row] for row in A_ub] or [[Rational(0)] * n]
    rhs = [_sym(b) for b in b_ub] or [Rational(0)]
    kwargs = {}
    if A_eq:
        kwargs = {"A_eq": [[_sym(v) for v in row] for row in A_eq], "b_eq": [_sym(b) for b in b_eq]}
    optimum, x = linprog([_sym(v) for v in c], rows, rhs, **kwargs)
    return rational(optimum), [rational(v) for v in x]


def minimize(
    c: Row,
    A_ub: Sequence[Row] = (),
    b_ub: Row = (),
    A_eq: Sequence[Row] = (),
    b_eq: Row = (),
    engine: str = "sympy",
) -> Optional[Tuple[Any, List[Any]]]:
    """min c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.

    Returns (c.x, x) over QQ with x checked exactly, or None when infeasible.
    """
    if engine not in ENGINES:
        raise DomainError(f"unknown LP engine {engine!r}")
    n = len(c)
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise DomainError("constraint rows and right-hand sides differ in number")
    if any(len(row) != n for row in [*A_ub, *A_eq]):
        raise DomainError("constraint rows do not match the objective length")
    c = [rational(v) for v in c]
    A_ub = [[rational(v) for v in row] for row in A_ub]
    A_eq = [[rational(v) for v in row] for row in A_eq]
    b_ub = [rational(v) for v in b_ub]
    b_eq = [rational(v) for v in b_eq]

    if engine == "sympy":
        try:
            result = _sympy_minimize(c, A_ub, b_ub, A_eq, b_eq)
        except (InfeasibleLPError, UnboundedLPError):
            result = None
        if result is not None and satisfies(result[1], A_ub, b_ub, A_eq, b_eq):
            return _dot(c, result[1]), result[1]
        logger.debug("sympy simplex on %d variables gave no checked point; using the tableau", n)

    result = _tableau_minimize(c, A_ub, b_ub, A_eq, b_eq)
    if result is None:
        logger.debug("LP with %d variables, %d rows: infeasible", n, len(A_ub) + len(A_eq))
        return None
    if not satisfies(result[1], A_ub, b_ub, A_eq, b_eq):
        raise DomainError("simplex tableau returned an infeasible point")
    return result


def feasible_point(
    A_eq: Sequence[Row],
    b_eq: Row,
    A_ub: Sequence[Row] = (),
    b_ub: Row = (),
    engine: str = "sympy",
) -> Optional[List[Any]]:
    """Some x >= 0 with A_eq x = b_eq and A_ub x <= b_ub, minimizing sum(x)."""
    n = len(A_eq[0]) if A_eq else len(A_ub[0])
    result = minimize([QQ(1)] * n, A_ub, b_ub, A_eq, b_eq, engine=engine)
    return None if result is None else result[1]
