"""Linear operators on f(m, p): canonical derivation, extensions of gl(m) and GL(m), ad."""

from typing import Any, Dict, List, Sequence

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import rational
from nilsolv.freelie.algebra import Element, FreeLieAlgebra, bracket


class LinearOperator:
    """Rational operator stored by columns: column j is the image of basis element j."""

    def __init__(self, algebra: FreeLieAlgebra, columns: Sequence[Element], name: str = ""):
        if len(columns) != algebra.dim:
            raise DomainError(f"expected {algebra.dim} columns, got {len(columns)}")
        self.algebra = algebra
        self.columns: List[Element] = list(columns)
        self.name = name

    @classmethod
    def from_matrix(cls, algebra: FreeLieAlgebra, matrix: DomainMatrix, name: str = "") -> "LinearOperator":
        rows = matrix.convert_to(QQ).to_list()
        columns = [
            Element(algebra, {i: rows[i][j] for i in range(algebra.dim)})
            for j in range(algebra.dim)
        ]
        return cls(algebra, columns, name)

    @property
    def matrix(self) -> DomainMatrix:
        dod: Dict[int, Dict[int, Any]] = {}
        for j, column in enumerate(self.columns):
            for i, value in column.items():
                dod.setdefault(i, {})[j] = value
        return DomainMatrix(dod, (self.algebra.dim, self.algebra.dim), QQ)

    def apply(self, x: Element) -> Element:
        out: Dict[int, Any] = {}
        for j, xj in x.items():
            for i, value in self.columns[j].items():
                out[i] = out.get(i, QQ(0)) + xj * value
        return Element(self.algebra, out)

    __call__ = apply

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.algebra, [self.apply(c) for c in other.columns])

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.algebra, [a + b for a, b in zip(self.columns, other.columns)])

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.algebra, [a - b for a, b in zip(self.columns, other.columns)])

    def __rmul__(self, scalar: Any) -> "LinearOperator":
        return LinearOperator(self.algebra, [c * scalar for c in self.columns])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return self.algebra.key == other.algebra.key and self.columns == other.columns

    __hash__ = None

    def trace(self) -> Any:
        return sum((c[j] for j, c in enumerate(self.columns)), QQ(0))

    def block(self, k: int) -> DomainMatrix:
        """Restriction to degree k, in the Hall basis of that degree."""
        indices = list(self.algebra.degree_ranges[k])
        position = {index: r for r, index in enumerate(indices)}
        rows: Dict[int, Dict[int, Any]] = {}
        for c, j in enumerate(indices):
            for i, value in self.columns[j].items():
                if i not in position:
                    raise DomainError(f"{self.name or 'operator'} does not preserve degree {k}")
                rows.setdefault(position[i], {})[c] = value
        return DomainMatrix(rows, (len(indices), len(indices)), QQ)

    def block_trace(self, k: int) -> Any:
        return sum((self.columns[j][j] for j in self.algebra.degree_ranges[k]), QQ(0))

    def preserves_degrees(self) -> bool:
        basis = self.algebra.basis
        return all(basis[i].degree == basis[j].degree for j, c in enumerate(self.columns) for i, _ in c.items())

    def is_derivation(self) -> bool:
        alg = self.algebra
        for a in range(alg.dim):
            for b in range(a + 1, alg.dim):
                x, y = alg.basis_element(a), alg.basis_element(b)
                lhs = self.apply(bracket(alg, x, y))
                rhs = bracket(alg, self.columns[a], y) + bracket(alg, x, self.columns[b])
                if lhs != rhs:
                    return False
        return True

    def is_homomorphism(self) -> bool:
        alg = self.algebra
        for a in range(alg.dim):
            for b in range(a + 1, alg.dim):
                lhs = self.apply(bracket(alg, alg.basis_element(a), alg.basis_element(b)))
                if lhs != bracket(alg, self.columns[a], self.columns[b]):
                    return False
        return True


def _square(matrix: Any, m: int) -> List[List[Any]]:
    """Rational m x m list of lists from a list, sympy Matrix or DomainMatrix."""
    if isinstance(matrix, DomainMatrix):
        rows = matrix.convert_to(QQ).to_list()
    elif hasattr(matrix, "tolist"):
        rows = matrix.tolist()
    else:
        rows = [list(row) for row in matrix]
    if len(rows) != m or any(len(row) != m for row in rows):
        raise DomainError(f"expected a {m}x{m} matrix")
    return [[rational(x) for x in row] for row in rows]


def canonical_derivation(alg: FreeLieAlgebra) -> LinearOperator:
    """Phi: multiplication by k on the degree-k part."""
    columns = [Element(alg, {t.index: QQ(t.degree)}) for t in alg.basis]
    return LinearOperator(alg, columns, name="Phi")


def extend_derivation(alg: FreeLieAlgebra, L: Any) -> LinearOperator:
    """rho(L): the unique derivation restricting to L on the generators."""
    rows = _square(L, alg.m)
    columns: List[Element] = []
    for tree in alg.basis:
        if tree.is_generator:
            i = tree.generator - 1
            columns.append(Element(alg, {j: rows[j][i] for j in range(alg.m)}))
        else:
            left = alg.basis_element(tree.left)
            right = alg.basis_element(tree.right)
            columns.append(
                bracket(alg, columns[tree.left], right) + bracket(alg, left, columns[tree.right])
            )
    return LinearOperator(alg, columns, name="rho")


def extend_automorphism(alg: FreeLieAlgebra, S: Any) -> LinearOperator:
    """R(S): the unique automorphism restricting to S on the generators."""
    rows = _square(S, alg.m)
    if not DomainMatrix(rows, (alg.m, alg.m), QQ).det():
        raise DomainError("S is singular")
    columns: List[Element] = []
    for tree in alg.basis:
        if tree.is_generator:
            i = tree.generator - 1
            columns.append(Element(alg, {j: rows[j][i] for j in range(alg.m)}))
        else:
            columns.append(bracket(alg, columns[tree.left], columns[tree.right]))
    return LinearOperator(alg, columns, name="R")


def ad(alg: FreeLieAlgebra, x: Element) -> LinearOperator:
    columns = [bracket(alg, x, alg.basis_element(j)) for j in range(alg.dim)]
    return LinearOperator(alg, columns, name="ad")


def elementary(m: int, i: int, j: int) -> List[List[Any]]:
    """E_ij: sends e_j to e_i (1-based labels)."""
    rows = [[QQ(0)] * m for _ in range(m)]
    rows[i - 1][j - 1] = QQ(1)
    return rows


def permutation_matrix(perm: Sequence[int]) -> List[List[Any]]:
    """Matrix sending e_i to e_perm[i-1]."""
    m = len(perm)
    rows = [[QQ(0)] * m for _ in range(m)]
    for i, target in enumerate(perm):
        rows[target - 1][i] = QQ(1)
    return rows
