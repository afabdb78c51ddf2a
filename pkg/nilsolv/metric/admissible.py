"""Admissible inner products on f(m, p).

On each degree the Gram matrix is block diagonal over content classes, invariant under
the generator permutations, and compatible with adjoints: G rho(E_ji) = rho(E_ij)^T G.
The solutions of these linear conditions form a small family; the named squared norms
(anchors) pick one member.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from nilsolv.core.errors import DomainError, UnsupportedCaseError
from nilsolv.core.numbers import convert, rational
from nilsolv.freelie import (
    Element,
    FreeLieAlgebra,
    bracket,
    chain,
    elementary,
    extend_automorphism,
    extend_derivation,
    lie_invariant,
    permutation_matrix,
    r,
    u,
    z,
)
from nilsolv.metric.params import (
    BLOCK_SLOTS,
    SLOT_DEGREE,
    MetricParams,
    ParameterRing,
    required_slots,
)

logger = logging.getLogger(__name__)

Sparse = Dict[int, Dict[int, Any]]


@dataclass(frozen=True)
class Anchor:
    """slot = <left, right>."""

    slot: str
    left: Element
    right: Element


def v_basis(alg: FreeLieAlgebra) -> Tuple[Element, Element]:
    """([e_3, e_4], [e_2, e_5]) spanning V in degree 7."""
    return bracket(alg, chain(alg, 3), chain(alg, 4)), bracket(alg, chain(alg, 2), chain(alg, 5))


def w_basis(alg: FreeLieAlgebra) -> Tuple[Element, Element]:
    """([u, e_2], [I, e1]) spanning W in degree 7."""
    return bracket(alg, u(alg), chain(alg, 2)), bracket(alg, lie_invariant(alg), alg.generator(1))


def anchors(alg: FreeLieAlgebra, k: int) -> List[Anchor]:
    def norm(slot: str, x: Element) -> Anchor:
        return Anchor(slot, x, x)

    if k == 2:
        return [norm("lambda2", chain(alg, 2))]
    if k == 3:
        return [norm("xi2", chain(alg, 3))]
    if k == 4:
        out = [norm("sigma2", chain(alg, 4))]
        if alg.m == 3:
            out.append(norm("eta2", r(alg, 1, 2, 3)))
        return out
    if k == 5:
        return [norm("alpha2", chain(alg, 5)), norm("gamma2", u(alg))]
    if k == 6:
        return [norm("kappa2", chain(alg, 6)), norm("delta2", z(alg)), norm("theta2", lie_invariant(alg))]
    if k == 7:
        out = [norm("nu2", chain(alg, 7))]
        for prefix, (x1, x2) in (("v", v_basis(alg)), ("w", w_basis(alg))):
            out += [Anchor(f"{prefix}11", x1, x1), Anchor(f"{prefix}12", x1, x2), Anchor(f"{prefix}22", x2, x2)]
        return out
    raise UnsupportedCaseError(f"no anchors for degree {k}")


def _bilinear(N: Sparse, x: Element, y: Element) -> Any:
    total = QQ(0)
    for a, xa in x.items():
        row = N.get(a)
        if not row:
            continue
        for b, yb in y.items():
            if b in row:
                total += xa * row[b] * yb
    return total


@lru_cache(maxsize=32)
def _root_operators(alg: FreeLieAlgebra):
    """rho(E_ij) for every ordered pair i != j, keyed (i, j)."""
    m = alg.m
    return {
        (i, j): extend_derivation(alg, elementary(m, i, j))
        for i in range(1, m + 1) for j in range(1, m + 1) if i != j
    }


@lru_cache(maxsize=32)
def _permutation_operators(alg: FreeLieAlgebra):
    m = alg.m
    swap = [2, 1] + list(range(3, m + 1))
    cycle = list(range(2, m + 1)) + [1]
    perms = [swap] if swap == cycle else [swap, cycle]
    return [extend_automorphism(alg, permutation_matrix(p)) for p in perms]


def _degree_family(alg: FreeLieAlgebra, k: int) -> List[Sparse]:
    """Basis of the symmetric Gram matrices on degree k satisfying the admissibility equations."""
    indices = list(alg.degree_ranges[k])
    unknowns: Dict[Tuple[int, int], int] = {}
    for members in alg.classes.values():
        if alg.degree(members[0]) != k:
            continue
        for x, a in enumerate(members):
            for b in members[x:]:
                unknowns[(a, b)] = len(unknowns)

    def var(a: int, b: int) -> Optional[int]:
        return unknowns.get((a, b) if a <= b else (b, a))

    rows: Dict[Tuple, Dict[int, Any]] = {}

    def emit(row: Dict[int, Any]) -> None:
        row = {c: v for c, v in row.items() if v}
        if row:
            rows.setdefault(tuple(sorted(row.items())), row)

    def add(row: Dict[int, Any], column: Optional[int], value: Any) -> None:
        if column is not None:
            row[column] = row.get(column, QQ(0)) + value

    roots = _root_operators(alg)
    for (i, j), Y in roots.items():
        if i > j:
            continue
        X = roots[(j, i)]
        for c in indices:
            shifted = list(alg.basis[c].content)
            shifted[i - 1] -= 1
            shifted[j - 1] += 1
            for r_ in alg.classes.get(tuple(shifted), []):
                row: Dict[int, Any] = {}
                for s, x in X.columns[c].items():
                    add(row, var(r_, s), x)
                for s, y in Y.columns[r_].items():
                    add(row, var(s, c), -y)
                emit(row)

    for R in _permutation_operators(alg):
        for (a, b) in unknowns:
            row = {}
            for s, x in R.columns[a].items():
                for t, y in R.columns[b].items():
                    add(row, var(s, t), x * y)
            add(row, var(a, b), QQ(-1))
            emit(row)

    n = len(unknowns)
    if rows:
        matrix = DomainMatrix(dict(enumerate(rows.values())), (len(rows), n), QQ)
        vectors = matrix.nullspace().to_list()
    else:
        vectors = [[QQ(int(i == j)) for j in range(n)] for i in range(n)]

    family: List[Sparse] = []
    for vector in vectors:
        N: Sparse = {}
        for (a, b), col in unknowns.items():
            value = vector[col]
            if value:
                N.setdefault(a, {})[b] = value
                N.setdefault(b, {})[a] = value
        family.append(N)
    logger.debug("f(%d,%d) degree %d: %d unknowns, %d equations, family of dimension %d",
                 alg.m, alg.p, k, n, len(rows), len(family))
    return family


@lru_cache(maxsize=32)
def admissible_components(alg: FreeLieAlgebra) -> Dict[str, Sparse]:
    """Slot -> rational symmetric matrix N_slot; the degree-k Gram is sum(value * N_slot)."""
    required_slots(alg.m, alg.p)
    components: Dict[str, Sparse] = {}
    for k in range(2, alg.p + 1):
        family = _degree_family(alg, k)
        named = anchors(alg, k)
        if len(family) != len(named):
            raise UnsupportedCaseError(
                f"degree {k} of {alg}: {len(family)} free constants but {len(named)} anchors"
            )
        A = [[_bilinear(N, anchor.left, anchor.right) for N in family] for anchor in named]
        try:
            inverse = DomainMatrix(A, (len(A), len(A)), QQ).inv().to_list()
        except DMNonInvertibleMatrixError as e:
            raise UnsupportedCaseError(f"anchors do not determine degree {k} of {alg}") from e
        for j, anchor in enumerate(named):
            N: Sparse = {}
            for i, basis in enumerate(family):
                weight = inverse[i][j]
                if not weight:
                    continue
                for a, row in basis.items():
                    target = N.setdefault(a, {})
                    for b, value in row.items():
                        target[b] = target.get(b, QQ(0)) + weight * value
            components[anchor.slot] = {
                a: {b: v for b, v in row.items() if v} for a, row in N.items() if any(row.values())
            }
    return components


class GradedInnerProduct:
    """Admissible inner product on f(m, p).

    `scale` is the squared norm of every generator (1 in the normalized family).
    """

    def __init__(self, algebra: FreeLieAlgebra, params: MetricParams, scale: Any = 1):
        if params.m != algebra.m or params.p != algebra.p:
            raise DomainError(f"parameters for f({params.m},{params.p}) applied to {algebra}")
        self.algebra = algebra
        self.params = params
        self.components = admissible_components(algebra)
        self.scalars = ParameterRing(params)
        self.domain = self.scalars.domain
        self.scale = rational(scale)
        if self.scale <= 0:
            raise DomainError("generator scale must be positive")
        self._gram: Optional[Sparse] = None

    @property
    def is_symbolic(self) -> bool:
        return not self.params.is_numeric

    def lift(self, q: Any) -> Any:
        """Rational into the scalar domain."""
        if self.scalars.ring is not None:
            return self.domain.convert_from(rational(q), QQ)
        return convert(q, self.domain)

    def gram(self) -> Sparse:
        """Full sparse Gram matrix over the scalar domain."""
        if self._gram is not None:
            return self._gram
        G: Sparse = {}
        one = self.lift(self.scale)
        for i in self.algebra.degree_ranges[1]:
            G[i] = {i: one}
        for slot, N in self.components.items():
            value = self.scalars.value(slot)
            for a, row in N.items():
                target = G.setdefault(a, {})
                for b, q in row.items():
                    target[b] = target.get(b, self.domain.zero) + value * self.lift(q)
        self._gram = {a: {b: v for b, v in row.items() if v} for a, row in G.items()}
        return self._gram

    def entry(self, a: int, b: int) -> Any:
        return self.gram().get(a, {}).get(b, self.domain.zero)

    def block(self, indices: List[int]) -> List[List[Any]]:
        return [[self.entry(a, b) for b in indices] for a in indices]

    def rows(self) -> List[List[Any]]:
        return self.block(list(range(self.algebra.dim)))

    def inner(self, x: Element, y: Element) -> Any:
        G = self.gram()
        total = self.domain.zero
        for a, xa in x.items():
            row = G.get(a, {})
            for b, yb in y.items():
                if b in row:
                    total += row[b] * self.lift(xa * yb)
        return total

    def norm2(self, x: Element) -> Any:
        return self.inner(x, x)

    def scaled(self, factor: Any) -> "GradedInnerProduct":
        """s * g: every squared norm, including the generators', multiplied by s."""
        s = rational(factor)
        if s <= 0:
            raise DomainError("scaling factor must be positive")
        if self.is_symbolic:
            raise DomainError("only numeric inner products can be scaled")
        return GradedInnerProduct(self.algebra, self.params.scaled(s), self.scale * s)

    def inverse_blocks(self, max_degree: Optional[int] = None) -> Sparse:
        """Sparse inverse of the Gram matrix on degrees <= max_degree (default p).

        Numeric metrics invert each content block over the field. Symbolic metrics use
        the decomposition G^-1 = sum(s^-1 * H_s) over the slots s of one degree.
        """
        top = self.algebra.p if max_degree is None else max_degree
        H: Sparse = {}
        inv_scale = self.lift(QQ(1) / self.scale)
        for i in self.algebra.degree_ranges[1]:
            H[i] = {i: inv_scale}
        for members in self.algebra.classes.values():
            k = self.algebra.degree(members[0])
            if k == 1 or k > top:
                continue
            if self.is_symbolic:
                block = self._symbolic_inverse(members, k)
            else:
                block = _invert(self.block(members), self.domain)
            for x, a in enumerate(members):
                H[a] = {members[y]: v for y, v in enumerate(block[x]) if v}
        return H

    def _symbolic_inverse(self, members: List[int], k: int) -> List[List[Any]]:
        slots = [s for s in self.components if SLOT_DEGREE[s] == k]
        if any(s in BLOCK_SLOTS for s in slots):
            raise UnsupportedCaseError(f"no symbolic inverse for degree {k}")
        parts = _inverse_parts(self.algebra, tuple(members), tuple(slots))
        n = len(members)
        out = [[self.domain.zero] * n for _ in range(n)]
        for slot, part in parts.items():
            weight = self.scalars.inverse(slot)
            for x in range(n):
                for y in range(n):
                    if part[x][y]:
                        out[x][y] += weight * self.lift(part[x][y])
        return out


def _invert(rows: List[List[Any]], K: Any) -> List[List[Any]]:
    n = len(rows)
    try:
        return DomainMatrix(rows, (n, n), K).inv().to_list()
    except (DMNonInvertibleMatrixError, ZeroDivisionError) as e:
        raise DomainError("Gram matrix is singular") from e


@lru_cache(maxsize=256)
def _inverse_parts(alg: FreeLieAlgebra, members: Tuple[int, ...], slots: Tuple[str, ...]) -> Dict[str, List[List[Any]]]:
    """H_s with sum(N_s H_s) = I and N_s H_t = 0 for s != t, on one content block.

    H_s = inv(G with s = 1/2, others 1) - inv(G with all 1).
    """
    components = admissible_components(alg)
    n = len(members)

    def gram(weights: Dict[str, Any]) -> List[List[Any]]:
        return [
            [sum((weights[s] * components[s].get(a, {}).get(b, QQ(0)) for s in slots), QQ(0)) for b in members]
            for a in members
        ]

    active = [s for s in slots if any(components[s].get(a) for a in members)]
    base = _invert(gram({s: QQ(1) for s in slots}), QQ)
    if len(active) == 1:
        return {active[0]: base}
    parts: Dict[str, List[List[Any]]] = {}
    for s in active:
        halved = _invert(gram({t: QQ(1, 2) if t == s else QQ(1) for t in slots}), QQ)
        parts[s] = [[halved[x][y] - base[x][y] for y in range(n)] for x in range(n)]

    identity = [[QQ(int(x == y)) for y in range(n)] for x in range(n)]
    total = [[QQ(0)] * n for _ in range(n)]
    for s in active:
        Ns = DomainMatrix(gram({t: QQ(int(t == s)) for t in slots}), (n, n), QQ)
        for t in active:
            product = (Ns * DomainMatrix(parts[t], (n, n), QQ)).to_list()
            if s == t:
                total = [[total[x][y] + product[x][y] for y in range(n)] for x in range(n)]
            elif any(v for row in product for v in row):
                raise UnsupportedCaseError(f"slots {s}, {t} are coupled on one content block of {alg}")
    if total != identity:
        raise UnsupportedCaseError(f"inverse decomposition fails on a content block of {alg}")
    return parts


def admissible_metric(alg: FreeLieAlgebra, params: MetricParams) -> GradedInnerProduct:
    """The admissible inner product with the given named norms; generators orthonormal."""
    metric = GradedInnerProduct(alg, params)
    logger.info("admissible metric on %s: %s", alg, ", ".join(
        f"{s}={'symbolic' if s in params.symbolic_slots else params.values[s]}" for s in params.slots
    ))
    return metric
