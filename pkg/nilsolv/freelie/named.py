"""Named vectors of f(m, p) used to describe admissible inner products.

e_k below is the chain e_{121...1} = [...[[e1, e2], e1], ...], e1] of degree k,
Theta the derivation e1 -> e2, e2 -> 0, and iota the automorphism swapping e1, e2.
"""

from typing import Any, Iterable

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from nilsolv.core.errors import DomainError
from nilsolv.freelie.algebra import Element, FreeLieAlgebra, bracket
from nilsolv.freelie.operators import (
    LinearOperator,
    _square,
    elementary,
    extend_automorphism,
    extend_derivation,
    permutation_matrix,
)


def e(alg: FreeLieAlgebra, *letters: int) -> Element:
    return alg.word(tuple(letters))


def chain(alg: FreeLieAlgebra, k: int) -> Element:
    """e_{12} followed by k-2 ones; e_1 when k = 1."""
    if k < 1:
        raise DomainError(f"chain degree must be positive, got {k}")
    if k == 1:
        return alg.generator(1)
    return alg.word((1, 2) + (1,) * (k - 2))


def theta(alg: FreeLieAlgebra) -> LinearOperator:
    op = extend_derivation(alg, elementary(alg.m, 2, 1))
    op.name = "Theta"
    return op


def iota(alg: FreeLieAlgebra) -> LinearOperator:
    perm = list(range(1, alg.m + 1))
    perm[0], perm[1] = 2, 1
    op = extend_automorphism(alg, permutation_matrix(perm))
    op.name = "iota"
    return op


def theta_power(alg: FreeLieAlgebra, j: int, k: int) -> Element:
    """Theta^j e_k."""
    x = chain(alg, k)
    if j:
        op = theta(alg)
        for _ in range(j):
            x = op.apply(x)
    return x


def u(alg: FreeLieAlgebra) -> Element:
    """[e_3, e_2] = [e_121, e_12]."""
    return bracket(alg, chain(alg, 3), chain(alg, 2))


def z(alg: FreeLieAlgebra) -> Element:
    """[e_4, e_2] = [e_1211, e_12]."""
    return bracket(alg, chain(alg, 4), chain(alg, 2))


def lie_invariant(alg: FreeLieAlgebra) -> Element:
    """I = [e_3, Theta e_3] = [e_121, e_122]."""
    return bracket(alg, chain(alg, 3), theta_power(alg, 1, 3))


def q(alg: FreeLieAlgebra, i: int, j: int, k: int) -> Element:
    """q_ijk = e_kjii + e_ijki + e_ijik."""
    return e(alg, k, j, i, i) + e(alg, i, j, k, i) + e(alg, i, j, i, k)


def r(alg: FreeLieAlgebra, i: int, j: int, k: int) -> Element:
    """r_ijk = [e_ij, e_ik]."""
    return bracket(alg, e(alg, i, j), e(alg, i, k))


def is_lie_invariant(alg: FreeLieAlgebra, x: Element, matrices: Iterable[Any]) -> bool:
    """R(S)x = det(S)^(k/m) x for every S, x homogeneous of degree k with m | k."""
    degrees = x.degrees()
    if len(degrees) != 1 or degrees[0] % alg.m:
        return False
    power = degrees[0] // alg.m
    for S in matrices:
        rows = _square(S, alg.m)
        det = DomainMatrix(rows, (alg.m, alg.m), QQ).det()
        image = extend_automorphism(alg, rows).apply(x)
        if image != x * det ** power:
            return False
    return True
