"""Nilsoliton residuals and rank-one Einstein extensions.

With the Einstein derivation normalized to phi = c_hat * Phi, the nilsoliton condition on the
degree-k block reads Ric = (k Tr Phi - Tr Phi^2) C g, where C = -c / Tr Phi^2 > 0.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Tuple

from sympy.polys.domains import QQ

from nilsolv.core.errors import DomainError, PreconditionError
from nilsolv.core.numbers import rational
from nilsolv.freelie import FreeLieAlgebra, LinearOperator, bracket, canonical_derivation, chain, e
from nilsolv.metric.admissible import GradedInnerProduct
from nilsolv.metric.ricci import MetricLieAlgebra, RicciForm, lifted_brackets, ricci_general, ricci_nilpotent

logger = logging.getLogger(__name__)


def eigen_constants(alg: FreeLieAlgebra) -> Tuple[int, int]:
    """(Tr Phi, Tr Phi^2)."""
    sizes = alg.degree_sizes()
    return (
        sum(k * d for k, d in enumerate(sizes, start=1)),
        sum(k * k * d for k, d in enumerate(sizes, start=1)),
    )


def ricci_coefficient(alg: FreeLieAlgebra, k: int) -> int:
    """k Tr Phi - Tr Phi^2, the factor of C ||X||^2 on degree k."""
    tr, tr2 = eigen_constants(alg)
    return k * tr - tr2


def _as_scalar(g: GradedInnerProduct, C: Any) -> Any:
    if g.domain != QQ and isinstance(C, g.domain.dtype):
        return C
    return g.lift(rational(C))


@dataclass
class Residual:
    difference: RicciForm
    max_abs: float
    is_zero: bool


def nilsoliton_target(alg: FreeLieAlgebra, g: GradedInnerProduct, C: Any) -> List[List[Any]]:
    K = g.domain
    c = _as_scalar(g, C)
    G = g.gram()
    rows = [[K.zero] * alg.dim for _ in range(alg.dim)]
    for a, row in G.items():
        factor = g.lift(ricci_coefficient(alg, alg.degree(a))) * c
        for b, value in row.items():
            rows[a][b] = factor * value
    return rows


def nilsoliton_residual(alg: FreeLieAlgebra, g: GradedInnerProduct, C: Any) -> Residual:
    """Ric - (k Tr Phi - Tr Phi^2) C g, blockwise."""
    if g.is_symbolic:
        raise DomainError("the nilsoliton residual needs numeric parameters")
    ric = ricci_nilpotent(alg, g)
    target = nilsoliton_target(alg, g, C)
    rows = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ric.rows, target)]
    difference = RicciForm(rows, g.domain, ric.gram, ric.labels)
    is_zero = difference.is_zero()
    return Residual(difference, 0.0 if is_zero else difference.max_abs(), is_zero)


@dataclass
class SolvableExtension:
    """g = RH + n with ad_H|n = c_hat Phi, H orthogonal to n and ||H||^2 = c_hat Tr Phi."""

    base: FreeLieAlgebra
    metric: GradedInnerProduct
    C: Any
    c_hat: Any
    h_norm2: Any
    einstein_constant: Any

    @property
    def dim(self) -> int:
        return self.base.dim + 1

    @property
    def domain(self) -> Any:
        return self.metric.domain

    def derivation(self) -> LinearOperator:
        """phi = c_hat Phi on the nilradical (rational C only)."""
        if self.domain != QQ:
            raise DomainError("the derivation is rational only for rational C")
        return rational(self.c_hat) * canonical_derivation(self.base)

    def metric_lie_algebra(self) -> MetricLieAlgebra:
        """Index 0 is H; index i + 1 is the Hall basis element i."""
        alg, K = self.base, self.domain
        brackets: Dict[Tuple[int, int], Dict[int, Any]] = {}
        for (a, b), image in lifted_brackets(alg, self.metric.lift).items():
            brackets[(a + 1, b + 1)] = {c + 1: v for c, v in image.items()}
        for j in range(alg.dim):
            weight = self.c_hat * self.metric.lift(alg.degree(j))
            brackets[(0, j + 1)] = {j + 1: weight}
            brackets[(j + 1, 0)] = {j + 1: -weight}
        n = self.dim
        gram = [[K.zero] * n for _ in range(n)]
        gram[0][0] = self.h_norm2
        for a, row in self.metric.gram().items():
            for b, value in row.items():
                gram[a + 1][b + 1] = value
        labels = ["H"] + [alg.label(i) for i in range(alg.dim)]
        return MetricLieAlgebra(n, K, brackets, gram, nilpotent=False, labels=labels)

    def ricci(self) -> RicciForm:
        return ricci_general(self.metric_lie_algebra())

    def is_einstein(self) -> bool:
        op = self.ricci().operator()
        c = self.einstein_constant
        return all(
            op[i][j] == (c if i == j else self.domain.zero)
            for i in range(self.dim) for j in range(self.dim)
        )

    def scalar_curvature(self) -> Any:
        return self.einstein_constant * self.metric.lift(self.dim)


def rank_one_extension(alg: FreeLieAlgebra, g: GradedInnerProduct, C: Any) -> SolvableExtension:
    residual = nilsoliton_residual(alg, g, C)
    if not residual.is_zero:
        raise PreconditionError(f"metric on {alg} is not a nilsoliton for this C (max |residual| {residual.max_abs:.3g})")
    tr, tr2 = eigen_constants(alg)
    c = _as_scalar(g, C)
    c_hat = c * g.lift(tr)
    ext = SolvableExtension(
        base=alg,
        metric=g,
        C=c,
        c_hat=c_hat,
        h_norm2=c_hat * g.lift(tr),
        einstein_constant=-c * g.lift(tr2),
    )
    logger.info("rank-one extension of %s: dim %d", alg, ext.dim)
    return ext


def abelian_extension(alg: FreeLieAlgebra, g: GradedInnerProduct) -> SolvableExtension:
    """f(m, 1): Ric = 0, so any C works; C = 1 / Tr Phi gives c_hat = 1."""
    if alg.p != 1:
        raise DomainError(f"{alg} is not abelian")
    tr, _ = eigen_constants(alg)
    return rank_one_extension(alg, g, QQ(1, tr))


def trace_identity_check(alg: FreeLieAlgebra, C: Any, derivations: Iterable[LinearOperator]) -> bool:
    """Tr(phi psi) = -c Tr(psi) for every psi, with phi = c_hat Phi and c = -C Tr Phi^2."""
    tr, tr2 = eigen_constants(alg)
    c_value = rational(C)
    c_hat = c_value * tr
    minus_c = c_value * tr2
    for psi in derivations:
        lhs = c_hat * sum((k * psi.block_trace(k) for k in range(1, alg.p + 1)), QQ(0))
        if lhs != minus_c * psi.trace():
            return False
    return True


def theorem_presentation(alg: FreeLieAlgebra, g: GradedInnerProduct, C: Any) -> Dict[str, Any]:
    """The constants in the normalization where ||e_i|| = ||e_12|| = 1.

    p = 3 uses t = ||e_iji||^2 / 3; f(2, 5) uses t = C.
    """
    norm = g.norm2
    out: Dict[str, Any] = {"e_12": norm(chain(alg, 2))} if alg.p >= 2 else {}
    if alg.p == 3:
        out["e_121"] = norm(chain(alg, 3))
        out["t"] = out["e_121"] / g.lift(3)
        if alg.m >= 3:
            out["e_123"] = norm(e(alg, 1, 2, 3))
            out["<e_123,e_231>"] = g.inner(e(alg, 1, 2, 3), e(alg, 2, 3, 1))
    elif alg.key in ((2, 4), (2, 5)):
        out["e_121"] = norm(chain(alg, 3))
        out["e_1211"] = norm(chain(alg, 4))
        out["e_1212"] = norm(e(alg, 1, 2, 1, 2))
        if alg.p == 5:
            u_sym = e(alg, 1, 2, 2, 1, 1) + e(alg, 1, 2, 1, 2, 1) + e(alg, 1, 2, 1, 1, 2)
            u_br = bracket(alg, chain(alg, 3), chain(alg, 2))
            out["e_12111"] = norm(chain(alg, 5))
            out["e_12211+e_12121+e_12112"] = norm(u_sym)
            out["[e_121,e_12]"] = norm(u_br)
            out["<e_12211+e_12121+e_12112,[e_121,e_12]>"] = g.inner(u_sym, u_br)
            out["t"] = _as_scalar(g, C)
    return out
