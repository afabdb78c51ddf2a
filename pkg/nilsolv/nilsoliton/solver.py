"""Exact solver for the nilsoliton equations of one free nilpotent Lie algebra.

Stages:
  1. Gaussian elimination with monomials and C as unknowns.
  2. With at most one free unknown t, the side relations give polynomials in t; every
     admissible real root is turned into a metric and checked against the full residual.
  3. Otherwise, or when no root works, a nonnegative combination of equations whose left side
     is a positive expression and whose right side is a negative multiple of C.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from sympy import Poly
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from nilsolv.cone import Screened, primitive
from nilsolv.core import lp
from nilsolv.core.errors import DomainError, UndecidedError
from nilsolv.core.numbers import convert, is_positive, rational
from nilsolv.freelie import FreeLieAlgebra, build_algebra
from nilsolv.metric import SLOT_DEGREE, MetricParams, admissible_metric, eigen_constants, nilsoliton_residual
from nilsolv.nilsoliton.equations import Equation, EquationSystem, combine
from nilsolv.nilsoliton.monomials import MonomialVariable
from nilsolv.nilsoliton.roots import (
    affine,
    coefficients,
    is_one_signed,
    minimal_polynomial,
    primitive_polynomial,
    real_roots,
    substitute_affine,
)

logger = logging.getLogger(__name__)

Unknown = Union[MonomialVariable, str]
C_KEY = "C"


@dataclass
class PositiveCombinationCertificate:
    """sum_i y_i E_i: nonnegative left side, right side rhs * C with rhs < 0."""

    coefficients: Dict[str, int]
    combined: Dict[MonomialVariable, Any]
    constant: Any
    rhs: Any
    valid: bool

    def expression(self) -> str:
        terms = [f"{c}·{mono}" for mono, c in sorted(self.combined.items())]
        if self.constant:
            terms.append(str(self.constant))
        return f"{' + '.join(terms) or '0'} = {self.rhs}C"


@dataclass
class UnivariateNoPositiveRoot:
    """The system forces P(variable) = 0 for a positive variable, and P is one-signed."""

    variable: str
    coefficients: Tuple[Any, ...]

    @property
    def valid(self) -> bool:
        return is_one_signed(self.coefficients)

    def expression(self) -> str:
        n = len(self.coefficients) - 1
        terms = [f"{c}·{self.variable}^{n - i}" if n - i else str(c) for i, c in enumerate(self.coefficients) if c]
        return " + ".join(terms) + " = 0"


@dataclass
class EinsteinNilradical:
    m: int
    p: int
    params: MetricParams
    C: Any
    field: Any = QQ
    polynomial: Tuple[int, ...] = ()

    @property
    def verdict(self) -> str:
        return "einstein"


@dataclass
class NotEinstein:
    m: int
    p: int
    certificate: Union[PositiveCombinationCertificate, UnivariateNoPositiveRoot]

    @property
    def verdict(self) -> str:
        return "not_einstein"


ClassificationOutcome = Union[EinsteinNilradical, NotEinstein, Screened]


def _ints(poly: Poly) -> Tuple[int, ...]:
    return tuple(int(c.numerator) for c in coefficients(poly))


def _integral(value: Any) -> Any:
    q = rational(value)
    return int(q.numerator) if q.denominator == 1 else q


@dataclass
class LinearSolution:
    """Unknowns as const + coef * t; `free` is the unknown playing t (or None)."""

    values: Dict[Unknown, Tuple[Any, Any]]
    free: Optional[Unknown] = None
    extra_free: List[Unknown] = field(default_factory=list)

    @property
    def is_pencil(self) -> bool:
        return self.free is not None and not self.extra_free

    def at(self, t0: Any, K: Any) -> Dict[Unknown, Any]:
        return {
            key: convert(const, K) + convert(coef, K) * t0 if coef else convert(const, K)
            for key, (const, coef) in self.values.items()
        }


def eliminate(equations: List[Equation]) -> Optional[LinearSolution]:
    """Reduced row echelon form over QQ; None when the linear system is inconsistent."""
    monomials = sorted({mono for eq in equations for mono in eq.coefficients})
    unknowns: List[Unknown] = [*monomials, C_KEY]
    n = len(unknowns)
    rows = [
        [QQ.convert(eq.coefficients.get(mono, 0)) for mono in monomials] + [QQ(-eq.rhs), -QQ.convert(eq.constant)]
        for eq in equations
    ]
    R, pivots = DomainMatrix(rows, (len(rows), n + 1), QQ).rref()
    R = R.to_list()
    if n in pivots:
        return None
    free = [j for j in range(n) if j not in pivots]
    t = free[0] if free else None
    values: Dict[Unknown, Tuple[Any, Any]] = {}
    for row, column in enumerate(pivots):
        values[unknowns[column]] = (R[row][n], -R[row][t] if t is not None else QQ(0))
    for j in free:
        values[unknowns[j]] = (QQ(0), QQ(1) if j == t else QQ(0))
    return LinearSolution(
        values,
        unknowns[t] if t is not None else None,
        [unknowns[j] for j in free[1:]],
    )


def relation_polynomial(solution: LinearSolution, relations: List[Dict[MonomialVariable, int]]) -> Optional[Poly]:
    """gcd of the side relations along the pencil; None when none of them constrains t."""
    common: Optional[Poly] = None
    for relation in relations:
        lhs = affine(1, 0)
        rhs = affine(1, 0)
        for mono, power in relation.items():
            factor = affine(*solution.values[mono])
            if power > 0:
                lhs = lhs * factor ** power
            else:
                rhs = rhs * factor ** (-power)
        poly = lhs - rhs
        if poly.is_zero:
            continue
        common = poly if common is None else common.gcd(poly)
    return common


def _relations_hold(values: Dict[Unknown, Any], relations: List[Dict[MonomialVariable, int]], K: Any) -> bool:
    for relation in relations:
        lhs, rhs = K.one, K.one
        for mono, power in relation.items():
            if power > 0:
                lhs *= values[mono] ** power
            else:
                rhs *= values[mono] ** (-power)
        if lhs != rhs:
            return False
    return True


def _points(solution: LinearSolution, system: EquationSystem) -> Iterator[Tuple[Any, Dict[Unknown, Any]]]:
    relations = system.relations()
    if solution.free is None:
        values = solution.at(QQ(0), QQ)
        if _relations_hold(values, relations, QQ):
            yield QQ, values
        return
    poly = relation_polynomial(solution, relations)
    if poly is None:
        return
    for root, K in real_roots(poly):
        yield K, solution.at(root, K)


def peel(values: Dict[Unknown, Any], params: MetricParams, K: Any) -> Optional[Dict[str, Any]]:
    """Slot values from monomial values, one unknown slot at a time."""
    known: Dict[str, Any] = {
        slot: convert(v, K) for slot, v in params.values.items() if slot not in params.symbolic_slots
    }
    wanted = set(params.symbolic_slots)
    progress = True
    while progress and not wanted <= set(known):
        progress = False
        for key, value in values.items():
            if key == C_KEY:
                continue
            slots = key.slots
            unknown = [s for s in slots if s not in known]
            if len(unknown) != 1 or abs(slots[unknown[0]]) != 1:
                continue
            rest = K.one
            for s, e in slots.items():
                if s != unknown[0]:
                    rest *= known[s] ** e if e > 0 else (K.one / known[s]) ** (-e)
            if not value:
                return None
            solved = value / rest
            known[unknown[0]] = solved if slots[unknown[0]] > 0 else K.one / solved
            progress = True
    if not wanted <= set(known):
        return None
    return {s: known[s] for s in wanted}


def _try_point(system: EquationSystem, alg: FreeLieAlgebra, K: Any, values: Dict[Unknown, Any]) -> Optional[EinsteinNilradical]:
    C = values[C_KEY]
    if not is_positive(C, K):
        return None
    if any(isinstance(k, MonomialVariable) and k.is_positive and not is_positive(v, K) for k, v in values.items()):
        return None
    assignment = peel(values, system.params, K)
    if assignment is None:
        logger.info("could not recover every parameter of f(%d,%d) from the monomials", system.m, system.p)
        return None
    try:
        params = system.params.substitute(assignment, field=K)
    except DomainError as e:
        logger.debug("rejected point: %s", e)
        return None
    residual = nilsoliton_residual(alg, admissible_metric(alg, params), C)
    if not residual.is_zero:
        logger.info("point with C=%s leaves residual %.3g", K.to_sympy(C), residual.max_abs)
        return None
    poly = minimal_polynomial(C, K)
    return EinsteinNilradical(system.m, system.p, params, C, K, _ints(poly))


def univariate_certificate(solution: LinearSolution, system: EquationSystem) -> Optional[UnivariateNoPositiveRoot]:
    """Rewrite the relation polynomial in a positive unknown and look for one-signed coefficients."""
    if not solution.is_pencil:
        return None
    poly = relation_polynomial(solution, system.relations())
    if poly is None or poly.degree() < 1:
        return None
    singles = [
        mono for mono in solution.values
        if isinstance(mono, MonomialVariable) and len(mono.exponents) == 1 and mono.exponents[0][1] == 1
    ]
    singles.sort(key=lambda mono: SLOT_DEGREE[mono.exponents[0][0]])
    for key in [*singles, C_KEY]:
        const, coef = solution.values[key]
        if not coef:
            continue
        in_x = primitive_polynomial(substitute_affine(poly, const, coef))
        certificate = UnivariateNoPositiveRoot(str(key), _ints(in_x))
        if certificate.valid:
            return certificate
    return None


def verify_combination(system: EquationSystem, weights: Dict[str, Any]) -> PositiveCombinationCertificate:
    """Check a nonnegative combination of equations for a positive left side against -C."""
    unknown = set(weights) - set(system.labels)
    if unknown:
        raise DomainError(f"no equations named {', '.join(sorted(unknown))}")
    combined, constant, rhs = combine(system.equations, weights)
    valid = (
        all(rational(w) >= 0 for w in weights.values())
        and all(mono.is_positive and c > 0 for mono, c in combined.items())
        and constant >= 0
        and rhs < 0
        and (bool(combined) or constant > 0)
    )
    return PositiveCombinationCertificate(
        {k: _integral(v) for k, v in weights.items() if v},
        combined,
        constant,
        rhs,
        valid,
    )


def positive_combination(equations: List[Equation]) -> Optional[Dict[str, int]]:
    """min sum(y) over y >= 0 with sum y_i rhs_i = -1 and a sign-definite combined left side."""
    monomials = sorted({mono for eq in equations for mono in eq.coefficients})
    A_ub: List[List[Any]] = []
    A_eq: List[List[Any]] = [[QQ(eq.rhs) for eq in equations]]
    b_eq: List[Any] = [QQ(-1)]
    for mono in monomials:
        row = [QQ.convert(eq.coefficients.get(mono, 0)) for eq in equations]
        if mono.is_positive:
            A_ub.append([-c for c in row])
        else:
            A_eq.append(row)
            b_eq.append(QQ(0))
    A_ub.append([-QQ.convert(eq.constant) for eq in equations])
    result = lp.minimize([QQ(1)] * len(equations), A_ub, [QQ(0)] * len(A_ub), A_eq, b_eq)
    if result is None:
        return None
    weights = primitive(result[1])
    return {eq.label: w for eq, w in zip(equations, weights) if w}


def _abelian(system: EquationSystem) -> EinsteinNilradical:
    tr, _ = eigen_constants(build_algebra(system.m, 1))
    C = QQ(1, tr)
    params = MetricParams(system.m, 1, {}).validated()
    return EinsteinNilradical(system.m, 1, params, C, QQ, (tr, -1))


def solve_equations(system: EquationSystem, alg: Optional[FreeLieAlgebra] = None) -> Union[EinsteinNilradical, NotEinstein]:
    """Decide the system: an exact nilsoliton metric or a certificate of non-existence."""
    if not system.block_diagonal:
        raise DomainError(f"Ricci form of f({system.m},{system.p}) is not block diagonal over content classes")
    if system.p == 1:
        return _abelian(system)
    alg = alg or build_algebra(system.m, system.p)

    solution = eliminate(system.equations)
    if solution is not None and not solution.extra_free:
        for K, values in _points(solution, system):
            outcome = _try_point(system, alg, K, values)
            if outcome is not None:
                logger.info("f(%d,%d) is an Einstein nilradical, C=%s", system.m, system.p, K.to_sympy(outcome.C))
                return outcome
        certificate = univariate_certificate(solution, system)
        if certificate is not None:
            logger.info("f(%d,%d): %s has no positive root", system.m, system.p, certificate.expression())
            return NotEinstein(system.m, system.p, certificate)

    # trace equations only when the diagonal ones do not suffice
    stages = [system.diagonal()]
    if len(stages[0]) < len(system.equations):
        stages.append(system.equations)
    for equations in stages:
        weights = positive_combination(equations)
        if weights is None:
            continue
        certificate = verify_combination(system, weights)
        if certificate.valid:
            logger.info("f(%d,%d): %s", system.m, system.p, certificate.expression())
            return NotEinstein(system.m, system.p, certificate)

    raise UndecidedError(f"no solution and no certificate found for f({system.m},{system.p})")
