"""Nilsoliton equations - Ric(x, x) / ||x||^2 = (k Tr Phi - Tr Phi^2) C for named vectors x.

Every equation is linear in the monomial variables of the parameter ring; side relations
between the monomials are the integer kernel of their exponent matrix.
Ricci entries between different content classes must vanish identically in the parameters;
assembly fails otherwise.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

from sympy.polys.domains import QQ

from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import format_rational, rational
from nilsolv.freelie import Element, FreeLieAlgebra, build_algebra, chain, e, lie_invariant, r, u, z
from nilsolv.metric import (
    BLOCKS,
    GradedInnerProduct,
    MetricParams,
    ParameterRing,
    RicciForm,
    admissible_metric,
    eigen_constants,
    ricci_coefficient,
    ricci_nilpotent,
    v_basis,
    w_basis,
)
from nilsolv.nilsoliton.monomials import MonomialVariable, format_relation, relations

logger = logging.getLogger(__name__)

TRACE_LABELS = ("V", "W")


@dataclass
class Equation:
    """sum coefficients[mu] * mu + constant = rhs * C."""

    label: str
    degree: int
    coefficients: Dict[MonomialVariable, Any]
    constant: Any
    rhs: int

    @property
    def is_trace(self) -> bool:
        return self.label in TRACE_LABELS

    def lhs(self) -> str:
        terms = [f"{format_rational(c)}·{mono}" for mono, c in sorted(self.coefficients.items())]
        if self.constant:
            terms.append(format_rational(self.constant))
        return " + ".join(terms) or "0"

    def __str__(self) -> str:
        return f"Ric({self.label}): {self.lhs()} = {self.rhs}C"


@dataclass
class EquationSystem:
    m: int
    p: int
    equations: List[Equation]
    trace: int
    trace_squares: int
    block_diagonal: bool = True
    params: Optional[MetricParams] = field(default=None, repr=False)

    @property
    def monomials(self) -> List[MonomialVariable]:
        return sorted({mono for eq in self.equations for mono in eq.coefficients})

    @property
    def labels(self) -> List[str]:
        return [eq.label for eq in self.equations]

    def equation(self, label: str) -> Equation:
        for eq in self.equations:
            if eq.label == label:
                return eq
        raise DomainError(f"no equation for {label} in f({self.m},{self.p})")

    def diagonal(self) -> List[Equation]:
        return [eq for eq in self.equations if not eq.is_trace]

    def relations(self) -> List[Dict[MonomialVariable, int]]:
        return relations(self.monomials)

    def describe(self) -> List[str]:
        return [str(eq) for eq in self.equations] + [format_relation(rel) for rel in self.relations()]


def named_vectors(alg: FreeLieAlgebra) -> List[Tuple[str, int, Element]]:
    """(label, degree, vector) whose squared norm is a single named parameter."""
    m, p = alg.m, alg.p
    out = [("e_1", 1, chain(alg, 1))]
    if p >= 2:
        out.append(("e_12", 2, chain(alg, 2)))
    if p >= 3:
        out.append(("e_121", 3, chain(alg, 3)))
        if m >= 3:
            out.append(("e_123", 3, e(alg, 1, 2, 3)))
    if p >= 4:
        out.append(("e_1211", 4, chain(alg, 4)))
        if m == 3:
            out.append(("r_123", 4, r(alg, 1, 2, 3)))
    if p >= 5:
        out += [("e_12111", 5, chain(alg, 5)), ("u", 5, u(alg))]
    if p >= 6:
        out += [("e_121111", 6, chain(alg, 6)), ("z", 6, z(alg)), ("I", 6, lie_invariant(alg))]
    if p >= 7:
        out.append(("e_1211111", 7, chain(alg, 7)))
    return out


class _Linearizer:
    """Turns parameter-ring values into (monomial coefficients, constant)."""

    def __init__(self, scalars: ParameterRing):
        self.scalars = scalars

    def terms(self, value: Any) -> List[Tuple[Dict[str, int], Any]]:
        if self.scalars.ring is None:
            return [({}, value)] if value else []
        return [(self.scalars.exponents(monom), coeff) for monom, coeff in value.terms()]

    def divide_by_norm(self, value: Any, norm: Any, label: str) -> Any:
        terms = self.terms(norm)
        if len(terms) != 1:
            raise DomainError(f"||{label}||^2 is not a single parameter")
        exponents, coeff = terms[0]
        if self.scalars.ring is None:
            return value / coeff
        out = value * self.scalars.domain.convert_from(QQ(1) / coeff, QQ)
        for slot, power in exponents.items():
            if slot in self.scalars.inverted:
                out = out * self.scalars.gens[f"{slot}_inv"] ** power
            else:
                out = out.exquo(self.scalars.gens[slot] ** power)
        return self.scalars.laurent(out)

    def linear(self, value: Any) -> Tuple[Dict[MonomialVariable, Any], Any]:
        coefficients: Dict[MonomialVariable, Any] = {}
        constant = QQ(0)
        for exponents, coeff in self.terms(value):
            if not exponents:
                constant += coeff
            else:
                mono = MonomialVariable.of(exponents)
                coefficients[mono] = coefficients.get(mono, QQ(0)) + coeff
        return {k: v for k, v in coefficients.items() if v}, constant


def _trace_equation(
    name: str,
    basis: Tuple[Element, Element],
    ric: RicciForm,
    g: GradedInnerProduct,
) -> Any:
    """tr(G_B^-1 Ric|_B) on a two-dimensional block with symbolic Gram matrix."""
    scalars = g.scalars
    a, b, c = (scalars.value(s) for s in BLOCKS[name])
    R = [[ric.quadratic(x, y) for y in basis] for x in basis]
    adjugate = [[c, -b], [-b, a]]
    numerator = sum((adjugate[i][j] * R[j][i] for i in range(2) for j in range(2)), scalars.domain.zero)
    numerator = scalars.laurent(numerator)
    determinant = a * c - b * b
    if scalars.ring is None:
        return numerator / determinant
    return scalars.laurent(numerator.exquo(determinant))


def assemble_equations(m: int, p: int, max_dim: Optional[int] = None, alg: Optional[FreeLieAlgebra] = None) -> EquationSystem:
    """Symbolic nilsoliton system of f(m, p) over the normalized admissible family."""
    alg = alg or build_algebra(m, p, max_dim)
    params = MetricParams.symbolic(m, p)
    g = admissible_metric(alg, params)
    ric = ricci_nilpotent(alg, g)
    lin = _Linearizer(g.scalars)
    off = ric.off_block(alg.classes.values())
    if off:
        a, b = off[0]
        raise DomainError(
            f"Ricci form of {alg} mixes content classes: Ric({alg.label(a)}, {alg.label(b)}) != 0"
            f" and {len(off) - 1} more"
        )

    equations: List[Equation] = []
    for label, k, x in named_vectors(alg):
        value = lin.divide_by_norm(ric.quadratic(x), g.norm2(x), label)
        coefficients, constant = lin.linear(value)
        equations.append(Equation(label, k, coefficients, constant, ricci_coefficient(alg, k)))
    if p >= 7:
        for name, basis in (("V", v_basis(alg)), ("W", w_basis(alg))):
            coefficients, constant = lin.linear(_trace_equation(name, basis, ric, g))
            equations.append(Equation(name, 7, coefficients, constant, 2 * ricci_coefficient(alg, 7)))

    tr, tr2 = eigen_constants(alg)
    system = EquationSystem(m, p, equations, tr, tr2, True, params)
    logger.info("assembled %d equations in %d monomials for f(%d,%d)", len(equations), len(system.monomials), m, p)
    return system


def evaluate(equation: Equation, values: Dict[MonomialVariable, Any], K: Any = QQ) -> Any:
    """Left side of the equation at given monomial values."""
    total = K.convert_from(equation.constant, QQ)
    for mono, coeff in equation.coefficients.items():
        total += K.convert_from(coeff, QQ) * values[mono]
    return total


def combine(equations: Iterable[Equation], weights: Dict[str, Any]) -> Tuple[Dict[MonomialVariable, Any], Any, Any]:
    """sum_i w_i E_i as (monomial coefficients, constant, C coefficient)."""
    coefficients: Dict[MonomialVariable, Any] = {}
    constant, rhs = QQ(0), QQ(0)
    for eq in equations:
        w = weights.get(eq.label)
        if not w:
            continue
        w = rational(w)
        constant += w * eq.constant
        rhs += w * eq.rhs
        for mono, c in eq.coefficients.items():
            coefficients[mono] = coefficients.get(mono, QQ(0)) + w * c
    return {k: v for k, v in coefficients.items() if v}, constant, rhs
