"""Exact real roots of univariate rational polynomials.

Linear and quadratic factors give roots in QQ or a real quadratic field; every real root of a
higher-degree factor is isolated by a rational interval and carried in QQ(root).
"""

import logging
from math import isqrt
from typing import Any, List, Sequence, Tuple

from sympy import Poly, Symbol
from sympy.ntheory.factor_ import core
from sympy.polys.domains import QQ

from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import (
    from_parts,
    is_quadratic,
    quadratic_field,
    quadratic_parts,
    radicand_of,
    rational,
    root_field,
)

logger = logging.getLogger(__name__)

t = Symbol("t")
x = Symbol("x")


def affine(const: Any, coef: Any, gen: Symbol = t) -> Poly:
    return Poly([rational(coef), rational(const)], gen, domain="QQ")


def coefficients(poly: Poly) -> List[Any]:
    """Highest degree first, over QQ."""
    return [rational(c) for c in poly.all_coeffs()]


def primitive_polynomial(poly: Poly) -> Poly:
    """Integer coefficients without common factor and positive leading coefficient."""
    if poly.is_zero:
        return poly
    _, prim = poly.clear_denoms(convert=True)
    prim = prim.primitive()[1]
    return -prim if prim.LC() < 0 else prim


def substitute_affine(poly: Poly, const: Any, coef: Any) -> Poly:
    """P(t) with t = (x - const) / coef, as a polynomial in x."""
    inverse = affine(-rational(const) / rational(coef), QQ(1) / rational(coef), x)
    out = Poly(0, x, domain="QQ")
    for c in coefficients(poly):
        out = out * inverse + Poly([c], x, domain="QQ")
    return out


def is_one_signed(values: Sequence[Any]) -> bool:
    """No positive root: all nonzero coefficients share a sign and some coefficient is nonzero."""
    nonzero = [v for v in values if v]
    return bool(nonzero) and (all(v > 0 for v in nonzero) or all(v < 0 for v in nonzero))


def _sqrt_parts(q: Any) -> Tuple[Any, int]:
    """(s, d) with q = s^2 d, d squarefree, for rational q > 0."""
    num, den = int(q.numerator), int(q.denominator)
    n = num * den
    d = int(core(n, 2))
    s = isqrt(n // d)
    return QQ(s, den), d


def real_roots(poly: Poly) -> List[Tuple[Any, Any]]:
    """(root, field) pairs, one per distinct real root.

    Roots lie in QQ, in a real quadratic field, or in QQ(theta) for an irreducible factor of
    degree three or more, with theta isolated by a rational interval.
    """
    out: List[Tuple[Any, Any]] = []
    if poly.is_zero or poly.degree() < 1:
        return out
    _, factors = poly.factor_list()
    for factor, _ in factors:
        cs = coefficients(factor)
        if factor.degree() == 1:
            out.append((-cs[1] / cs[0], QQ))
        elif factor.degree() == 2:
            a, b, c = cs
            disc = b * b - 4 * a * c
            if disc < 0:
                continue
            s, d = _sqrt_parts(disc)
            if d == 1:
                out += [((-b + s) / (2 * a), QQ), ((-b - s) / (2 * a), QQ)]
                continue
            K = quadratic_field(d)
            for sign in (1, -1):
                out.append((from_parts(-b / (2 * a), sign * s / (2 * a), K), K))
        else:
            for index in range(len(factor.intervals())):
                K, theta = root_field(factor, index)
                out.append((theta, K))
    logger.debug("real roots of %s: %d", poly.as_expr(), len(out))
    return out


def minimal_polynomial(value: Any, K: Any) -> Poly:
    """Primitive integer minimal polynomial of an exact real value, in x."""
    if K != QQ and not is_quadratic(K):
        if not getattr(K, "is_AlgebraicField", False):
            raise DomainError(f"no minimal polynomial over {K}")
        element = K.ext.field_element([QQ.to_sympy(QQ.convert(c)) for c in value.to_list()])
        coeffs = [rational(c) for c in element.minpoly_of_element().all_coeffs()]
        return primitive_polynomial(Poly(coeffs, x, domain="QQ"))
    a, b = quadratic_parts(value, K)
    if not b:
        return primitive_polynomial(affine(-a, 1, x))
    d = radicand_of(K)
    return primitive_polynomial(Poly([QQ(1), -2 * a, a * a - b * b * d], x, domain="QQ"))
