"""Exact scalar helpers - rationals, real quadratic fields and fields of isolated real roots."""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Tuple

from sympy import CRootOf, Integer, Poly, Rational, sqrt
from sympy.polys.domains import QQ
from sympy.polys.domains.algebraicfield import AlgebraicField

from nilsolv.core.errors import DomainError


def parse_rational(text: str) -> Any:
    """Parse "n", "n/d" or a finite decimal into an element of QQ."""
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"not a rational number: {text!r}") from e
    return QQ(value.numerator, value.denominator)


def rational(value: Any) -> Any:
    """Coerce int, Fraction, sympy Rational or a QQ element into QQ."""
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, (Rational, Integer)):
        return QQ(int(value.p), int(value.q))
    if isinstance(value, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(value, int):
        return QQ(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    raise DomainError(f"cannot convert {value!r} to a rational")


def format_rational(value: Any) -> str:
    q = rational(value)
    return f"{int(q.numerator)}/{int(q.denominator)}"


@lru_cache(maxsize=None)
def quadratic_field(radicand: int) -> AlgebraicField:
    """QQ(sqrt(radicand)) for a squarefree radicand > 1."""
    if radicand <= 1:
        raise DomainError(f"radicand must exceed 1, got {radicand}")
    return QQ.algebraic_field(sqrt(radicand))


def radicand_of(K) -> int:
    """Squarefree d such that K = QQ(sqrt(d)); 1 for QQ itself."""
    if K == QQ:
        return 1
    minpoly = K.mod.to_list()
    # x^2 - d
    if len(minpoly) != 3 or minpoly[1]:
        raise DomainError(f"{K} is not a real quadratic field")
    return int((-minpoly[2]).numerator)


def from_parts(a: Any, b: Any, K) -> Any:
    """The element a + b*sqrt(d) of K."""
    if K == QQ:
        if rational(b):
            raise DomainError("irrational part given for the rational field")
        return rational(a)
    return K.new([rational(b), rational(a)])


def quadratic_parts(x: Any, K) -> Tuple[Any, Any]:
    """(a, b) with x = a + b*sqrt(d)."""
    if K == QQ:
        return rational(x), QQ(0)
    coeffs = x.to_list()
    if not coeffs:
        return QQ(0), QQ(0)
    if len(coeffs) == 1:
        return QQ.convert(coeffs[0]), QQ(0)
    return QQ.convert(coeffs[1]), QQ.convert(coeffs[0])


def is_quadratic(K) -> bool:
    if K == QQ or not getattr(K, "is_AlgebraicField", False):
        return False
    minpoly = K.mod.to_list()
    return len(minpoly) == 3 and not minpoly[1]


# defining polynomial and isolating interval of the generator, per root field
_ROOT_INTERVALS: Dict[Any, Tuple[Poly, Any, Any]] = {}


def _sym(q: Any) -> Rational:
    q = rational(q)
    return Rational(int(q.numerator), int(q.denominator))


def root_field(factor: Poly, index: int) -> Tuple[AlgebraicField, Any]:
    """QQ(theta) for the index-th real root theta of an irreducible factor, with theta as an element."""
    intervals = factor.intervals()
    if not 0 <= index < len(intervals):
        raise DomainError(f"{factor.as_expr()} has {len(intervals)} real roots, no root {index}")
    (lo, hi), _ = intervals[index]
    K = QQ.algebraic_field(CRootOf(factor, index))
    _ROOT_INTERVALS[K] = (factor, rational(lo), rational(hi))
    return K, K.new([QQ(1), QQ(0)])


def root_interval(K) -> Tuple[Poly, Any, Any]:
    """(defining factor, lo, hi) isolating the generator of a root field."""
    try:
        return _ROOT_INTERVALS[K]
    except KeyError:
        raise DomainError(f"{K} was not built by root_field") from None


def _enclosure(coeffs: List[Any], lo: Any, hi: Any) -> Tuple[Any, Any]:
    """Interval Horner evaluation of a polynomial (highest degree first) on [lo, hi]."""
    a = b = QQ(0)
    for c in coeffs:
        products = [a * lo, a * hi, b * lo, b * hi]
        a, b = min(products) + c, max(products) + c
    return a, b


def _narrowed(x: Any, K, width: Any) -> Tuple[Any, Any]:
    """Enclosure of a root-field element narrower than `width` or excluding zero."""
    factor, lo, hi = root_interval(K)
    coeffs = [QQ.convert(c) for c in x.to_list()]
    while True:
        a, b = _enclosure(coeffs, lo, hi)
        if b - a < width or a > 0 or b < 0:
            return a, b
        s, t = factor.refine_root(_sym(lo), _sym(hi), eps=_sym((hi - lo) / 16))
        lo, hi = rational(s), rational(t)


def is_positive(x: Any, K) -> bool:
    """Real positivity; K.is_positive only looks at the leading coefficient."""
    if K == QQ:
        return x > 0
    if is_quadratic(K):
        return bool(K.to_sympy(x).is_positive)
    if not x:
        return False
    a, b = _narrowed(x, K, QQ(0))
    return a > 0


def to_float(x: Any, K) -> float:
    if K == QQ:
        return float(Fraction(int(x.numerator), int(x.denominator)))
    if is_quadratic(K):
        return float(K.to_sympy(x).evalf(30))
    a, b = _narrowed(x, K, QQ(1, 10**18))
    mid = (a + b) / 2
    return float(Fraction(int(mid.numerator), int(mid.denominator)))


def convert(x: Any, K) -> Any:
    """Map a QQ element (or int) into K."""
    return K.convert_from(rational(x), QQ)
