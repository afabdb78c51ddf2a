"""Metric parameters - named squared norms of the admissible inner product.

Numeric slots hold elements of QQ or of a real algebraic number field; symbolic slots become
generators of a rational polynomial ring, with a separate generator for the inverse of
every symbolic scalar below the top degree.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from nilsolv.core.errors import DomainError, UnsupportedCaseError
from nilsolv.core.numbers import convert, is_positive, rational

SYMBOLIC = "symbolic"

BLOCK_SLOTS = ("v11", "v12", "v22", "w11", "w12", "w22")
BLOCKS = {"V": ("v11", "v12", "v22"), "W": ("w11", "w12", "w22")}

SLOT_DEGREE = {
    "lambda2": 2, "xi2": 3, "sigma2": 4, "eta2": 4, "alpha2": 5, "gamma2": 5,
    "kappa2": 6, "delta2": 6, "theta2": 6, "nu2": 7,
    "v11": 7, "v12": 7, "v22": 7, "w11": 7, "w12": 7, "w22": 7,
}


def is_symbolic(value: Any) -> bool:
    return isinstance(value, str)


def is_covered(m: int, p: int) -> bool:
    if p <= 3:
        return True
    if p == 4:
        return m in (2, 3)
    return m == 2 and p <= 7


def required_slots(m: int, p: int) -> List[str]:
    """Slots that parameterize the admissible metrics of f(m, p), in degree order."""
    if not is_covered(m, p):
        raise UnsupportedCaseError(f"no admissible-metric parameterization for f({m},{p})")
    slots: List[str] = []
    if p >= 2:
        slots.append("lambda2")
    if p >= 3:
        slots.append("xi2")
    if p >= 4:
        slots.append("sigma2")
        if m == 3:
            slots.append("eta2")
    if p >= 5:
        slots += ["alpha2", "gamma2"]
    if p >= 6:
        slots += ["kappa2", "delta2", "theta2"]
    if p >= 7:
        slots += ["nu2", *BLOCK_SLOTS]
    return slots


def block_determinant(a: Any, b: Any, c: Any) -> Any:
    return a * c - b * b


@dataclass(frozen=True)
class MetricParams:
    """Slot values for one (m, p). `field` is QQ or the number field numeric values live in."""

    m: int
    p: int
    values: Mapping[str, Any]
    field: Any = QQ

    @classmethod
    def symbolic(cls, m: int, p: int, normalized: bool = True) -> "MetricParams":
        """Every slot symbolic, except lambda2 = 1 when normalized."""
        values: Dict[str, Any] = {s: SYMBOLIC for s in required_slots(m, p)}
        if normalized and "lambda2" in values:
            values["lambda2"] = QQ(1)
        return cls(m, p, values).validated()

    @classmethod
    def from_mapping(cls, m: int, p: int, mapping: Mapping[str, Any], field: Any = QQ) -> "MetricParams":
        """Parse a name -> value map; values are rationals, field elements or "symbolic"."""
        unknown = set(mapping) - set(SLOT_DEGREE)
        if unknown:
            raise DomainError(f"unknown metric parameters: {', '.join(sorted(unknown))}")
        values: Dict[str, Any] = {}
        for slot, value in mapping.items():
            if isinstance(value, str) and value.strip().lower() == SYMBOLIC:
                values[slot] = SYMBOLIC
            elif field != QQ and isinstance(value, field.dtype):
                values[slot] = value
            else:
                values[slot] = convert(rational(value), field)
        return cls(m, p, values, field).validated()

    def validated(self) -> "MetricParams":
        required = required_slots(self.m, self.p)
        missing = [s for s in required if s not in self.values]
        if missing:
            raise DomainError(f"missing metric parameters for f({self.m},{self.p}): {', '.join(missing)}")
        extra = [s for s in self.values if s not in required]
        if extra:
            raise DomainError(f"parameters {', '.join(extra)} do not apply to f({self.m},{self.p})")
        for slot in required:
            value = self.values[slot]
            if is_symbolic(value) or slot in BLOCK_SLOTS:
                continue
            if not is_positive(value, self.field):
                raise DomainError(f"{slot} must be positive")
        for name, (a, b, c) in BLOCKS.items():
            if a not in self.values:
                continue
            entries = [self.values[s] for s in (a, b, c)]
            if any(is_symbolic(x) for x in entries):
                if any(not is_symbolic(x) for x in entries):
                    raise DomainError(f"block {name} must be entirely numeric or entirely symbolic")
                continue
            if not (is_positive(entries[0], self.field)
                    and is_positive(block_determinant(*entries), self.field)):
                raise DomainError(f"block {name} is not positive definite")
        return MetricParams(self.m, self.p, dict(self.values), self.field)

    @property
    def slots(self) -> List[str]:
        return required_slots(self.m, self.p)

    @property
    def symbolic_slots(self) -> List[str]:
        return [s for s in self.slots if is_symbolic(self.values[s])]

    @property
    def is_numeric(self) -> bool:
        return not self.symbolic_slots

    def scaled(self, factor: Any) -> "MetricParams":
        """Every numeric value multiplied by factor (a positive rational)."""
        s = convert(rational(factor), self.field)
        values = {k: v if is_symbolic(v) else v * s for k, v in self.values.items()}
        return MetricParams(self.m, self.p, values, self.field).validated()

    def substitute(self, assignment: Mapping[str, Any], field: Optional[Any] = None) -> "MetricParams":
        """Fill symbolic slots from `assignment`, optionally moving to a larger field."""
        target = field or self.field
        values: Dict[str, Any] = {}
        for slot, value in self.values.items():
            if is_symbolic(value) and slot in assignment:
                value = assignment[slot]
            if not is_symbolic(value) and self.field == QQ and target != QQ and not isinstance(value, target.dtype):
                value = convert(value, target)
            values[slot] = value
        return MetricParams(self.m, self.p, values, target).validated()


class ParameterRing:
    """Polynomial ring over QQ carrying the symbolic slots of one MetricParams.

    Inverses are separate generators; `laurent` cancels x * x_inv pairs.
    """

    def __init__(self, params: MetricParams):
        if params.symbolic_slots and params.field != QQ:
            raise DomainError("symbolic parameters require rational numeric values")
        self.params = params
        names: List[str] = []
        self.inverted: List[str] = []
        for slot in params.symbolic_slots:
            names.append(slot)
            if slot not in BLOCK_SLOTS and SLOT_DEGREE[slot] < params.p:
                names.append(f"{slot}_inv")
                self.inverted.append(slot)
        self.names: Tuple[str, ...] = tuple(names)
        self.ring, *gens = ring(",".join(names), QQ) if names else (None,)
        self.gens: Dict[str, Any] = dict(zip(names, gens))
        self._pairs = [(names.index(s), names.index(f"{s}_inv")) for s in self.inverted]
        self.domain = self.ring.to_domain() if self.ring is not None else params.field

    def value(self, slot: str) -> Any:
        v = self.params.values[slot]
        if is_symbolic(v):
            return self.gens[slot]
        if self.ring is None:
            return v
        return self.domain.convert_from(v, QQ)

    def inverse(self, slot: str) -> Any:
        v = self.params.values[slot]
        if is_symbolic(v):
            if slot not in self.inverted:
                raise DomainError(f"{slot} has no inverse generator")
            return self.gens[f"{slot}_inv"]
        if self.ring is None:
            return self.domain.one / v
        return self.domain.convert_from(QQ(1) / v, QQ)

    def laurent(self, poly: Any) -> Any:
        """Cancel s * s_inv in every term."""
        if not self._pairs or not poly:
            return poly
        terms: Dict[Tuple[int, ...], Any] = {}
        for monom, coeff in poly.terms():
            exps = list(monom)
            for i, j in self._pairs:
                common = min(exps[i], exps[j])
                exps[i] -= common
                exps[j] -= common
            key = tuple(exps)
            terms[key] = terms.get(key, QQ(0)) + coeff
        return self.ring.from_dict({k: v for k, v in terms.items() if v})

    def exponents(self, monom: Tuple[int, ...]) -> Dict[str, int]:
        """Net slot exponents of a ring monomial (inverse generators count negatively)."""
        out: Dict[str, int] = {}
        for name, e in zip(self.names, monom):
            if not e:
                continue
            slot = name[:-4] if name.endswith("_inv") else name
            out[slot] = out.get(slot, 0) + (-e if name.endswith("_inv") else e)
        return {k: v for k, v in out.items() if v}

    def monomial(self, exponents: Mapping[str, int]) -> Any:
        """Ring element for a product of slot powers (negative powers use inverse generators)."""
        value = self.ring.one
        for slot, e in exponents.items():
            base = self.gens[slot] if e > 0 else self.gens[f"{slot}_inv"]
            value = value * base ** abs(e)
        return value
