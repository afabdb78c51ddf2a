"""Monomial variables - products of squared parameters treated as positive unknowns."""

from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Mapping, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from nilsolv.metric.params import BLOCK_SLOTS, SLOT_DEGREE

_ORDER = {slot: i for i, slot in enumerate(SLOT_DEGREE)}
_SUPERSCRIPT = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")
_GREEK = {
    "lambda2": "λ", "xi2": "ξ", "sigma2": "σ", "eta2": "η", "alpha2": "α",
    "gamma2": "γ", "kappa2": "κ", "delta2": "δ", "theta2": "θ", "nu2": "ν",
}
# off-diagonal Gram entries of the V and W blocks may be negative
_SIGNED = ("v12", "w12")


@dataclass(frozen=True, order=True)
class MonomialVariable:
    """prod(slot ** exponent); exponents are nonzero and sorted by slot degree."""

    exponents: Tuple[Tuple[str, int], ...]

    @classmethod
    def of(cls, exponents: Mapping[str, int]) -> "MonomialVariable":
        items = [(s, e) for s, e in exponents.items() if e]
        return cls(tuple(sorted(items, key=lambda item: _ORDER[item[0]])))

    @property
    def slots(self) -> Dict[str, int]:
        return dict(self.exponents)

    @property
    def is_positive(self) -> bool:
        """Positive for every admissible metric unless a signed entry has odd power."""
        return all(e % 2 == 0 for s, e in self.exponents if s in _SIGNED)

    @property
    def is_one(self) -> bool:
        return not self.exponents

    @property
    def uses_blocks(self) -> bool:
        return any(s in BLOCK_SLOTS for s, _ in self.exponents)

    def __mul__(self, other: "MonomialVariable") -> "MonomialVariable":
        out = self.slots
        for s, e in other.exponents:
            out[s] = out.get(s, 0) + e
        return MonomialVariable.of(out)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for slot, e in self.exponents:
            if slot in _GREEK:
                parts.append(_GREEK[slot] + str(2 * e).translate(_SUPERSCRIPT))
            else:
                parts.append(slot if e == 1 else f"{slot}{str(e).translate(_SUPERSCRIPT)}")
        return "".join(parts)


def relations(monomials: Sequence[MonomialVariable]) -> List[Dict[MonomialVariable, int]]:
    """Integer vectors n with prod(mu ** n_mu) = 1, a basis of all such relations."""
    slots = sorted({s for mono in monomials for s, _ in mono.exponents}, key=_ORDER.get)
    if not slots or not monomials:
        return []
    rows = [[QQ(mono.slots.get(s, 0)) for mono in monomials] for s in slots]
    kernel = DomainMatrix(rows, (len(slots), len(monomials)), QQ).nullspace().to_list()
    out: List[Dict[MonomialVariable, int]] = []
    for vector in kernel:
        lcm = 1
        for q in vector:
            den = int(q.denominator)
            lcm = lcm * den // gcd(lcm, den)
        ints = [int(q * lcm) for q in vector]
        out.append({mono: n for mono, n in zip(monomials, ints) if n})
    return out


def format_relation(relation: Mapping[MonomialVariable, int]) -> str:
    def side(sign: int) -> str:
        terms = [
            f"({mono})" + ("" if abs(n) == 1 else f"^{abs(n)}")
            for mono, n in relation.items() if n * sign > 0
        ]
        return "·".join(terms) or "1"

    return f"{side(1)} = {side(-1)}"
