"""Words, contents and the Witt dimension formula."""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius as _mobius

from nilsolv.core.errors import DomainError


@dataclass(frozen=True)
class LieWord:
    """Left-normed bracket e_{i1 i2 ... ik} = [...[e_i1, e_i2], ...], e_ik]."""

    letters: Tuple[int, ...]

    def __post_init__(self):
        if not self.letters:
            raise DomainError("a Lie word needs at least one letter")
        for letter in self.letters:
            if not isinstance(letter, int) or letter < 1:
                raise DomainError(f"invalid generator label {letter!r}")

    @classmethod
    def parse(cls, text: str) -> "LieWord":
        """Accept "121" (single-digit labels) or "1,2,1"."""
        text = text.strip().removeprefix("e_").removeprefix("e")
        parts = text.split(",") if "," in text else list(text)
        try:
            return cls(tuple(int(part) for part in parts))
        except ValueError as e:
            raise DomainError(f"malformed word {text!r}") from e

    @property
    def degree(self) -> int:
        return len(self.letters)

    def check(self, m: int) -> None:
        for letter in self.letters:
            if letter > m:
                raise DomainError(f"generator e{letter} does not exist for m={m}")

    def __str__(self) -> str:
        sep = "," if any(letter > 9 for letter in self.letters) else ""
        return "e_" + sep.join(str(letter) for letter in self.letters)


def content(word: LieWord, m: int) -> Tuple[int, ...]:
    """Component i counts the occurrences of label i+1."""
    word.check(m)
    counts = [0] * m
    for letter in word.letters:
        counts[letter - 1] += 1
    return tuple(counts)


def mobius(n: int) -> int:
    """Moebius function mu(n) for n >= 1."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"mobius needs a positive integer, got {n!r}")
    return int(_mobius(n))


def witt_dimension(m: int, k: int) -> int:
    """d_k(m): dimension of the degree-k part of the free Lie algebra on m generators."""
    if m < 2:
        raise DomainError(f"need at least two generators, got m={m}")
    if k < 1:
        raise DomainError(f"degree must be positive, got k={k}")
    total = sum(mobius(d) * m ** (k // d) for d in divisors(k))
    return total // k


def witt_dimensions(m: int, p: int) -> List[int]:
    """[d_1(m), ..., d_p(m)]."""
    return [witt_dimension(m, k) for k in range(1, p + 1)]


def dimension(m: int, p: int) -> int:
    return sum(witt_dimensions(m, p))


def witt_table(m_values: Sequence[int], k_max: int) -> List[List[int]]:
    """Rows k = 1..k_max, one column per m."""
    return [[witt_dimension(m, k) for m in m_values] for k in range(1, k_max + 1)]
