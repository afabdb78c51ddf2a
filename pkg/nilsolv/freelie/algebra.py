"""Free nilpotent Lie algebra f(m, p) with exact structure constants."""

import logging
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from config import MAX_DIM, MAX_P, MAX_P_TWO_GENERATORS
from nilsolv.core.errors import DomainError, ResourceError
from nilsolv.core.numbers import rational
from nilsolv.freelie.hall import HallTree, hall_basis, label, nested
from nilsolv.freelie.words import LieWord, dimension, witt_dimension

logger = logging.getLogger(__name__)

Content = Tuple[int, ...]
Word = Tuple[int, ...]


class Element:
    """Sparse rational vector over the Hall basis of one algebra."""

    __slots__ = ("algebra", "_coeffs")

    def __init__(self, algebra: "FreeLieAlgebra", coeffs: Optional[Mapping[int, Any]] = None):
        self.algebra = algebra
        self._coeffs: Dict[int, Any] = {}
        for index, value in (coeffs or {}).items():
            if not 0 <= index < algebra.dim:
                raise DomainError(f"basis index {index} out of range for {algebra}")
            if value:
                self._coeffs[index] = value

    @property
    def coeffs(self) -> Dict[int, Any]:
        return dict(self._coeffs)

    def items(self) -> Iterator[Tuple[int, Any]]:
        return iter(self._coeffs.items())

    def __getitem__(self, index: int) -> Any:
        return self._coeffs.get(index, QQ(0))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def _same(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.algebra.key != self.algebra.key:
            raise DomainError("elements belong to different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        out = dict(self._coeffs)
        for index, value in other._coeffs.items():
            out[index] = out.get(index, QQ(0)) + value
        return Element(self.algebra, out)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.algebra, {i: -v for i, v in self._coeffs.items()})

    def __mul__(self, scalar: Any) -> "Element":
        q = rational(scalar)
        return Element(self.algebra, {i: q * v for i, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra.key == other.algebra.key and self._coeffs == other._coeffs

    __hash__ = None

    def degrees(self) -> List[int]:
        return sorted({self.algebra.basis[i].degree for i in self._coeffs})

    def component(self, degree: int) -> "Element":
        basis = self.algebra.basis
        return Element(self.algebra, {i: v for i, v in self._coeffs.items() if basis[i].degree == degree})

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        terms = [f"{v}*{self.algebra.label(i)}" for i, v in sorted(self._coeffs.items())]
        return " + ".join(terms)


class FreeLieAlgebra:
    """f(m, p): Hall basis grouped by degree, content classes and the bracket table.

    The structure table maps a < b to the sparse expansion of [b_a, b_b]; pairs with
    deg(a) + deg(b) > p are absent.
    """

    def __init__(self, m: int, p: int):
        self.m = m
        self.p = p
        self.basis: List[HallTree] = hall_basis(m, p)
        self.dim = len(self.basis)

        self.degree_ranges: Dict[int, range] = {}
        start = 0
        for k in range(1, p + 1):
            size = sum(1 for t in self.basis if t.degree == k)
            self.degree_ranges[k] = range(start, start + size)
            start += size

        self.classes: Dict[Content, List[int]] = {}
        for tree in self.basis:
            self.classes.setdefault(tree.content, []).append(tree.index)

        self._expansions: List[Dict[Word, int]] = []
        for tree in self.basis:
            self._expansions.append(self._expand(tree))

        self._pivots: Dict[Content, Tuple[List[Word], List[List[Any]]]] = {}
        for key, indices in self.classes.items():
            self._pivots[key] = self._pivot_words(indices)

        self._table: Dict[Tuple[int, int], Dict[int, Any]] = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                if self.basis[a].degree + self.basis[b].degree > p:
                    continue
                value = self._bracket_basis(a, b)
                if value:
                    self._table[(a, b)] = value

    @property
    def key(self) -> Tuple[int, int]:
        return (self.m, self.p)

    def __repr__(self) -> str:
        return f"f({self.m},{self.p})"

    # construction -----------------------------------------------------------

    def _expand(self, tree: HallTree) -> Dict[Word, int]:
        """Image in the free associative algebra: [A, B] = AB - BA."""
        if tree.is_generator:
            return {(tree.generator,): 1}
        left = self._expansions[tree.left]
        right = self._expansions[tree.right]
        out: Dict[Word, int] = {}
        for u, x in left.items():
            for v, y in right.items():
                out[u + v] = out.get(u + v, 0) + x * y
                out[v + u] = out.get(v + u, 0) - x * y
        return {w: c for w, c in out.items() if c}

    def _pivot_words(self, indices: List[int]) -> Tuple[List[Word], List[List[Any]]]:
        """Words whose coefficients determine a Lie element of this content, with the inverse map."""
        words = sorted({w for i in indices for w in self._expansions[i]})
        column = {w: j for j, w in enumerate(words)}
        rows = {
            r: {column[w]: QQ(c) for w, c in self._expansions[i].items()}
            for r, i in enumerate(indices)
        }
        matrix = DomainMatrix(rows, (len(indices), len(words)), QQ)
        _, pivots = matrix.rref()
        if len(pivots) != len(indices):
            raise DomainError(f"Hall elements of content {self.basis[indices[0]].content} are dependent")
        square = matrix.extract(list(range(len(indices))), list(pivots))
        inverse = square.to_dense().inv().to_list()
        return [words[j] for j in pivots], inverse

    def _bracket_basis(self, a: int, b: int) -> Dict[int, Any]:
        ta, tb = self.basis[a], self.basis[b]
        target = tuple(x + y for x, y in zip(ta.content, tb.content))
        if target not in self.classes:
            return {}
        words, inverse = self._pivots[target]
        ea, eb = self._expansions[a], self._expansions[b]
        da, db = ta.degree, tb.degree
        y = [
            ea.get(w[:da], 0) * eb.get(w[da:], 0) - eb.get(w[:db], 0) * ea.get(w[db:], 0)
            for w in words
        ]
        out: Dict[int, Any] = {}
        for j, index in enumerate(self.classes[target]):
            value = sum((QQ(y[r]) * inverse[r][j] for r in range(len(words)) if y[r]), QQ(0))
            if value:
                out[index] = value
        return out

    # access -----------------------------------------------------------------

    def degree(self, index: int) -> int:
        return self.basis[index].degree

    def degree_sizes(self) -> List[int]:
        return [len(self.degree_ranges[k]) for k in range(1, self.p + 1)]

    def block(self, index: int) -> List[int]:
        """Indices sharing the content of `index`."""
        return self.classes[self.basis[index].content]

    def bracket_basis(self, a: int, b: int) -> Dict[int, Any]:
        """Sparse expansion of [b_a, b_b]."""
        if a == b:
            return {}
        if a < b:
            return self._table.get((a, b), {})
        return {c: -v for c, v in self._table.get((b, a), {}).items()}

    def nonzero_pairs(self) -> Iterable[Tuple[int, int]]:
        return self._table.keys()

    def label(self, index: int) -> str:
        return label(self.basis, index)

    def nested(self, index: int):
        return nested(self.basis, index)

    def generator(self, label_: int) -> Element:
        if not 1 <= label_ <= self.m:
            raise DomainError(f"generator e{label_} does not exist for m={self.m}")
        return Element(self, {label_ - 1: QQ(1)})

    def basis_element(self, index: int) -> Element:
        return Element(self, {index: QQ(1)})

    def zero(self) -> Element:
        return Element(self)

    def word(self, letters: Word) -> Element:
        """Normal form of the left-normed word."""
        if not letters:
            raise DomainError("a Lie word needs at least one letter")
        if len(letters) > self.p:
            return self.zero()
        value = self.generator(letters[0])
        for letter in letters[1:]:
            value = bracket(self, value, self.generator(letter))
        return value


def max_class(m: int) -> int:
    return MAX_P_TWO_GENERATORS if m == 2 else MAX_P


def build_algebra(m: int, p: int, max_dim: Optional[int] = None) -> FreeLieAlgebra:
    """Construct f(m, p); raises ResourceError above the configured ceilings."""
    if m < 2:
        raise DomainError(f"need at least two generators, got m={m}")
    if p < 1:
        raise DomainError(f"nilpotency class must be positive, got p={p}")
    ceiling = MAX_DIM if max_dim is None else max_dim
    required = dimension(m, p)
    if required > ceiling:
        raise ResourceError(f"f({m},{p}) has dimension {required} > {ceiling}", required=required)
    if p > max_class(m):
        raise ResourceError(f"class {p} exceeds the ceiling {max_class(m)} for m={m}", required=required)

    alg = FreeLieAlgebra(m, p)
    for k in range(1, p + 1):
        if len(alg.degree_ranges[k]) != witt_dimension(m, k):
            raise DomainError(f"Hall basis size mismatch in degree {k}")
    logger.info("built f(%d,%d): dim %d, %d nonzero brackets", m, p, alg.dim, len(alg._table))
    return alg


def bracket(alg: FreeLieAlgebra, x: Element, y: Element) -> Element:
    """Bilinear extension of the structure table; truncates above class p."""
    for z in (x, y):
        if not isinstance(z, Element) or z.algebra.key != alg.key:
            raise DomainError(f"element does not belong to {alg}")
    out: Dict[int, Any] = {}
    for a, xa in x.items():
        for b, yb in y.items():
            for c, v in alg.bracket_basis(a, b).items():
                out[c] = out.get(c, QQ(0)) + xa * yb * v
    return Element(alg, out)


Expression = Union[LieWord, Element, int, Sequence]


def normal_form(alg: FreeLieAlgebra, expr: Expression) -> Element:
    """Coordinates over the Hall basis.

    Accepts a LieWord, a sequence of generator labels (left-normed word), an Element,
    a generator label, or a nested pair [x, y] of any of these.
    """
    if isinstance(expr, Element):
        if expr.algebra.key != alg.key:
            raise DomainError(f"element does not belong to {alg}")
        return expr
    if isinstance(expr, LieWord):
        expr.check(alg.m)
        return alg.word(expr.letters)
    if isinstance(expr, bool):
        raise DomainError(f"invalid bracket expression {expr!r}")
    if isinstance(expr, int):
        return alg.generator(expr)
    if isinstance(expr, (list, tuple)):
        if expr and all(isinstance(x, int) and not isinstance(x, bool) for x in expr):
            word = LieWord(tuple(expr))
            word.check(alg.m)
            return alg.word(word.letters)
        if len(expr) == 2:
            return bracket(alg, normal_form(alg, expr[0]), normal_form(alg, expr[1]))
    raise DomainError(f"invalid bracket expression {expr!r}")
