"""Ricci forms of metric Lie algebras.

Nothing is orthonormalized: sums over an orthonormal basis sum_i E_i (x) E_i are replaced by
sum_ab (G^-1)_ab b_a (x) b_b, so entries stay in the field of the parameters or in the parameter ring.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import to_float
from nilsolv.freelie import Element, FreeLieAlgebra
from nilsolv.metric.admissible import GradedInnerProduct

logger = logging.getLogger(__name__)

Brackets = Dict[Tuple[int, int], Dict[int, Any]]
Vector = Union[Element, Mapping[int, Any]]


@dataclass
class RicciForm:
    """Ric(b_a, b_b) as dense rows over `domain`; `gram` gives the operator G^-1 Ric."""

    rows: List[List[Any]]
    domain: Any
    gram: Optional[List[List[Any]]] = None
    labels: Optional[List[str]] = None
    _operator: Optional[List[List[Any]]] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def entry(self, a: int, b: int) -> Any:
        return self.rows[a][b]

    def _coords(self, x: Vector) -> Dict[int, Any]:
        items = x.items() if isinstance(x, (Element, Mapping)) else enumerate(x)
        return {i: self.domain.convert_from(v, QQ) if not isinstance(v, type(self.domain.zero)) else v
                for i, v in items if v}

    def quadratic(self, x: Vector, y: Optional[Vector] = None) -> Any:
        """Ric(x, y); y defaults to x."""
        cx = self._coords(x)
        cy = cx if y is None else self._coords(y)
        total = self.domain.zero
        for a, xa in cx.items():
            row = self.rows[a]
            for b, yb in cy.items():
                if row[b]:
                    total += xa * row[b] * yb
        return total

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.rows[a][b] == self.rows[b][a] for a in range(n) for b in range(a + 1, n))

    def off_block(self, blocks: Iterable[Iterable[int]]) -> List[Tuple[int, int]]:
        """Index pairs a < b in different blocks with Ric(b_a, b_b) != 0."""
        owner: Dict[int, int] = {}
        for i, block in enumerate(blocks):
            for a in block:
                owner[a] = i
        return [
            (a, b)
            for a in range(self.dim) for b in range(a + 1, self.dim)
            if (self.rows[a][b] or self.rows[b][a]) and owner.get(a) != owner.get(b)
        ]

    def is_block_diagonal(self, blocks: Iterable[Iterable[int]]) -> bool:
        return not self.off_block(blocks)

    def operator(self) -> List[List[Any]]:
        """ric = G^-1 Ric."""
        if self._operator is None:
            if self.gram is None:
                raise DomainError("Ricci operator needs the Gram matrix")
            inverse = _inverse(self.gram, self.domain)
            self._operator = _matmul(inverse, self.rows, self.domain)
        return self._operator

    def is_zero(self) -> bool:
        return not any(v for row in self.rows for v in row)

    def max_abs(self) -> float:
        return max((abs(to_float(v, self.domain)) for row in self.rows for v in row if v), default=0.0)

    def to_float(self) -> List[List[float]]:
        return [[to_float(v, self.domain) if v else 0.0 for v in row] for row in self.rows]


@dataclass
class MetricLieAlgebra:
    """Bracket table over `domain` (ordered pairs, both orders present) and a Gram matrix."""

    dim: int
    domain: Any
    brackets: Brackets
    gram: List[List[Any]]
    nilpotent: bool = False
    labels: Optional[List[str]] = None

    @classmethod
    def from_free(cls, alg: FreeLieAlgebra, g: GradedInnerProduct) -> "MetricLieAlgebra":
        if g.is_symbolic:
            raise DomainError("a metric Lie algebra needs numeric parameters")
        return cls(
            dim=alg.dim,
            domain=g.domain,
            brackets=lifted_brackets(alg, g.lift),
            gram=g.rows(),
            nilpotent=True,
            labels=[alg.label(i) for i in range(alg.dim)],
        )

    def structure(self, a: int, b: int) -> Dict[int, Any]:
        return self.brackets.get((a, b), {})


def lifted_brackets(alg: FreeLieAlgebra, lift) -> Brackets:
    table: Brackets = {}
    for (a, b) in alg.nonzero_pairs():
        value = alg.bracket_basis(a, b)
        table[(a, b)] = {c: lift(v) for c, v in value.items()}
        table[(b, a)] = {c: lift(-v) for c, v in value.items()}
    return table


def _dm(rows: List[List[Any]], K: Any) -> DomainMatrix:
    return DomainMatrix([list(r) for r in rows], (len(rows), len(rows[0]) if rows else 0), K)


def _inverse(rows: List[List[Any]], K: Any) -> List[List[Any]]:
    if not K.is_Field:
        raise DomainError("matrix inversion needs numeric entries")
    try:
        return _dm(rows, K).inv().to_list()
    except (DMNonInvertibleMatrixError, ZeroDivisionError) as e:
        raise DomainError("Gram matrix is singular") from e


def _matmul(A: List[List[Any]], B: List[List[Any]], K: Any) -> List[List[Any]]:
    return (_dm(A, K) * _dm(B, K)).to_list()


def _combine(terms: Iterable[Tuple[Any, List[List[Any]]]], n: int, K: Any) -> List[List[Any]]:
    out = [[K.zero] * n for _ in range(n)]
    for weight, rows in terms:
        for i in range(n):
            for j in range(n):
                if rows[i][j]:
                    out[i][j] += weight * rows[i][j]
    return out


def _lambda_and_y(
    n: int,
    brackets: Brackets,
    G: Mapping[int, Mapping[int, Any]],
    H: Mapping[int, Mapping[int, Any]],
    K: Any,
) -> Tuple[Dict[int, Dict[int, Any]], Dict[int, Dict[int, Any]]]:
    """Lambda^{ef} = sum c^e_ab H_aa' H_bb' c^f_a'b' and Y_cd = sum H_aa' <[b_c, b_a], [b_d, b_a']>."""
    lam: Dict[int, Dict[int, Any]] = {}
    for (a, b), image in brackets.items():
        Ha, Hb = H.get(a), H.get(b)
        if not Ha or not Hb:
            continue
        for a2, ha in Ha.items():
            for b2, hb in Hb.items():
                target_image = brackets.get((a2, b2))
                if not target_image:
                    continue
                w = ha * hb
                for e, ce in image.items():
                    row = lam.setdefault(e, {})
                    for f, cf in target_image.items():
                        row[f] = row.get(f, K.zero) + w * ce * cf

    partners: Dict[int, List[Tuple[int, Dict[int, Any]]]] = {}
    for (c, a), image in brackets.items():
        partners.setdefault(a, []).append((c, image))

    Y: Dict[int, Dict[int, Any]] = {}
    for a, Ha in H.items():
        for c, vec_c in partners.get(a, []):
            Gv: Dict[int, Any] = {}
            for g, coeff in vec_c.items():
                for g2, value in G.get(g, {}).items():
                    Gv[g2] = Gv.get(g2, K.zero) + coeff * value
            for a2, h in Ha.items():
                for d, vec_d in partners.get(a2, []):
                    dot = K.zero
                    for g2, coeff in vec_d.items():
                        if g2 in Gv:
                            dot += coeff * Gv[g2]
                    if dot:
                        row = Y.setdefault(c, {})
                        row[d] = row.get(d, K.zero) + h * dot
    return lam, Y


def ricci_nilpotent(alg: FreeLieAlgebra, g: GradedInnerProduct) -> RicciForm:
    """Ric(X, Y) = 1/4 sum <X, [E_i, E_j]><Y, [E_i, E_j]> - 1/2 sum <[X, E_i], [Y, E_i]>."""
    if g.algebra is not alg and g.algebra.key != alg.key:
        raise DomainError(f"inner product is not defined on {alg}")
    K = g.domain
    n = alg.dim
    rows = [[K.zero] * n for _ in range(n)]
    labels = [alg.label(i) for i in range(n)]
    if alg.p == 1:
        return RicciForm(rows, K, None if g.is_symbolic else g.rows(), labels)

    G = g.gram()
    H = g.inverse_blocks(max_degree=alg.p - 1)
    brackets = lifted_brackets(alg, g.lift)
    lam, Y = _lambda_and_y(n, brackets, G, H, K)

    quarter, half = g.lift(QQ(1, 4)), g.lift(QQ(1, 2))
    for x in range(n):
        for e, Gxe in G.get(x, {}).items():
            for f, value in lam.get(e, {}).items():
                for y, Gfy in G.get(f, {}).items():
                    rows[x][y] += quarter * Gxe * value * Gfy
    for c, row in Y.items():
        for d, value in row.items():
            rows[c][d] -= half * value

    if g.scalars.ring is not None:
        rows = [[g.scalars.laurent(v) if v else v for v in row] for row in rows]
    logger.debug("Ricci form of %s assembled (%d nonzero entries)", alg, sum(1 for r in rows for v in r if v))
    return RicciForm(rows, K, None if g.is_symbolic else g.rows(), labels)


def ricci_general(mla: MetricLieAlgebra) -> RicciForm:
    """ric = M - S(ad_H) - 1/2 B with <H, X> = Tr ad_X and B the Killing operator."""
    K = mla.domain
    n = mla.dim
    Hl = _inverse(mla.gram, K)
    G = {a: {b: v for b, v in enumerate(row) if v} for a, row in enumerate(mla.gram)}
    H = {a: {b: v for b, v in enumerate(row) if v} for a, row in enumerate(Hl)}
    lam, Y = _lambda_and_y(n, mla.brackets, G, H, K)
    lam_rows = [[lam.get(e, {}).get(f, K.zero) for f in range(n)] for e in range(n)]
    y_rows = [[Y.get(c, {}).get(d, K.zero) for d in range(n)] for c in range(n)]

    quarter, half, one = K.convert_from(QQ(1, 4), QQ), K.convert_from(QQ(1, 2), QQ), K.one
    M = _combine([(quarter, _matmul(lam_rows, mla.gram, K)), (-half, _matmul(Hl, y_rows, K))], n, K)

    # mean curvature vector: <H, X> = Tr ad_X
    tau = [K.zero] * n
    for (x, j), image in mla.brackets.items():
        if j in image:
            tau[x] += image[j]
    h = [sum((Hl[a][b] * tau[b] for b in range(n)), K.zero) for a in range(n)]
    ad_h = [[K.zero] * n for _ in range(n)]
    for (a, j), image in mla.brackets.items():
        if h[a]:
            for i, value in image.items():
                ad_h[i][j] += h[a] * value
    ad_h_t = [[ad_h[j][i] for j in range(n)] for i in range(n)]
    adjoint = _matmul(_matmul(Hl, ad_h_t, K), mla.gram, K)
    S = _combine([(half, ad_h), (half, adjoint)], n, K)

    # Killing form B(x, y) = Tr(ad_x ad_y)
    kappa = [[K.zero] * n for _ in range(n)]
    for (x, j), image_x in mla.brackets.items():
        for k, cx in image_x.items():
            for y in range(n):
                cy = mla.brackets.get((y, k), {}).get(j)
                if cy:
                    kappa[x][y] += cx * cy
    B = _matmul(Hl, kappa, K)

    ric = _combine([(one, M), (-one, S), (-half, B)], n, K)
    form = RicciForm(_matmul(mla.gram, ric, K), K, mla.gram, mla.labels)
    form._operator = ric
    return form


def scalar_curvature(ricci: RicciForm) -> Any:
    """Trace of the Ricci operator."""
    op = ricci.operator()
    return sum((op[i][i] for i in range(ricci.dim)), ricci.domain.zero)
