"""Convex-cone criterion for eigenvalue types.

A nilsoliton of eigenvalue type (mu; d) exists only if
v = D(Tr(phi) [mu] - Tr(phi^2) [1]) lies in the closed convex cone spanned by
F = {f_k - f_i - f_j : mu_i + mu_j = mu_k}. The decision is an exact LP; the certificate is
either the nonnegative solution T or a separating vector a.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from nilsolv.core import lp
from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import format_rational, parse_rational, rational
from nilsolv.freelie import witt_dimensions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenvalueType:
    """(mu_1 < ... < mu_p; d_1, ..., d_p)."""

    mu: Tuple[Any, ...]
    d: Tuple[int, ...]

    def __post_init__(self):
        mu = tuple(rational(x) for x in self.mu)
        d = tuple(int(x) for x in self.d)
        if not mu:
            raise DomainError("eigenvalue type is empty")
        if len(mu) != len(d):
            raise DomainError(f"{len(mu)} eigenvalues but {len(d)} multiplicities")
        if mu[0] <= 0:
            raise DomainError("eigenvalues must be positive")
        if any(a >= b for a, b in zip(mu, mu[1:])):
            raise DomainError("eigenvalues must be strictly increasing")
        if any(x < 1 for x in d):
            raise DomainError("multiplicities must be at least 1")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "d", d)

    @property
    def p(self) -> int:
        return len(self.mu)

    @property
    def trace(self) -> Any:
        return sum((d * x for x, d in zip(self.mu, self.d)), QQ(0))

    @property
    def trace_squares(self) -> Any:
        return sum((d * x * x for x, d in zip(self.mu, self.d)), QQ(0))

    def scaled(self, factor: Any) -> "EigenvalueType":
        s = rational(factor)
        if s <= 0:
            raise DomainError("scaling factor must be positive")
        return EigenvalueType(tuple(s * x for x in self.mu), self.d)

    def __str__(self) -> str:
        mu = ",".join(_short(x) for x in self.mu)
        return f"{mu};{','.join(str(x) for x in self.d)}"


def _short(q: Any) -> str:
    q = rational(q)
    return str(int(q.numerator)) if q.denominator == 1 else format_rational(q)


def parse_type(text: str) -> EigenvalueType:
    """Parse "mu1,mu2,...;d1,d2,..."; eigenvalues may be fractions."""
    if text.count(";") != 1:
        raise DomainError(f"eigenvalue type must look like 'mu1,mu2;d1,d2', got {text!r}")
    left, right = text.split(";")
    try:
        mu = tuple(parse_rational(x) for x in left.split(",") if x.strip())
        d = tuple(int(x) for x in right.split(",") if x.strip())
    except ValueError as e:
        raise DomainError(f"bad multiplicity in {text!r}") from e
    return EigenvalueType(mu, d)


def canonical_type(m: int, p: int) -> EigenvalueType:
    """Type of the canonical derivation of f(m, p): (1, ..., p; d_1(m), ..., d_p(m))."""
    return EigenvalueType(tuple(QQ(k) for k in range(1, p + 1)), tuple(witt_dimensions(m, p)))


def cone_vector(t: EigenvalueType) -> List[Any]:
    """v_k = d_k sum_i d_i mu_i (mu_k - mu_i)."""
    return [
        dk * sum((di * mi * (mk - mi) for mi, di in zip(t.mu, t.d)), QQ(0))
        for mk, dk in zip(t.mu, t.d)
    ]


@dataclass(frozen=True)
class Root:
    """f_k - f_i - f_j with mu_i + mu_j = mu_k, i <= j (0-based)."""

    k: int
    i: int
    j: int

    def vector(self, p: int) -> Tuple[int, ...]:
        out = [0] * p
        out[self.k] += 1
        out[self.i] -= 1
        out[self.j] -= 1
        return tuple(out)


def roots(t: EigenvalueType) -> List[Root]:
    position = {x: k for k, x in enumerate(t.mu)}
    out: List[Root] = []
    for i in range(t.p):
        for j in range(i, t.p):
            k = position.get(t.mu[i] + t.mu[j])
            if k is not None:
                out.append(Root(k, i, j))
    return out


def root_set(t: EigenvalueType) -> List[Tuple[int, ...]]:
    return [r.vector(t.p) for r in roots(t)]


def _dot(a: Sequence[Any], b: Sequence[Any]) -> Any:
    return sum((x * y for x, y in zip(a, b)), QQ(0))


def is_separating(a: Sequence[Any], F: Sequence[Sequence[int]], v: Sequence[Any]) -> bool:
    """a certifies v outside cone(F).

    Either <a, f> <= 0 on F with <a, v> > 0, or <a, f> < 0 on F with <a, v> = 0 and v != 0.
    """
    a = [rational(x) for x in a]
    products = [_dot(a, f) for f in F]
    av = _dot(a, v)
    if av > 0 and all(x <= 0 for x in products):
        return True
    return av == 0 and any(v) and all(x < 0 for x in products)


def primitive(vector: Sequence[Any]) -> Tuple[int, ...]:
    """Positive multiple of a rational vector with coprime integer entries."""
    qs = [rational(x) for x in vector]
    lcm = 1
    for q in qs:
        den = int(q.denominator)
        lcm = lcm * den // gcd(lcm, den)
    ints = [int(q * lcm) for q in qs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints) if g else tuple(ints)


@dataclass(frozen=True)
class ConeCertificate:
    """Feasible with T (keys (i, j), 1-based, i <= j), or Infeasible with separating vector a."""

    type: EigenvalueType
    feasible: bool
    T: Dict[Tuple[int, int], Any] = field(default_factory=dict)
    a: Optional[Tuple[int, ...]] = None

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    def verify(self) -> bool:
        t = self.type
        v = cone_vector(t)
        if not self.feasible:
            return self.a is not None and is_separating(self.a, root_set(t), v)
        if any(x < 0 for x in self.T.values()):
            return False
        lhs = [QQ(0)] * t.p
        for (i, j), value in self.T.items():
            column = _column(Root(_target(t, i - 1, j - 1), i - 1, j - 1), t.p)
            for k in range(t.p):
                lhs[k] += column[k] * value
        rhs = _rhs(t, v)
        return lhs == rhs


def _target(t: EigenvalueType, i: int, j: int) -> int:
    k = {x: k for k, x in enumerate(t.mu)}.get(t.mu[i] + t.mu[j])
    if k is None:
        raise DomainError(f"mu_{i + 1} + mu_{j + 1} is not an eigenvalue")
    return k


def _column(root: Root, p: int) -> List[Any]:
    """Coefficient of T_ij in sum_{mu_i + mu_j = mu_k} T_ij - 2 sum_j T_kj."""
    weight = 1 if root.i == root.j else 2
    return [QQ(weight * x) for x in root.vector(p)]


def _rhs(t: EigenvalueType, v: Sequence[Any]) -> List[Any]:
    return [QQ(4) * x / t.trace for x in v]


def cone_test(t: EigenvalueType) -> ConeCertificate:
    """Exact decision of v in cone(F), with a re-verified certificate."""
    v = cone_vector(t)
    rs = roots(t)
    F = [r.vector(t.p) for r in rs]

    if not any(v):
        certificate = ConeCertificate(t, True)
    elif not rs:
        certificate = ConeCertificate(t, False, a=primitive(v))
    else:
        columns = [_column(r, t.p) for r in rs]
        A_eq = [[columns[c][k] for c in range(len(rs))] for k in range(t.p)]
        x = lp.feasible_point(A_eq, _rhs(t, v))
        if x is not None:
            T = {(r.i + 1, r.j + 1): value for r, value in zip(rs, x) if value}
            certificate = ConeCertificate(t, True, T=T)
        else:
            certificate = ConeCertificate(t, False, a=_separator(F, v))
        if not certificate.verify():
            logger.debug("cone certificate for %s did not verify; re-solving with the tableau", t)
            x = lp.feasible_point(A_eq, _rhs(t, v), engine="tableau")
            if x is not None:
                T = {(r.i + 1, r.j + 1): value for r, value in zip(rs, x) if value}
                certificate = ConeCertificate(t, True, T=T)
            else:
                certificate = ConeCertificate(t, False, a=_separator(F, v))

    if not certificate.verify():
        raise DomainError(f"cone certificate for {t} failed verification")
    logger.debug("cone test %s: %s", t, certificate.verdict)
    return certificate


def _separator(F: Sequence[Sequence[int]], v: Sequence[Any]) -> Tuple[int, ...]:
    """max <a, v> over <a, f> <= 0, -1 <= a <= 1, with a = a_plus - a_minus."""
    p = len(v)
    c = [-x for x in v] + list(v)
    A_ub: List[List[Any]] = [list(f) + [-x for x in f] for f in F]
    b_ub: List[Any] = [QQ(0)] * len(F)
    for i in range(2 * p):
        row = [QQ(0)] * (2 * p)
        row[i] = QQ(1)
        A_ub.append(row)
        b_ub.append(QQ(1))
    for engine in lp.ENGINES:
        result = lp.minimize(c, A_ub, b_ub, engine=engine)
        if result is None or result[0] >= 0:
            continue
        x = result[1]
        a = primitive([x[i] - x[p + i] for i in range(p)])
        if is_separating(a, F, v):
            return a
    raise DomainError("no separating vector found for an infeasible cone system")


def convex3_holds(d: Sequence[int]) -> bool:
    """Closed form for p = 3: 1/d_3 + 2/d_2 >= 1/d_1."""
    d1, d2, d3 = (QQ(x) for x in d[:3])
    return 1 / d3 + 2 / d2 >= 1 / d1


def convex4_inequalities(d: Sequence[int]) -> List[bool]:
    """The three necessary conditions for p = 4."""
    d1, d2, d3, d4 = (int(x) for x in d[:4])
    return [
        6 * d4 * d1 + 2 * d4 * d3 + d2 * d1 + 2 * d3 * d1 >= d2 * d3,
        6 * d4 * d1 + d2 * d1 + d2 * d3 + 4 * d3 * d1 >= 2 * d4 * d3,
        3 * d4 * d1 + 4 * d4 * d2 + 2 * d3 * d1 + 2 * d2 * d3 >= d4 * d3,
    ]


F28_SEPARATOR = (14, 28, 42, 5, -32, -18, -4, 10)


def separating_vector_family(m: int, p: int) -> Dict[str, Tuple[Any, ...]]:
    """Hand-built candidate separators for the canonical type of f(m, p), p >= 5.

    "generic": (1/d_1, ..., 1/d_{p-2}, -(p-2)(p+1)/(2 d_{p-1}), (p-2)(p-1)/(2 d_p)), orthogonal to v;
    "ones": (1, ..., 1, x) with x making it orthogonal to v;
    "explicit": the vector for f(2, 8).
    """
    if p < 5:
        raise DomainError("hand-built separators are for p >= 5")
    t = canonical_type(m, p)
    d = [QQ(x) for x in t.d]
    v = cone_vector(t)
    family: Dict[str, Tuple[Any, ...]] = {
        "generic": tuple(
            [1 / x for x in d[: p - 2]]
            + [-QQ((p - 2) * (p + 1), 2) / d[p - 2], QQ((p - 2) * (p - 1), 2) / d[p - 1]]
        ),
        "ones": tuple([QQ(1)] * (p - 1) + [-sum(v[: p - 1], QQ(0)) / v[p - 1]]),
    }
    if (m, p) == (2, 8):
        family["explicit"] = tuple(QQ(x) for x in F28_SEPARATOR)
    return family
