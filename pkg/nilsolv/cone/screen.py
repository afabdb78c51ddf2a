"""Free-algebra screening - the cone criterion applied to the canonical eigenvalue type."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from config import MAX_SCREEN_P
from nilsolv.cone.criterion import ConeCertificate, canonical_type, cone_test
from nilsolv.core.errors import DomainError, ResourceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Survivor:
    m: int
    p: int
    certificate: Optional[ConeCertificate] = None


@dataclass(frozen=True)
class Screened:
    m: int
    p: int
    certificate: ConeCertificate

    @property
    def verdict(self) -> str:
        return "screened"


ScreenResult = Union[Survivor, Screened]


def screen_free(m: int, p: int, max_p: Optional[int] = None) -> ScreenResult:
    """p <= 2 always survives; otherwise the canonical type of f(m, p) must pass the cone test."""
    if m < 2 or p < 1:
        raise DomainError(f"need m >= 2 and p >= 1, got ({m}, {p})")
    ceiling = MAX_SCREEN_P if max_p is None else max_p
    if p > ceiling:
        raise ResourceError(f"screening class {p} exceeds the ceiling {ceiling}", required=p)
    if p <= 2:
        return Survivor(m, p)
    certificate = cone_test(canonical_type(m, p))
    if certificate.feasible:
        logger.info("f(%d,%d) survives the cone test", m, p)
        return Survivor(m, p, certificate)
    logger.info("f(%d,%d) screened out, separator %s", m, p, certificate.a)
    return Screened(m, p, certificate)


def screen_grid(m_max: int, p_max: int, p_min: int = 3) -> List[Tuple[int, int]]:
    """Survivors (m, p) with 2 <= m <= m_max, p_min <= p <= p_max."""
    return [
        (m, p)
        for m in range(2, m_max + 1)
        for p in range(p_min, p_max + 1)
        if isinstance(screen_free(m, p), Survivor)
    ]
