"""Floating-point residual flow over the admissible metric family.

Minimizes ||L^-1 Ric L^-T - C diag(k Tr Phi - Tr Phi^2)||_F with G = L L^T, over log-parameters
(log-Cholesky for the V and W blocks) and log C, by Gauss-Newton with an Armijo line search.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy.polys.domains import QQ

from config import FLOW_FLOOR, FLOW_MAX_ITER, FLOW_RESTARTS, FLOW_SEED, FLOW_TOL, WORKERS
from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import to_float
from nilsolv.freelie import FreeLieAlgebra, build_algebra
from nilsolv.metric import (
    BLOCK_SLOTS,
    BLOCKS,
    admissible_components,
    eigen_constants,
    required_slots,
    ricci_coefficient,
)

logger = logging.getLogger(__name__)

_FAILED = 1e6


@dataclass(frozen=True)
class FlowConfig:
    restarts: int = FLOW_RESTARTS
    max_iter: int = FLOW_MAX_ITER
    tol: float = FLOW_TOL
    seed: int = FLOW_SEED
    floor: float = FLOW_FLOOR
    workers: int = WORKERS
    armijo: float = 1e-4
    shrink: float = 0.5
    min_step: float = 1e-12

    def __post_init__(self):
        if self.tol <= 0:
            raise DomainError("flow tolerance must be positive")
        if self.restarts < 1:
            raise DomainError("at least one restart is required")
        if self.max_iter < 1:
            raise DomainError("at least one iteration is required")
        if self.floor <= 0:
            raise DomainError("positivity floor must be positive")


@dataclass
class FlowResult:
    m: int
    p: int
    params: Dict[str, float]
    C: float
    residual: float
    iterations: int
    converged: bool
    restart: int = 0
    trace_gap: float = 0.0
    history: List[float] = field(default_factory=list, repr=False)


class FlowModel:
    """Dense float structure tensor and Gram components of f(m, p)."""

    def __init__(self, alg: FreeLieAlgebra):
        self.alg = alg
        n = alg.dim
        self.structure = np.zeros((n, n, n))
        for a, b in alg.nonzero_pairs():
            for c, v in alg.bracket_basis(a, b).items():
                x = to_float(v, QQ)
                self.structure[a, b, c] = x
                self.structure[b, a, c] = -x

        slots = required_slots(alg.m, alg.p)
        components = admissible_components(alg)
        self.base = np.zeros((n, n))
        for i in alg.degree_ranges[1]:
            self.base[i, i] = 1.0
        if "lambda2" in components:
            self.base += self._dense(components["lambda2"])
        self.scalars = [s for s in slots if s != "lambda2" and s not in BLOCK_SLOTS]
        self.blocks = [name for name, entries in BLOCKS.items() if entries[0] in slots]
        self.components = {s: self._dense(components[s]) for s in slots if s != "lambda2"}
        self.degrees = np.array([alg.degree(i) for i in range(n)], dtype=float)
        self.weights = np.array([ricci_coefficient(alg, alg.degree(i)) for i in range(n)], dtype=float)

    def _dense(self, sparse) -> np.ndarray:
        out = np.zeros((self.alg.dim, self.alg.dim))
        for a, row in sparse.items():
            for b, v in row.items():
                out[a, b] = to_float(v, QQ)
        return out

    @property
    def size(self) -> int:
        return len(self.scalars) + 3 * len(self.blocks) + 1

    def unpack(self, theta: np.ndarray, floor: float) -> Tuple[Dict[str, float], float]:
        low = np.log(floor)
        values: Dict[str, float] = {"lambda2": 1.0} if self.alg.p >= 2 else {}
        i = 0
        for slot in self.scalars:
            values[slot] = float(np.exp(max(theta[i], low)))
            i += 1
        for name in self.blocks:
            a, b, c = theta[i:i + 3]
            d1, d2 = np.exp(max(a, low)), np.exp(max(c, low))
            s11, s12, s22 = BLOCKS[name]
            values[s11], values[s12], values[s22] = d1 * d1, b * d1, b * b + d2 * d2
            i += 3
        return values, float(np.exp(max(theta[i], low)))

    def gram(self, values: Dict[str, float]) -> np.ndarray:
        G = self.base.copy()
        for slot, N in self.components.items():
            G += values[slot] * N
        return G

    def ricci(self, G: np.ndarray) -> np.ndarray:
        """1/4 G Lambda G - 1/2 Y, with sums over an orthonormal basis expressed through G^-1."""
        c = self.structure
        H = np.linalg.inv(G)
        M = np.tensordot(H, c, axes=([1], [0]))
        P = np.tensordot(H, M, axes=([1], [1]))
        lam = np.tensordot(P, c, axes=([1, 0], [0, 1]))
        A = np.tensordot(c, G, axes=([2], [0]))
        B = np.tensordot(c, H, axes=([1], [1]))
        Y = np.tensordot(A, B, axes=([1, 2], [2, 1]))
        return 0.25 * G @ lam @ G - 0.5 * Y

    def normalized_ricci(self, theta: np.ndarray, floor: float) -> Optional[Tuple[np.ndarray, float]]:
        values, C = self.unpack(theta, floor)
        G = self.gram(values)
        try:
            L = np.linalg.cholesky(G)
        except np.linalg.LinAlgError:
            return None
        R = self.ricci(G)
        S = np.linalg.solve(L, np.linalg.solve(L, R).T).T
        return S, C

    def residual_vector(self, theta: np.ndarray, floor: float) -> np.ndarray:
        out = self.normalized_ricci(theta, floor)
        n = self.alg.dim
        if out is None:
            return np.full(n * n, _FAILED)
        S, C = out
        return (S - C * np.diag(self.weights)).ravel()

    def trace_constant(self, theta: np.ndarray, floor: float) -> Optional[float]:
        """C with tr(ric) = C sum_i (k_i Tr Phi - Tr Phi^2); None when G is not positive definite or the sum vanishes."""
        total = float(np.sum(self.weights))
        out = self.normalized_ricci(theta, floor)
        if out is None or not total:
            return None
        return float(np.trace(out[0])) / total

    def trace_gap(self, theta: np.ndarray, floor: float) -> float:
        """|Tr(ric Phi)|; zero for every metric since Phi is a derivation."""
        out = self.normalized_ricci(theta, floor)
        if out is None:
            return float("inf")
        S, _ = out
        return float(abs(np.sum(np.diag(S) * self.degrees)))


def _jacobian(model: FlowModel, theta: np.ndarray, floor: float) -> np.ndarray:
    columns = []
    for j in range(theta.size):
        h = 1e-6 * max(1.0, abs(theta[j]))
        up, down = theta.copy(), theta.copy()
        up[j] += h
        down[j] -= h
        columns.append((model.residual_vector(up, floor) - model.residual_vector(down, floor)) / (2 * h))
    return np.column_stack(columns)


def _descend(model: FlowModel, theta: np.ndarray, cfg: FlowConfig) -> Tuple[np.ndarray, float, int, List[float]]:
    r = model.residual_vector(theta, cfg.floor)
    f = float(r @ r)
    history = [f]
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        if np.sqrt(f) < cfg.tol:
            return theta, f, iterations - 1, history
        J = _jacobian(model, theta, cfg.floor)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        slope = 2.0 * float((J.T @ r) @ step)
        alpha = 1.0
        while True:
            candidate = theta + alpha * step
            rc = model.residual_vector(candidate, cfg.floor)
            fc = float(rc @ rc)
            if fc <= f + cfg.armijo * alpha * slope and fc <= f:
                break
            alpha *= cfg.shrink
            if alpha < cfg.min_step:
                return theta, f, iterations, history
        assert fc <= f
        theta, r, f = candidate, rc, fc
        history.append(f)
    return theta, f, iterations, history


def _initial(model: FlowModel, rng: np.random.Generator, floor: float) -> np.ndarray:
    """Log-uniform parameters, then C from the traces of both sides at those parameters."""
    theta = rng.uniform(np.log(1e-2), np.log(1e2), size=model.size)
    for k in range(len(model.blocks)):
        # off-diagonal Cholesky entry starts at zero
        theta[len(model.scalars) + 3 * k + 1] = 0.0
    C = model.trace_constant(theta, floor)
    if C is not None and C > floor:
        theta[-1] = np.log(C)
        return theta
    tr, tr2 = eigen_constants(model.alg)
    top = model.alg.p * tr - tr2
    theta[-1] = np.log(0.5 / top) if top > 0 else 0.0
    return theta


def _run(model: FlowModel, cfg: FlowConfig, index: int, seed: np.random.SeedSequence) -> FlowResult:
    rng = np.random.default_rng(seed)
    theta, f, iterations, history = _descend(model, _initial(model, rng, cfg.floor), cfg)
    values, C = model.unpack(theta, cfg.floor)
    residual = float(np.sqrt(f))
    result = FlowResult(
        m=model.alg.m,
        p=model.alg.p,
        params=values,
        C=C,
        residual=residual,
        iterations=iterations,
        converged=residual < cfg.tol,
        restart=index,
        trace_gap=model.trace_gap(theta, cfg.floor),
        history=history,
    )
    logger.debug("flow restart %d on f(%d,%d): residual %.3e after %d iterations",
                 index, result.m, result.p, residual, iterations)
    return result


def residual_minimize(m: int, p: int, cfg: Optional[FlowConfig] = None, max_dim: Optional[int] = None) -> FlowResult:
    """Best local minimum of the nilsoliton residual over cfg.restarts seeded starts."""
    cfg = cfg or FlowConfig()
    required_slots(m, p)
    model = FlowModel(build_algebra(m, p, max_dim))
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        results = list(pool.map(lambda item: _run(model, cfg, *item), enumerate(seeds)))
    best = min(results, key=lambda r: (r.residual, r.restart))
    logger.info("flow on f(%d,%d): best residual %.3e (restart %d, converged=%s)",
                m, p, best.residual, best.restart, best.converged)
    return best
