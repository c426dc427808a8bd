"""Personalized PageRank by power iteration, plus a small linear-solve oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import TransitionMatrix

LEAK_TO_TELEPORT = "teleport"
LEAK_TO_UNIFORM = "uniform"

# Upper bound on graph size for the dense linear-solve oracle (test use only).
ORACLE_MAX_NODES = 64


@dataclass(frozen=True)
class PprConfig:
    """Power-iteration settings.

    ``damping`` is the walk-continuation probability (teleport weight is
    1 - damping).  ``leak_to`` picks where mass lost at dead-end columns is
    re-injected: "teleport" sends it to the source node, keeping the vector
    a proper personalized walk; "uniform" spreads it over all nodes.
    """

    damping: float = 0.85
    tol: float = 1e-8
    max_iter: int = 200
    leak_to: str = LEAK_TO_TELEPORT

    def __post_init__(self) -> None:
        if not 0.0 <= self.damping < 1.0:
            raise ValueError(f"damping must be in [0, 1), got {self.damping}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.leak_to not in (LEAK_TO_TELEPORT, LEAK_TO_UNIFORM):
            raise ValueError(f"leak_to must be 'teleport' or 'uniform', got {self.leak_to!r}")


@dataclass(frozen=True)
class PprResult:
    """A single personalized-PageRank vector with convergence diagnostics."""

    vector: np.ndarray
    iterations: int
    converged: bool
    residual: float


@dataclass(frozen=True)
class PprFeatureMatrix:
    """Row i = PageRank vector with teleport concentrated at user i."""

    matrix: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray

    @property
    def n_users(self) -> int:
        return self.matrix.shape[0]


def personalized_pagerank(M: TransitionMatrix, source: int, cfg: PprConfig) -> PprResult:
    """Iterate r <- damping*M*r + leak + (1-damping)*e_source to a fixed point.

    Non-convergence within ``cfg.max_iter`` is reported via the result flag,
    not raised; the returned vector is always L1-normalized.
    """
    m = M.n
    if not 0 <= source < m:
        raise ValueError(f"source index {source} out of range for {m} users")
    beta = cfg.damping
    r = np.zeros(m)
    r[source] = 1.0
    converged = False
    residual = np.inf
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        nxt = beta * (M.matrix @ r)
        leak = beta * r[M.dead_ends].sum()
        if leak:
            if cfg.leak_to == LEAK_TO_TELEPORT:
                nxt[source] += leak
            else:
                nxt += leak / m
        nxt[source] += 1.0 - beta
        residual = float(np.abs(nxt - r).sum())
        r = nxt
        if residual < cfg.tol:
            converged = True
            break
    r /= r.sum()
    return PprResult(r, iterations, converged, residual)


def ppr_feature_matrix(M: TransitionMatrix, cfg: PprConfig) -> PprFeatureMatrix:
    """Personalized PageRank for every source at once.

    All sources iterate in lockstep on one dense block; a source's column is
    frozen as soon as its own L1 change drops below tolerance, so each row
    equals an independent single-source run.
    """
    m = M.n
    beta = cfg.damping
    # Columns are sources here; transposed to rows on return.
    R = np.eye(m)
    active = np.arange(m)
    iterations = np.zeros(m, dtype=np.int64)
    converged = np.zeros(m, dtype=bool)
    for it in range(1, cfg.max_iter + 1):
        sub = R[:, active]
        nxt = beta * (M.matrix @ sub)
        if M.dead_ends.size:
            leak = beta * sub[M.dead_ends].sum(axis=0)
            if cfg.leak_to == LEAK_TO_TELEPORT:
                nxt[active, np.arange(active.size)] += leak
            else:
                nxt += leak / m
        nxt[active, np.arange(active.size)] += 1.0 - beta
        residual = np.abs(nxt - sub).sum(axis=0)
        R[:, active] = nxt
        iterations[active] = it
        done = residual < cfg.tol
        converged[active[done]] = True
        active = active[~done]
        if active.size == 0:
            break
    R /= R.sum(axis=0)
    return PprFeatureMatrix(R.T.copy(), iterations, converged)


def ppr_linear_solve_oracle(
    M: TransitionMatrix,
    source: int,
    damping: float,
    leak_to: str = LEAK_TO_UNIFORM,
) -> np.ndarray:
    """Exact fixed point of (I - damping*M') r = (1-damping)*e_source.

    Dead-end columns of M are replaced before solving: by uniform columns
    (default) or by e_source columns, matching the two leak modes of the
    power iteration.  Dense solve, so only small graphs are accepted.
    """
    m = M.n
    if m > ORACLE_MAX_NODES:
        raise ValueError(f"oracle limited to {ORACLE_MAX_NODES} nodes, got {m}")
    if not 0 <= source < m:
        raise ValueError(f"source index {source} out of range for {m} users")
    if not 0.0 <= damping < 1.0:
        raise ValueError(f"damping must be in [0, 1), got {damping}")
    dense = M.matrix.toarray()
    if M.dead_ends.size:
        if leak_to == LEAK_TO_UNIFORM:
            dense[:, M.dead_ends] = 1.0 / m
        elif leak_to == LEAK_TO_TELEPORT:
            dense[:, M.dead_ends] = 0.0
            dense[source, M.dead_ends] = 1.0
        else:
            raise ValueError(f"leak_to must be 'teleport' or 'uniform', got {leak_to!r}")
    rhs = np.zeros(m)
    rhs[source] = 1.0 - damping
    r = np.linalg.solve(np.eye(m) - damping * dense, rhs)
    return r / r.sum()
