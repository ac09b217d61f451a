"""Finite mixture model over link patterns, fit by EM with a fixed group count.

Each node belongs to one of K groups; a group k carries a distribution
``target_probs[k]`` over link targets, and the graph likelihood is the product
over nodes of (group weight) * (product of target probabilities over the
node's out-links). EM alternates soft assignments (responsibilities) with
closed-form weight updates. Unlike the nonparametric fit, K is an input, and
responsibilities can underflow to exactly zero for every group on some node;
that condition is detected and raised rather than silently mis-assigning.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DegenerateNodeError
from .graph import Graph, Partition, compact_labels

logger = logging.getLogger("netmix")


@dataclass
class NmmState:
    """EM state; rows of responsibilities and target_probs are stochastic."""

    n_groups: int
    mixing_weights: np.ndarray  # (K,)
    target_probs: np.ndarray  # (K, n_nodes)
    responsibilities: np.ndarray  # (n_nodes, K)
    expected_ll: float

    def validate(self, atol: float = 1e-9) -> None:
        if abs(self.mixing_weights.sum() - 1.0) > atol or (self.mixing_weights < 0).any():
            raise ValueError("mixing weights are not a distribution")
        if np.abs(self.target_probs.sum(axis=1) - 1.0).max() > atol or (
            self.target_probs < 0
        ).any():
            raise ValueError("a target-probability row is not a distribution")
        if np.abs(self.responsibilities.sum(axis=1) - 1.0).max() > atol:
            raise ValueError("a responsibility row does not sum to 1")


def link_matrix(graph: Graph) -> sp.csr_matrix:
    """Sparse 0/1 matrix of the directed-link view (row = source node)."""
    n = graph.n_nodes
    return sp.csr_matrix(
        (np.ones(graph.targets.size), graph.targets, graph.indptr), shape=(n, n)
    )


def init_responsibilities(n_nodes: int, n_groups: int, rng) -> np.ndarray:
    """Independent uniform-Dirichlet row per node (rows sum to 1)."""
    if n_groups < 1:
        raise ValueError("n_groups must be >= 1")
    return rng.dirichlet(np.ones(n_groups), size=n_nodes)


def _log_scores(adj: sp.csr_matrix, mixing_weights, target_probs) -> np.ndarray:
    """(n_nodes, K) matrix of log pi_k + sum over out-links of log theta_kj."""
    with np.errstate(divide="ignore"):
        log_theta = np.log(target_probs)
        log_pi = np.log(mixing_weights)
    return adj.dot(log_theta.T) + log_pi[None, :]


def e_step(graph: Graph, state: NmmState) -> np.ndarray:
    """Posterior group responsibilities, computed in log space per row.

    Raises DegenerateNodeError when some node's weight is zero for every
    group (the group-bias failure of the finite mixture).
    """
    scores = _log_scores(link_matrix(graph), state.mixing_weights, state.target_probs)
    return _normalize_scores(scores)


def _normalize_scores(scores: np.ndarray) -> np.ndarray:
    mx = scores.max(axis=1)
    dead = ~np.isfinite(mx)
    if dead.any():
        raise DegenerateNodeError(np.flatnonzero(dead).tolist())
    q = np.exp(scores - mx[:, None])
    # a subnormal responsibility is an underflow artifact; flush it to the
    # exact zero it stands for so downstream products stay well defined
    q[q < np.finfo(float).tiny] = 0.0
    q /= q.sum(axis=1, keepdims=True)
    return q


def m_step(graph: Graph, responsibilities: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form update of (mixing_weights, target_probs) from soft counts.

    A group attracting zero link mass gets a uniform target row, the limit of
    an infinitesimal symmetric prior; this keeps the state feasible.
    """
    q = responsibilities
    n = q.shape[0]
    mixing = q.sum(axis=0) / n
    mass = link_matrix(graph).T.dot(q)  # (n_nodes, K): soft link counts per target
    theta = mass.T.copy()
    totals = theta.sum(axis=1)
    zero = totals <= 0.0
    theta[zero] = 1.0 / n
    theta[~zero] /= totals[~zero, None]
    return mixing, theta


def expected_log_likelihood(graph: Graph, state: NmmState) -> float:
    """Responsibility-weighted complete-data log likelihood.

    0 * log 0 counts as 0; a positive responsibility against a zero
    probability makes the value -inf, which is reported with a warning.
    """
    scores = _log_scores(link_matrix(graph), state.mixing_weights, state.target_probs)
    q = state.responsibilities
    with np.errstate(invalid="ignore"):
        terms = np.where(q > 0.0, q * scores, 0.0)
    value = float(terms.sum())
    if not np.isfinite(value):
        logger.warning("expected log likelihood is -inf (zero-probability link)")
        return -np.inf
    return value


def hard_partition(responsibilities: np.ndarray) -> Partition:
    """Row-wise argmax (ties to the lowest group index), labels compacted."""
    z, k = compact_labels(np.argmax(responsibilities, axis=1).tolist())
    return Partition(assignments=z, n_groups=k)


@dataclass
class NmmDiagnostics:
    best_restart: int
    iterations: list = field(default_factory=list)  # per restart
    converged: list = field(default_factory=list)
    final_ll: list = field(default_factory=list)
    loglik_trace: np.ndarray = field(default_factory=lambda: np.empty(0))  # best restart
    degenerate_events: list = field(default_factory=list)  # (restart, nodes)


def incomplete_log_likelihood(graph: Graph, state: NmmState) -> float:
    """log p(links | mixing_weights, target_probs) with groups summed out.

    This is the quantity EM provably never decreases; the fit tracks it for
    convergence and restart comparison.
    """
    scores = _log_scores(link_matrix(graph), state.mixing_weights, state.target_probs)
    return _logsumexp_rows(scores)


def _logsumexp_rows(scores: np.ndarray) -> float:
    mx = scores.max(axis=1)
    if not np.isfinite(mx).all():
        return -np.inf
    return float((mx + np.log(np.exp(scores - mx[:, None]).sum(axis=1))).sum())


def _em_single(graph, adj, n_groups, rng, max_iters, tol):
    q = init_responsibilities(graph.n_nodes, n_groups, rng)
    mixing, theta = m_step(graph, q)
    trace = []
    converged = False
    while True:
        scores = _log_scores(adj, mixing, theta)
        q = _normalize_scores(scores)
        trace.append(_logsumexp_rows(scores))
        converged = len(trace) > 1 and abs(trace[-1] - trace[-2]) < tol
        if converged or len(trace) > max_iters:
            break
        mixing, theta = m_step(graph, q)
    state = NmmState(n_groups, mixing, theta, q, -np.inf)
    state.expected_ll = expected_log_likelihood(graph, state)
    return state, np.array(trace), converged


def fit_nmm(
    graph: Graph,
    n_groups: int,
    max_iters: int = 500,
    tol: float = 1e-8,
    n_restarts: int = 10,
    seed: int = 0,
) -> tuple[NmmState, Partition, NmmDiagnostics]:
    """Best-of-restarts EM fit with K = n_groups.

    Each restart draws its own responsibilities from an RNG derived from
    (seed, restart index) and runs EM until the incomplete-data log
    likelihood moves less than tol or max_iters is hit; the restart with the
    highest final value wins. The partition is the argmax of the winner's
    responsibilities, ties to the lowest group index. Raises
    DegenerateNodeError only if every restart hits the zero-weight
    condition.

    The returned trace holds the incomplete-data log likelihood per
    iteration (guaranteed non-decreasing); the state's expected_ll field is
    the responsibility-weighted form at the final iterate.
    """
    if n_groups < 1:
        raise ValueError("n_groups must be >= 1")
    adj = link_matrix(graph)
    diag = NmmDiagnostics(best_restart=-1)
    best = None
    best_trace = None
    for r in range(n_restarts):
        rng = np.random.default_rng([seed, r])
        try:
            state, trace, converged = _em_single(graph, adj, n_groups, rng, max_iters, tol)
        except DegenerateNodeError as err:
            diag.degenerate_events.append((r, err.nodes))
            diag.iterations.append(0)
            diag.converged.append(False)
            diag.final_ll.append(-np.inf)
            continue
        diag.iterations.append(trace.size - 1)
        diag.converged.append(converged)
        diag.final_ll.append(float(trace[-1]))
        if best is None or trace[-1] > best_trace[-1]:
            best = state
            best_trace = trace
            diag.best_restart = r
    if best is None:
        nodes = sorted({n for _, ns in diag.degenerate_events for n in ns})
        raise DegenerateNodeError(nodes)
    diag.loglik_trace = best_trace
    return best, hard_partition(best.responsibilities), diag
