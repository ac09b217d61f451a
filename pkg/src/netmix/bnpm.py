"""Nonparametric mixture fit by collapsed Gibbs sampling.

The model puts a Chinese Restaurant Process prior (concentration ``alpha``)
over partitions of the nodes and a symmetric Dirichlet prior (``beta``) over
each group's link-target distribution. Targets integrate out, leaving a
collapsed sampler whose per-node conditional depends only on three sufficient
statistics: group sizes, group out-link totals, and group-to-target link
counts. Both hyperparameters carry Gamma(1,1) priors truncated to (0,1) and
are resampled by slice sampling once per sweep.

The number of groups is not an input; it rises and falls as nodes open and
empty groups during sampling.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from ._backend import backend_name, sweep_kernel
from .graph import Graph, Partition

logger = logging.getLogger("netmix")

NEW_GROUP = -1  # sentinel accepted by assign_node

INIT_ALPHA = 0.5  # midpoint of the (0,1) hyperparameter range
INIT_BETA = 0.5


# ---------------------------------------------------------------------------
# state


@dataclass
class GibbsState:
    """Sampler state: assignments plus incrementally maintained statistics.

    ``sizes``, ``out_links`` and ``target_counts`` are capacity-padded; only
    the first ``n_groups`` columns are live. ``target_counts[j, k]`` is the
    number of links from nodes of group k into node j (target-major layout,
    shared with the sweep kernels).
    """

    assignments: np.ndarray  # int32 (n_nodes,)
    n_groups: int
    sizes: np.ndarray  # int64 (capacity,)
    out_links: np.ndarray  # int64 (capacity,)
    target_counts: np.ndarray  # int32 (n_nodes, capacity)
    alpha: float
    beta: float

    @property
    def capacity(self) -> int:
        return self.sizes.shape[0]

    @property
    def group_sizes(self) -> np.ndarray:
        return self.sizes[: self.n_groups]

    @property
    def group_out_links(self) -> np.ndarray:
        return self.out_links[: self.n_groups]

    @property
    def group_target_counts(self) -> np.ndarray:
        return self.target_counts[:, : self.n_groups]

    @classmethod
    def from_partition(
        cls,
        graph: Graph,
        assignments,
        alpha: float = INIT_ALPHA,
        beta: float = INIT_BETA,
        capacity: int | None = None,
    ) -> "GibbsState":
        """Build a state with statistics recomputed from scratch."""
        if not (alpha > 0 and beta > 0):
            raise ValueError("alpha and beta must be positive")
        z = np.asarray(assignments, dtype=np.int32).copy()
        n = graph.n_nodes
        if z.shape != (n,):
            raise ValueError("assignments must have one entry per node")
        k_num = int(z.max()) + 1 if n else 0
        if k_num and np.unique(z).size != k_num:
            raise ValueError("assignments must use compact labels")
        cap = max(capacity or 0, k_num + 8)
        sizes = np.zeros(cap, dtype=np.int64)
        sizes[:k_num] = np.bincount(z, minlength=k_num)
        degrees = graph.out_degrees()
        out_links = np.zeros(cap, dtype=np.int64)
        np.add.at(out_links, z, degrees)
        tgc = np.zeros((n, cap), dtype=np.int32)
        src = np.repeat(np.arange(n), degrees)
        np.add.at(tgc, (graph.targets, z[src]), 1)
        return cls(
            assignments=z,
            n_groups=k_num,
            sizes=sizes,
            out_links=out_links,
            target_counts=tgc,
            alpha=float(alpha),
            beta=float(beta),
        )

    def grow(self, new_capacity: int) -> None:
        cap = self.capacity
        if new_capacity <= cap:
            return
        self.sizes = np.concatenate(
            [self.sizes, np.zeros(new_capacity - cap, dtype=np.int64)]
        )
        self.out_links = np.concatenate(
            [self.out_links, np.zeros(new_capacity - cap, dtype=np.int64)]
        )
        tgc = np.zeros((self.target_counts.shape[0], new_capacity), dtype=np.int32)
        tgc[:, :cap] = self.target_counts
        self.target_counts = tgc

    def copy(self) -> "GibbsState":
        return GibbsState(
            assignments=self.assignments.copy(),
            n_groups=self.n_groups,
            sizes=self.sizes.copy(),
            out_links=self.out_links.copy(),
            target_counts=self.target_counts.copy(),
            alpha=self.alpha,
            beta=self.beta,
        )

    def partition(self) -> Partition:
        return Partition(
            assignments=self.assignments.astype(np.int64), n_groups=self.n_groups
        )


# ---------------------------------------------------------------------------
# CRP prior


def crp_log_prob(partition, alpha: float) -> float:
    """Log probability of a partition under the CRP with concentration alpha.

    Closed form of the sequential product: alpha^K * prod_k (n_k - 1)! over
    prod_{i=1..N} (i - 1 + alpha). Exchangeable, so independent of node order.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    z = partition.assignments if isinstance(partition, Partition) else np.asarray(partition)
    n = z.size
    if n == 0:
        return 0.0
    counts = np.bincount(z)
    counts = counts[counts > 0]
    k_num = counts.size
    return float(
        k_num * math.log(alpha)
        + gammaln(counts).sum()
        + math.lgamma(alpha)
        - math.lgamma(n + alpha)
    )


# ---------------------------------------------------------------------------
# single-node bookkeeping (python mirror of the kernels; used by tests and
# as the reference semantics)


def remove_node(state: GibbsState, graph: Graph, i: int) -> GibbsState:
    """Detach node i's assignment and out-links from the statistics.

    If the group empties it is deleted: the last live group is swapped into
    the freed slot so labels stay compact. Mutates and returns the state.
    """
    k_old = int(state.assignments[i])
    tg = graph.out_neighbors(i)
    state.sizes[k_old] -= 1
    state.out_links[k_old] -= tg.size
    state.target_counts[tg, k_old] -= 1
    if state.sizes[k_old] == 0:
        last = state.n_groups - 1
        if k_old != last:
            state.sizes[k_old] = state.sizes[last]
            state.out_links[k_old] = state.out_links[last]
            state.target_counts[:, k_old] = state.target_counts[:, last]
            state.assignments[state.assignments == last] = k_old
        state.sizes[last] = 0
        state.out_links[last] = 0
        state.target_counts[:, last] = 0
        state.n_groups = last
    state.assignments[i] = -1
    return state


def assign_node(state: GibbsState, graph: Graph, i: int, k: int) -> GibbsState:
    """Attach node i to group k (or a fresh group when k is NEW_GROUP).

    Inverse of remove_node. Mutates and returns the state.
    """
    if k == NEW_GROUP or k == state.n_groups:
        k = state.n_groups
        if k + 1 > state.capacity:
            state.grow(max(2 * state.capacity, k + 1))
        state.n_groups += 1
    elif not 0 <= k < state.n_groups:
        raise ValueError("group %d out of range" % k)
    tg = graph.out_neighbors(i)
    state.assignments[i] = k
    state.sizes[k] += 1
    state.out_links[k] += tg.size
    state.target_counts[tg, k] += 1
    return state


def gibbs_conditional(state: GibbsState, graph: Graph, i: int) -> np.ndarray:
    """Unnormalized log weights for node i's group, given everyone else.

    Node i must currently be removed from the statistics. Entry k < n_groups
    is the weight for joining existing group k; the last entry opens a new
    group. For each out-link the weight multiplies the collapsed predictive
    (count_to_target + beta) / (group_out_links + N*beta + links_so_far),
    then the prior factor: group size for existing groups, alpha for a new
    one. The constant prior denominator is dropped (it cancels when the
    weights are normalized).
    """
    if state.assignments[i] != -1:
        raise ValueError("node %d must be removed before computing weights" % i)
    n = graph.n_nodes
    k_num = state.n_groups
    tg = graph.out_neighbors(i)
    d = tg.size
    n_beta = n * state.beta
    logw = np.empty(k_num + 1)
    for k in range(k_num):
        logw[k] = math.log(state.sizes[k])
    logw[k_num] = math.log(state.alpha) + d * math.log(state.beta)
    for t in tg:
        for k in range(k_num):
            logw[k] += math.log(state.target_counts[t, k] + state.beta)
    for k in range(k_num):
        mnb = state.out_links[k] + n_beta
        logw[k] -= math.lgamma(mnb + d) - math.lgamma(mnb)
    logw[k_num] -= math.lgamma(n_beta + d) - math.lgamma(n_beta)
    return logw


def pick_from_log_weights(logw: np.ndarray, u: float) -> int:
    """Draw an index from unnormalized log weights using one uniform."""
    p = np.exp(logw - logw.max())
    cdf = np.cumsum(p)
    k = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    return min(k, logw.size - 1)


# ---------------------------------------------------------------------------
# sweeps


def _log_tables(graph: Graph, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """log(n) for n in [0, N] and log(m + beta) for m up to max in-degree."""
    n = graph.n_nodes
    log_int = np.empty(n + 1)
    log_int[0] = -np.inf
    for v in range(1, n + 1):
        log_int[v] = math.log(v)
    max_count = int(graph.in_degrees().max(initial=0))
    logb = np.array([math.log(m + beta) for m in range(max_count + 1)])
    return log_int, logb


def _run_sweep_arrays(state, graph, order, uniforms, log_int, logb, kernel) -> None:
    """Drive one kernel sweep, growing capacity on demand."""
    pos = 0
    n = graph.n_nodes
    logw = np.empty(state.capacity + 1)
    while True:
        k_num, pos = kernel(
            order,
            pos,
            graph.indptr,
            graph.targets,
            state.assignments,
            state.sizes,
            state.out_links,
            state.target_counts,
            state.n_groups,
            math.log(state.alpha),
            n * state.beta,
            log_int,
            logb,
            uniforms,
            logw,
        )
        state.n_groups = int(k_num)
        if pos >= n:
            return
        state.grow(2 * state.capacity)
        logw = np.empty(state.capacity + 1)


def gibbs_sweep(state: GibbsState, graph: Graph, rng, order=None) -> GibbsState:
    """Resample every node's group once, in the given order (default 0..N-1).

    Dispatches to the backend kernel selected by NETMIX_BACKEND. Mutates and
    returns the state.
    """
    if order is None:
        order = np.arange(graph.n_nodes, dtype=np.int64)
    uniforms = rng.random(graph.n_nodes)
    log_int, logb = _log_tables(graph, state.beta)
    _run_sweep_arrays(state, graph, order, uniforms, log_int, logb, sweep_kernel())
    return state


def _sweep_reference(state, graph, uniforms, order=None) -> GibbsState:
    """Sweep via the public single-node operations; oracle for the kernels."""
    if order is None:
        order = np.arange(graph.n_nodes, dtype=np.int64)
    for pos, i in enumerate(order):
        i = int(i)
        remove_node(state, graph, i)
        logw = gibbs_conditional(state, graph, i)
        assign_node(state, graph, i, pick_from_log_weights(logw, uniforms[pos]))
    return state


# ---------------------------------------------------------------------------
# joint score


def _likelihood_from_stats(m_k: np.ndarray, count_hist: np.ndarray, n: int, beta: float) -> float:
    """Collapsed log p(links | z, beta) from group out-totals and the
    histogram of nonzero target-count cells."""
    n_beta = n * beta
    score = m_k.size * math.lgamma(n_beta) - gammaln(m_k + n_beta).sum()
    values = np.nonzero(count_hist)[0]
    values = values[values > 0]
    if values.size:
        score += float(
            (count_hist[values] * (gammaln(values + beta) - math.lgamma(beta))).sum()
        )
    return float(score)


def joint_log_score(state: GibbsState, graph: Graph) -> float:
    """log p(links, partition | alpha, beta): collapsed likelihood + CRP prior."""
    k_num = state.n_groups
    hist = np.bincount(state.target_counts[:, :k_num].ravel())
    like = _likelihood_from_stats(
        state.out_links[:k_num], hist, graph.n_nodes, state.beta
    )
    return like + crp_log_prob(state.assignments, state.alpha)


# ---------------------------------------------------------------------------
# hyperparameters


def _slice_sample_unit(logf, x0: float, rng, width: float = 0.1, max_shrink: int = 50):
    """One slice-sampling update on (0,1): step-out then shrink.

    Returns (new_x, capped). When the shrink cap is exhausted the current
    value is kept and capped is True.
    """
    f0 = logf(x0)
    u = rng.random()
    log_y = f0 + (math.log(u) if u > 0.0 else -math.inf)
    lo = x0 - width * rng.random()
    hi = lo + width
    while lo > 0.0 and logf(lo) > log_y:
        lo -= width
    while hi < 1.0 and logf(hi) > log_y:
        hi += width
    lo = max(lo, 0.0)
    hi = min(hi, 1.0)
    for _ in range(max_shrink):
        x1 = lo + rng.random() * (hi - lo)
        if logf(x1) > log_y:
            return x1, False
        if x1 < x0:
            lo = x1
        else:
            hi = x1
    return x0, True


def _alpha_log_post(a: float, n: int, k_num: int) -> float:
    """Gamma(1,1) prior truncated to (0,1) times the CRP partition term."""
    if not 0.0 < a < 1.0:
        return -math.inf
    return -a + k_num * math.log(a) + math.lgamma(a) - math.lgamma(n + a)


def _beta_log_post(b: float, n: int, m_k: np.ndarray, count_hist: np.ndarray) -> float:
    if not 0.0 < b < 1.0:
        return -math.inf
    return -b + _likelihood_from_stats(m_k, count_hist, n, b)


def sample_hyperparameters(
    state: GibbsState,
    graph: Graph,
    rng,
    fixed: tuple[float, float] | None = None,
    width: float = 0.1,
    max_shrink: int = 50,
) -> tuple[float, float]:
    """Resample (alpha, beta) by slice sampling their posteriors on (0,1).

    With ``fixed`` set, returns it unchanged. Does not write back to the
    state; callers decide when to adopt the new values.
    """
    if fixed is not None:
        return fixed
    n = graph.n_nodes
    k_num = state.n_groups
    alpha, a_capped = _slice_sample_unit(
        lambda a: _alpha_log_post(a, n, k_num), state.alpha, rng, width, max_shrink
    )
    m_k = state.out_links[:k_num]
    hist = np.bincount(state.target_counts[:, :k_num].ravel())
    beta, b_capped = _slice_sample_unit(
        lambda b: _beta_log_post(b, n, m_k, hist), state.beta, rng, width, max_shrink
    )
    if a_capped or b_capped:
        logger.warning(
            "slice sampler hit the shrink cap (alpha=%s beta=%s); keeping value",
            a_capped,
            b_capped,
        )
    return float(alpha), float(beta)


# ---------------------------------------------------------------------------
# full fit


@dataclass
class SamplerConfig:
    """Chain-length and hyperparameter settings for fit_bnpm.

    init_mode picks the starting assignment: "crp" runs one sequential CRP
    pass with the initial alpha; "dispersed" starts from min(N, 512) small
    interleaved groups. Consolidating surplus groups is easy for the sampler
    while nucleating missing ones is slow, so the dispersed start mixes far
    better on strongly structured networks; the reproduction presets use it.
    """

    burn_in: int = 2000
    n_samples: int = 200
    thinning: int = 10
    seed: int = 0
    fixed_hypers: tuple[float, float] | None = None
    max_groups_warn: int | None = None
    sweep_order: str = "sequential"  # or "random"
    init_mode: str = "crp"  # or "dispersed"

    def __post_init__(self):
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.thinning < 1:
            raise ValueError("thinning must be >= 1")
        if self.sweep_order not in ("sequential", "random"):
            raise ValueError("sweep_order must be 'sequential' or 'random'")
        if self.init_mode not in ("crp", "dispersed"):
            raise ValueError("init_mode must be 'crp' or 'dispersed'")
        if self.fixed_hypers is not None:
            a, b = self.fixed_hypers
            if not (a > 0 and b > 0):
                raise ValueError("fixed hyperparameters must be positive")


@dataclass(frozen=True)
class GibbsSample:
    partition: Partition
    alpha: float
    beta: float
    score: float


@dataclass
class PosteriorTrace:
    """Recorded post-burn-in samples and the index of the best-scoring one."""

    samples: list[GibbsSample]
    map_index: int

    def __post_init__(self):
        scores = [s.score for s in self.samples]
        if not all(math.isfinite(s) for s in scores):
            raise ValueError("trace contains non-finite scores")
        if scores[self.map_index] != max(scores):
            raise ValueError("map_index does not point at the maximal score")

    @property
    def map_sample(self) -> GibbsSample:
        return self.samples[self.map_index]


@dataclass
class BnpmDiagnostics:
    backend: str
    n_sweeps: int
    score_trace: np.ndarray
    stationary: bool
    q3_mean: float
    q4_mean: float
    n_capacity_grows: int = 0
    n_hyper_capped: int = 0
    group_warning: str | None = None
    elapsed_s: float = 0.0
    k_trace: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


def crp_init(n_nodes: int, alpha: float, rng) -> np.ndarray:
    """Sequential CRP pass assigning each node to an existing or new group."""
    z = np.zeros(n_nodes, dtype=np.int32)
    counts: list[int] = []
    for i in range(n_nodes):
        u = rng.random() * (i + alpha)
        acc = 0.0
        pick = len(counts)
        for k, c in enumerate(counts):
            acc += c
            if u < acc:
                pick = k
                break
        if pick == len(counts):
            counts.append(1)
        else:
            counts[pick] += 1
        z[i] = pick
    return z


DISPERSED_INIT_CAP = 512  # keeps the dense count matrix affordable at large N


def dispersed_init(n_nodes: int) -> np.ndarray:
    """Interleaved assignment into min(N, cap) groups (singletons when small)."""
    return (np.arange(n_nodes, dtype=np.int32) % min(n_nodes, DISPERSED_INIT_CAP)).astype(
        np.int32
    )


def fit_bnpm(
    graph: Graph, config: SamplerConfig | None = None, rng=None
) -> tuple[PosteriorTrace, Partition, int, BnpmDiagnostics]:
    """Run the collapsed Gibbs chain and report the best-scoring sample.

    Assignments start from one sequential CRP pass. After burn_in sweeps,
    every thinning-th state is recorded until n_samples are held; the
    returned partition and group count come from the recorded sample with
    the highest joint log score. Hyperparameters are slice-resampled once
    per sweep unless fixed in the config.
    """
    if graph.n_nodes < 1:
        raise ValueError("graph must have at least one node")
    config = config or SamplerConfig()
    if rng is None:
        rng = np.random.default_rng(config.seed)
    t_start = time.perf_counter()

    if config.fixed_hypers is not None:
        alpha, beta = config.fixed_hypers
    else:
        alpha, beta = INIT_ALPHA, INIT_BETA
    if config.init_mode == "dispersed":
        z0 = dispersed_init(graph.n_nodes)
    else:
        z0 = crp_init(graph.n_nodes, alpha, rng)
    state = GibbsState.from_partition(graph, z0, alpha, beta)

    backend = backend_name()
    kernel = sweep_kernel(backend)
    log_int, logb = _log_tables(graph, beta)
    n = graph.n_nodes
    seq_order = np.arange(n, dtype=np.int64)

    total = config.burn_in + config.n_samples * config.thinning
    score_trace = np.empty(total)
    k_trace = np.empty(total, dtype=np.int64)
    samples: list[GibbsSample] = []
    n_grows = 0
    n_capped = 0
    group_warning = None

    for sweep in range(1, total + 1):
        order = seq_order if config.sweep_order == "sequential" else rng.permutation(n)
        uniforms = rng.random(n)
        cap_before = state.capacity
        _run_sweep_arrays(state, graph, order, uniforms, log_int, logb, kernel)
        if state.capacity != cap_before:
            n_grows += 1

        k_num = state.n_groups
        hist = np.bincount(state.target_counts[:, :k_num].ravel())
        m_k = state.out_links[:k_num]
        if config.fixed_hypers is None:
            new_alpha, a_capped = _slice_sample_unit(
                lambda a: _alpha_log_post(a, n, k_num), state.alpha, rng
            )
            new_beta, b_capped = _slice_sample_unit(
                lambda b: _beta_log_post(b, n, m_k, hist), state.beta, rng
            )
            n_capped += int(a_capped) + int(b_capped)
            state.alpha = float(new_alpha)
            if new_beta != state.beta:
                state.beta = float(new_beta)
                logb = _log_tables(graph, state.beta)[1]

        score = _likelihood_from_stats(m_k, hist, n, state.beta) + crp_log_prob(
            state.assignments, state.alpha
        )
        score_trace[sweep - 1] = score
        k_trace[sweep - 1] = k_num
        if config.max_groups_warn and k_num > config.max_groups_warn and group_warning is None:
            group_warning = "group count %d exceeded max_groups_warn=%d at sweep %d" % (
                k_num,
                config.max_groups_warn,
                sweep,
            )
            logger.warning(group_warning)

        past_burn = sweep - config.burn_in
        if past_burn > 0 and past_burn % config.thinning == 0 and len(samples) < config.n_samples:
            samples.append(
                GibbsSample(
                    partition=state.partition(),
                    alpha=state.alpha,
                    beta=state.beta,
                    score=score,
                )
            )

    map_index = int(np.argmax([s.score for s in samples]))
    trace = PosteriorTrace(samples=samples, map_index=map_index)
    best = trace.map_sample

    q3 = score_trace[total // 2 : (3 * total) // 4]
    q4 = score_trace[(3 * total) // 4 :]
    q3_mean = float(q3.mean()) if q3.size else math.nan
    q4_mean = float(q4.mean()) if q4.size else math.nan
    stationary = (
        q3.size > 0
        and q4.size > 0
        and abs(q4_mean - q3_mean) <= 0.005 * abs(q3_mean)
    )
    diag = BnpmDiagnostics(
        backend=backend,
        n_sweeps=total,
        score_trace=score_trace,
        stationary=stationary,
        q3_mean=q3_mean,
        q4_mean=q4_mean,
        n_capacity_grows=n_grows,
        n_hyper_capped=n_capped,
        group_warning=group_warning,
        elapsed_s=time.perf_counter() - t_start,
        k_trace=k_trace,
    )
    return trace, best.partition, best.partition.n_groups, diag
