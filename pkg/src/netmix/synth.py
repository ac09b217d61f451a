"""Synthetic benchmark networks with known gold partitions.

gen_planted places exact edge counts uniformly at random (no duplicates, no
self-loops) between and within blocks; the three preset networks build on it
or on direct placement:

* syn100: 100 nodes, five 20-node groups, three wired as communities and two
  as one bipartite pair, 402 edges total.
* syn108: 108-node directed network; 100 nodes in four groups wired uniformly
  at random plus 8 keystone target nodes whose signature sets distinguish the
  groups.
* syn10000: 10,000 nodes in 100 groups of 100; 40 community groups and 30
  bipartite pairs, 300,000 edges. A reduced preset (--reduced) keeps the same
  per-block densities at quarter scale: 2,500 nodes, 25 groups (9 community,
  8 pairs), 75,000 edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleSpecError
from .graph import Graph, Partition

SYN108_KEYSTONES = tuple(range(100, 108))


@dataclass(frozen=True)
class BlockSpec:
    """Exact edge counts to place between blocks; diagonal = within-block."""

    group_sizes: tuple[int, ...]
    edge_counts: np.ndarray  # (B, B) int; symmetric when undirected
    directed: bool
    seed: int = 0

    def __post_init__(self):
        counts = np.asarray(self.edge_counts, dtype=np.int64)
        object.__setattr__(self, "edge_counts", counts)
        b = len(self.group_sizes)
        if counts.shape != (b, b):
            raise ValueError("edge_counts must be (n_blocks, n_blocks)")
        if (counts < 0).any():
            raise ValueError("edge counts must be non-negative")
        if not self.directed and not np.array_equal(counts, counts.T):
            raise ValueError("undirected edge_counts must be symmetric")
        for a in range(b):
            for c in range(b):
                if counts[a, c] > _pair_capacity(self.group_sizes, a, c, self.directed):
                    raise InfeasibleSpecError(
                        "blocks (%d, %d): %d edges requested but only %d node "
                        "pairs exist"
                        % (
                            a,
                            c,
                            counts[a, c],
                            _pair_capacity(self.group_sizes, a, c, self.directed),
                        )
                    )


def _pair_capacity(sizes, a: int, b: int, directed: bool) -> int:
    if a != b:
        return sizes[a] * sizes[b]
    s = sizes[a]
    return s * (s - 1) if directed else s * (s - 1) // 2


def _block_offsets(sizes) -> np.ndarray:
    return np.concatenate([[0], np.cumsum(sizes)])


def _sample_block_edges(rng, count, size_a, size_b, off_a, off_b, directed, same):
    """Uniform distinct pairs for one block pair, as (count, 2) node ids."""
    if count == 0:
        return np.empty((0, 2), dtype=np.int64)
    if same:
        if directed:
            population = size_a * (size_a - 1)
            idx = rng.choice(population, size=count, replace=False)
            row = idx // (size_a - 1)
            col = idx % (size_a - 1)
            col = np.where(col >= row, col + 1, col)  # skip the diagonal
        else:
            population = size_a * (size_a - 1) // 2
            idx = rng.choice(population, size=count, replace=False)
            # decode linear index of the strict upper triangle
            row = (
                size_a
                - 2
                - np.floor(
                    np.sqrt(-8.0 * idx + 4.0 * size_a * (size_a - 1) - 7.0) / 2.0
                    - 0.5
                )
            ).astype(np.int64)
            col = idx + row + 1 - (row * (2 * size_a - row - 1)) // 2
        return np.column_stack([off_a + row, off_a + col])
    idx = rng.choice(size_a * size_b, size=count, replace=False)
    return np.column_stack([off_a + idx // size_b, off_b + idx % size_b])


def gen_planted(spec: BlockSpec, rng=None) -> tuple[Graph, Partition]:
    """Place the exact requested edge counts; returns the graph and gold blocks."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    sizes = spec.group_sizes
    off = _block_offsets(sizes)
    n = int(off[-1])
    b = len(sizes)
    chunks = []
    for a in range(b):
        for c in range(b):
            if not spec.directed and c < a:
                continue
            chunks.append(
                _sample_block_edges(
                    rng,
                    int(spec.edge_counts[a, c]),
                    sizes[a],
                    sizes[c],
                    off[a],
                    off[c],
                    spec.directed,
                    a == c,
                )
            )
    edges = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    graph = Graph.from_edges(
        [(int(u), int(v)) for u, v in edges], n_nodes=n, directed=spec.directed
    )
    gold = Partition(
        assignments=np.repeat(np.arange(b, dtype=np.int64), sizes), n_groups=b
    )
    return graph, gold


def gen_syn100(seed: int = 0) -> tuple[Graph, Partition]:
    """Five 20-node groups: three communities plus one bipartite pair, 402 edges.

    90 edges inside each community group, 120 between the bipartite pair, and
    12 noise edges spread over the remaining block pairs (one each, the last
    three by seeded draw).
    """
    rng = np.random.default_rng(seed)
    counts = np.zeros((5, 5), dtype=np.int64)
    for g in range(3):
        counts[g, g] = 90
    counts[3, 4] = counts[4, 3] = 120
    eligible = [(a, c) for a in range(5) for c in range(a + 1, 5) if (a, c) != (3, 4)]
    for a, c in eligible:
        counts[a, c] += 1
        counts[c, a] += 1
    for j in rng.choice(len(eligible), size=3, replace=False):
        a, c = eligible[int(j)]
        counts[a, c] += 1
        counts[c, a] += 1
    spec = BlockSpec(group_sizes=(20,) * 5, edge_counts=counts, directed=False, seed=seed)
    return gen_planted(spec, rng)


def gen_syn108(seed: int = 0) -> tuple[Graph, Partition]:
    """Directed 108-node network with four 25-node groups and 8 keystones.

    The 100 group members link uniformly at random among themselves with
    exactly 1,000 directed edges (mean out-degree 10), and every member links
    to its group's 4-keystone signature set, arranged circularly so no single
    keystone identifies a group. Keystones (nodes 100..107) have no out-links
    and form a fifth gold group that scoring may exclude.
    """
    rng = np.random.default_rng(seed)
    signatures = {
        0: (100, 101, 102, 103),
        1: (102, 103, 104, 105),
        2: (104, 105, 106, 107),
        3: (106, 107, 100, 101),
    }
    population = 100 * 99
    idx = rng.choice(population, size=1000, replace=False)
    row = idx // 99
    col = idx % 99
    col = np.where(col >= row, col + 1, col)
    edges = [(int(u), int(v)) for u, v in zip(row, col)]
    for g, keys in signatures.items():
        for member in range(25 * g, 25 * (g + 1)):
            for t in keys:
                edges.append((member, t))
    graph = Graph.from_edges(edges, n_nodes=108, directed=True)
    gold = np.empty(108, dtype=np.int64)
    for g in range(4):
        gold[25 * g : 25 * (g + 1)] = g
    gold[100:] = 4
    return graph, Partition(assignments=gold, n_groups=5)


def _syn_block_counts(n_comm: int, n_pairs: int, rng) -> np.ndarray:
    """Symmetric block-count matrix for the syn10000 family.

    Community groups: 2,400 internal edges and a 600-edge quota spread over
    all other groups. Bipartite pairs: 4,800 edges between the two members
    and a 1,200-edge quota from the pair to groups in other pairs. Quotas
    split uniformly over eligible (source, target) block slots, integer
    remainders assigned by seeded draw.
    """
    b = n_comm + 2 * n_pairs
    counts = np.zeros((b, b), dtype=np.int64)

    def add(a, c, amount):
        counts[a, c] += amount
        counts[c, a] += amount

    for g in range(n_comm):
        counts[g, g] = 2400
    for p in range(n_pairs):
        g1, g2 = n_comm + 2 * p, n_comm + 2 * p + 1
        add(g1, g2, 4800)

    for g in range(n_comm):
        others = [t for t in range(b) if t != g]
        base, rem = divmod(600, len(others))
        for t in others:
            add(g, t, base)
        for j in rng.choice(len(others), size=rem, replace=False):
            add(g, others[int(j)], 1)

    for p in range(n_pairs):
        own = (n_comm + 2 * p, n_comm + 2 * p + 1)
        targets = [t for t in range(n_comm, b) if t not in own]
        slots = [(s, t) for s in own for t in targets]
        base, rem = divmod(1200, len(slots))
        for s, t in slots:
            add(s, t, base)
        for j in rng.choice(len(slots), size=rem, replace=False):
            s, t = slots[int(j)]
            add(s, t, 1)
    return counts


def gen_syn10000(seed: int = 0, reduced: bool = False) -> tuple[Graph, Partition]:
    """Mixture benchmark: community groups plus bipartite pairs of 100 nodes.

    Full scale: 40 community groups + 30 pairs = 10,000 nodes, 300,000 edges.
    Reduced: 9 community groups + 8 pairs = 2,500 nodes, 75,000 edges, same
    per-block densities.
    """
    n_comm, n_pairs = (9, 8) if reduced else (40, 30)
    rng = np.random.default_rng(seed)
    counts = _syn_block_counts(n_comm, n_pairs, rng)
    spec = BlockSpec(
        group_sizes=(100,) * (n_comm + 2 * n_pairs),
        edge_counts=counts,
        directed=False,
        seed=seed,
    )
    return gen_planted(spec, rng)
