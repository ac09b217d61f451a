import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from netmix.datasets import load_bundled
from netmix.graph import Graph


@pytest.fixture(scope="session")
def karate():
    return load_bundled("karate")


def random_graph(rng, n=None, p=None, directed=None, self_loops=False):
    """Small random graph with at least one edge."""
    n = n or int(rng.integers(3, 12))
    p = p if p is not None else float(rng.uniform(0.15, 0.5))
    directed = directed if directed is not None else bool(rng.integers(0, 2))
    edges = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if (i != j or (self_loops and rng.random() < 0.3)) and rng.random() < p
    ]
    if not edges:
        edges = [(0, (1) % n)]
    return Graph.from_edges(edges, n_nodes=n, directed=directed)


def random_partition(rng, n, k_max=5):
    z = rng.integers(0, int(rng.integers(1, k_max + 1)), size=n)
    from netmix.graph import Partition

    return Partition.from_labels(z.tolist())
