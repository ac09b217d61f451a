"""Bundled benchmark datasets and drop-in slots for the unbundled ones.

karate ships with the package. dolphin and adjnoun are standard public
datasets this build cannot redistribute; place the files into the package
``data/`` directory (or point NETMIX_DATA_DIR at a directory holding them)
and every loader, bench suite, and test picks them up:

* dolphin.edges / dolphin.gold: Lusseau's bottlenose dolphin social network,
  62 nodes, 159 undirected edges; gold = the two-community division.
* adjnoun.edges / adjnoun.gold: Newman's adjective-noun adjacency network of
  David Copperfield, 112 nodes, 425 undirected edges; gold = word class.

Both convert from the usual GML editions by writing one "u v" line per edge
and one "node group" line per node.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .errors import DataError
from .graph import Graph, Partition, load_edge_list, load_partition

DATASETS = {
    "karate": {"directed": False, "n_nodes": 34, "n_edges": 78, "gold_k": 2},
    "dolphin": {"directed": False, "n_nodes": 62, "n_edges": 159, "gold_k": 2},
    "adjnoun": {"directed": False, "n_nodes": 112, "n_edges": 425, "gold_k": 2},
}


def data_path(filename: str) -> Path | None:
    """Resolve a data file from NETMIX_DATA_DIR or the package data dir."""
    override = os.environ.get("NETMIX_DATA_DIR")
    if override:
        cand = Path(override) / filename
        if cand.exists():
            return cand
    pkg = resources.files("netmix") / "data" / filename
    try:
        if pkg.is_file():
            return Path(str(pkg))
    except OSError:  # pragma: no cover
        pass
    return None


def available(name: str) -> bool:
    return (
        data_path(name + ".edges") is not None
        and data_path(name + ".gold") is not None
    )


def load_bundled(name: str) -> tuple[Graph, Partition]:
    if name not in DATASETS:
        raise DataError("unknown dataset %r (have: %s)" % (name, ", ".join(DATASETS)))
    meta = DATASETS[name]
    edges = data_path(name + ".edges")
    gold = data_path(name + ".gold")
    if edges is None or gold is None:
        raise DataError(
            "dataset %r is not bundled; add %s.edges and %s.gold to the package "
            "data directory or set NETMIX_DATA_DIR (see the data section of the "
            "README)" % (name, name, name)
        )
    with open(edges) as fh:
        graph = load_edge_list(fh, directed=meta["directed"])
    with open(gold) as fh:
        partition = load_partition(fh, graph)
    return graph, partition
