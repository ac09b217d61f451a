"""Graph data model and edge-list / partition file IO.

File formats (the on-disk contract of the CLI):

* Edge list: UTF-8 text, one edge per line, two whitespace-separated node
  tokens. Lines starting with ``#`` or ``%`` are comments and blank lines are
  ignored. Tokens are arbitrary strings; they are mapped to dense indices in
  first-appearance order (scanning each line left to right), so the same file
  always yields the same indexing. Duplicate edges collapse to one, self-loops
  are kept. For undirected input each line stands for one unordered edge.

* Partition: one ``node group`` pair per line, same comment rules. Every node
  of the accompanying graph must appear exactly once. Group tokens are
  arbitrary strings, compacted to dense group indices in first-appearance
  order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import EdgeListError, PartitionFileError

COMMENT_PREFIXES = ("#", "%")


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph in CSR form.

    ``indptr``/``targets`` store the out-adjacency: the targets of node ``i``
    are ``targets[indptr[i]:indptr[i+1]]``, sorted ascending. For undirected
    graphs the symmetric closure is stored, so a node's row lists all its
    neighbours and each unordered edge appears in both rows (a self-loop
    appears once). ``n_edges`` counts stored links when directed and unordered
    pairs when undirected.
    """

    n_nodes: int
    n_edges: int
    directed: bool
    indptr: np.ndarray
    targets: np.ndarray
    node_labels: tuple[str, ...] | None = None
    duplicates_collapsed: int = 0

    def out_neighbors(self, i: int) -> np.ndarray:
        return self.targets[self.indptr[i] : self.indptr[i + 1]]

    def out_degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def in_degrees(self) -> np.ndarray:
        """Link counts into each node under the directed-link view."""
        return np.bincount(self.targets, minlength=self.n_nodes)

    def label_of(self, i: int) -> str:
        return self.node_labels[i] if self.node_labels is not None else str(i)

    def index_of(self, token: str) -> int:
        return self._label_index()[token]

    def _label_index(self) -> dict:
        if self.node_labels is None:
            return {str(i): i for i in range(self.n_nodes)}
        return {lab: i for i, lab in enumerate(self.node_labels)}

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        n_nodes: int,
        directed: bool,
        node_labels: tuple[str, ...] | None = None,
    ) -> "Graph":
        """Build a graph from integer edge pairs, deduplicating.

        For undirected graphs each pair is an unordered edge; both directions
        are stored. Node indices must already be dense in [0, n_nodes).
        """
        seen = set()
        n_dup = 0
        for u, v in edges:
            key = (u, v) if directed else (min(u, v), max(u, v))
            if key in seen:
                n_dup += 1
            else:
                seen.add(key)
        links = []
        for u, v in seen:
            links.append((u, v))
            if not directed and u != v:
                links.append((v, u))
        links.sort()
        src = np.fromiter((u for u, _ in links), dtype=np.int64, count=len(links))
        tgt = np.fromiter((v for _, v in links), dtype=np.int32, count=len(links))
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(
            n_nodes=n_nodes,
            n_edges=len(seen),
            directed=directed,
            indptr=indptr,
            targets=tgt,
            node_labels=node_labels,
            duplicates_collapsed=n_dup,
        )


@dataclass(frozen=True)
class Partition:
    """Group assignment per node with a compact label space [0, n_groups)."""

    assignments: np.ndarray
    n_groups: int

    def __post_init__(self):
        z = np.asarray(self.assignments, dtype=np.int64)
        object.__setattr__(self, "assignments", z)
        if z.size:
            used = np.unique(z)
            if used[0] < 0 or used[-1] >= self.n_groups or used.size != self.n_groups:
                raise ValueError("partition labels are not compact in [0, n_groups)")
        elif self.n_groups != 0:
            raise ValueError("empty partition must have zero groups")

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        z, k = compact_labels(labels)
        return cls(assignments=z, n_groups=k)

    def __len__(self) -> int:
        return self.assignments.size

    def group_members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == k)


def compact_labels(labels: Sequence) -> tuple[np.ndarray, int]:
    """Relabel arbitrary group labels to dense ints in first-appearance order."""
    mapping = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out, len(mapping)


def _iter_data_lines(source: IO) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        yield lineno, line


def load_edge_list(source: IO, directed: bool) -> Graph:
    """Parse an edge-list stream into a Graph.

    Node tokens get dense indices in first-appearance order. Duplicate edges
    are collapsed (the count is recorded on the graph), self-loops retained.
    Raises EdgeListError on malformed lines or empty input.
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    for lineno, line in _iter_data_lines(source):
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(
                "line %d: expected two node tokens, got %d" % (lineno, len(parts))
            )
        pair = []
        for tok in parts:
            if tok not in index:
                index[tok] = len(labels)
                labels.append(tok)
            pair.append(index[tok])
        edges.append((pair[0], pair[1]))
    if not edges:
        raise EdgeListError("edge list contains no edges")
    return Graph.from_edges(
        edges, n_nodes=len(labels), directed=directed, node_labels=tuple(labels)
    )


def load_partition(source: IO, graph: Graph) -> Partition:
    """Parse a ``node group`` file; every graph node must appear exactly once."""
    index = graph._label_index()
    groups: list = [None] * graph.n_nodes
    seen = np.zeros(graph.n_nodes, dtype=bool)
    for lineno, line in _iter_data_lines(source):
        parts = line.split()
        if len(parts) != 2:
            raise PartitionFileError(
                "line %d: expected 'node group', got %r" % (lineno, line)
            )
        node_tok, group_tok = parts
        if node_tok not in index:
            raise PartitionFileError(
                "line %d: node %r is not in the graph" % (lineno, node_tok)
            )
        i = index[node_tok]
        if seen[i]:
            raise PartitionFileError(
                "line %d: node %r assigned more than once" % (lineno, node_tok)
            )
        seen[i] = True
        groups[i] = group_tok
    if not seen.all():
        missing = [graph.label_of(i) for i in np.flatnonzero(~seen)[:5]]
        raise PartitionFileError(
            "partition is missing node(s): %s" % ", ".join(missing)
        )
    return Partition.from_labels(groups)


def directed_links(graph: Graph) -> np.ndarray:
    """All (source, target) link pairs the likelihood consumes, shape (L, 2).

    Directed graphs contribute each stored link once. Undirected graphs
    contribute each edge from both endpoints' viewpoints, so {i, j} yields
    (i, j) and (j, i); a self-loop yields one pair.
    """
    src = np.repeat(np.arange(graph.n_nodes, dtype=np.int64), graph.out_degrees())
    return np.column_stack([src, graph.targets.astype(np.int64)])


@dataclass
class GraphDiagnostics:
    isolated_nodes: list = field(default_factory=list)
    self_loop_count: int = 0
    symmetry_violations: list = field(default_factory=list)
    duplicates_collapsed: int = 0

    def warnings(self) -> list[str]:
        out = []
        if self.isolated_nodes:
            out.append(
                "isolated node(s): %s" % ", ".join(str(i) for i in self.isolated_nodes)
            )
        if self.self_loop_count:
            out.append("self-loop count: %d" % self.self_loop_count)
        if self.symmetry_violations:
            out.append(
                "asymmetric undirected adjacency at: %s"
                % ", ".join(str(p) for p in self.symmetry_violations)
            )
        if self.duplicates_collapsed:
            out.append("duplicate input edges collapsed: %d" % self.duplicates_collapsed)
        return out


def validate(graph: Graph) -> GraphDiagnostics:
    """Inspect a graph for isolated nodes, self-loops, and broken symmetry.

    Purely diagnostic, never mutates. Symmetry violations can only arise from
    programmatic construction; loader-built undirected graphs are symmetric.
    """
    diag = GraphDiagnostics(duplicates_collapsed=graph.duplicates_collapsed)
    deg = graph.out_degrees()
    if not graph.directed:
        isolated = np.flatnonzero(deg == 0)
    else:
        indeg = graph.in_degrees()
        isolated = np.flatnonzero((deg == 0) & (indeg == 0))
    diag.isolated_nodes = isolated.tolist()
    for i in range(graph.n_nodes):
        nbrs = graph.out_neighbors(i)
        if np.any(nbrs == i):
            diag.self_loop_count += int(np.sum(nbrs == i))
        if not graph.directed:
            for j in nbrs:
                if i not in graph.out_neighbors(int(j)):
                    diag.symmetry_violations.append((i, int(j)))
    return diag


def write_edge_list(graph: Graph, stream: IO) -> None:
    """Write the graph in the edge-list format; inverse of load_edge_list.

    Each edge is written once (undirected pairs with lower index first), in
    index order, using original node labels when known. Reloading reproduces
    the identical adjacency structure as long as no node is isolated.
    """
    for i in range(graph.n_nodes):
        for j in graph.out_neighbors(i):
            j = int(j)
            if not graph.directed and j < i:
                continue
            stream.write("%s %s\n" % (graph.label_of(i), graph.label_of(j)))


def write_partition(partition: Partition, graph: Graph, stream: IO) -> None:
    """Write ``node group`` lines in node-index order."""
    for i in range(graph.n_nodes):
        stream.write("%s %d\n" % (graph.label_of(i), int(partition.assignments[i])))
