import io

import numpy as np
import pytest

from conftest import random_graph
from netmix.errors import EdgeListError, PartitionFileError
from netmix.graph import (
    Graph,
    Partition,
    compact_labels,
    directed_links,
    load_edge_list,
    load_partition,
    validate,
    write_edge_list,
    write_partition,
)


def load(text, directed=False):
    return load_edge_list(io.StringIO(text), directed=directed)


class TestLoadEdgeList:
    def test_path_graph(self):
        g = load("0 1\n1 2\n")
        assert (g.n_nodes, g.n_edges, g.directed) == (3, 2, False)
        assert [list(g.out_neighbors(i)) for i in range(3)] == [[1], [0, 2], [1]]

    def test_directed_pair_both_ways(self):
        g = load("a b\nb a\n", directed=True)
        assert (g.n_nodes, g.n_edges) == (2, 2)
        assert list(g.out_neighbors(0)) == [1]
        assert list(g.out_neighbors(1)) == [0]

    def test_karate_shape(self, karate):
        g, gold = karate
        assert (g.n_nodes, g.n_edges) == (34, 78)
        assert gold.n_groups == 2

    def test_first_appearance_indexing(self):
        g = load("walrus eagle\neagle carp\n")
        assert g.node_labels == ("walrus", "eagle", "carp")

    def test_comments_and_blanks(self):
        g = load("# header\n% other\n\n0 1\n")
        assert g.n_edges == 1

    def test_duplicates_collapse_with_counter(self):
        g = load("0 1\n0 1\n1 0\n")
        assert g.n_edges == 1
        assert g.duplicates_collapsed == 2

    def test_directed_duplicates(self):
        g = load("0 1\n0 1\n1 0\n", directed=True)
        assert g.n_edges == 2
        assert g.duplicates_collapsed == 1

    def test_self_loop_retained(self):
        g = load("3 3\n3 4\n")
        assert g.n_edges == 2
        assert 0 in g.out_neighbors(0)

    def test_malformed_line_number(self):
        with pytest.raises(EdgeListError, match="line 2"):
            load("0 1\n0 1 2\n")

    def test_empty_input(self):
        with pytest.raises(EdgeListError):
            load("# only comments\n")


class TestLoadPartition:
    def test_single_group(self):
        g = load("0 1\n1 2\n")
        p = load_partition(io.StringIO("0 g0\n1 g0\n2 g0\n"), g)
        assert p.n_groups == 1

    def test_karate_gold(self, karate):
        g, gold = karate
        assert len(gold) == 34 and gold.n_groups == 2

    def test_missing_node_named(self):
        g = load("0 1\n1 2\n")
        with pytest.raises(PartitionFileError, match="2"):
            load_partition(io.StringIO("0 a\n1 b\n"), g)

    def test_unknown_node(self):
        g = load("0 1\n")
        with pytest.raises(PartitionFileError, match="'9'"):
            load_partition(io.StringIO("0 a\n1 a\n9 a\n"), g)

    def test_duplicate_node(self):
        g = load("0 1\n")
        with pytest.raises(PartitionFileError, match="more than once"):
            load_partition(io.StringIO("0 a\n0 b\n1 a\n"), g)

    def test_labels_compacted(self):
        g = load("0 1\n1 2\n")
        p = load_partition(io.StringIO("0 zz\n1 aa\n2 zz\n"), g)
        assert p.assignments.tolist() == [0, 1, 0]


class TestDirectedLinks:
    def test_undirected_edge_gives_both(self):
        g = load("0 1\n")
        assert directed_links(g).tolist() == [[0, 1], [1, 0]]

    def test_directed_edge_gives_one(self):
        g = load("0 1\n", directed=True)
        assert directed_links(g).tolist() == [[0, 1]]

    def test_karate_count(self, karate):
        g, _ = karate
        assert directed_links(g).shape == (156, 2)  # 2 * 78, no self-loops

    def test_reversal_closure_undirected(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            g = random_graph(rng, directed=False, self_loops=True)
            pairs = {tuple(p) for p in directed_links(g)}
            assert pairs == {(b, a) for a, b in pairs}

    def test_length_2m_minus_self_loops(self):
        g = load("0 0\n0 1\n1 2\n")
        assert directed_links(g).shape[0] == 2 * g.n_edges - 1


class TestValidate:
    def test_clean_path(self):
        diag = validate(load("0 1\n1 2\n"))
        assert diag.warnings() == []

    def test_isolated_node(self):
        g = Graph.from_edges([(0, 1)], n_nodes=3, directed=False)
        diag = validate(g)
        assert diag.isolated_nodes == [2]
        assert any("isolated" in w for w in diag.warnings())

    def test_self_loop_count(self):
        diag = validate(load("3 3\n3 4\n"))
        assert diag.self_loop_count == 1

    def test_symmetry_violation_programmatic(self):
        g = Graph.from_edges([(0, 1)], n_nodes=2, directed=True)
        broken = Graph(
            n_nodes=2,
            n_edges=1,
            directed=False,
            indptr=g.indptr,
            targets=g.targets,
        )
        assert validate(broken).symmetry_violations == [(0, 1)]


class TestRoundTrip:
    @pytest.mark.parametrize("directed", [False, True])
    def test_write_then_load(self, directed):
        rng = np.random.default_rng(11)
        for _ in range(15):
            g = random_graph(rng, directed=directed, self_loops=True)
            deg = g.out_degrees()
            if not directed:
                has_edge = deg > 0
            else:
                has_edge = (deg + g.in_degrees()) > 0
            if not has_edge.all():
                continue  # isolated nodes cannot survive an edge-list round trip
            buf = io.StringIO()
            write_edge_list(g, buf)
            g2 = load_edge_list(io.StringIO(buf.getvalue()), directed=directed)
            assert g2.n_nodes == g.n_nodes and g2.n_edges == g.n_edges
            # compare adjacency through original labels
            orig = {
                (g.label_of(i), g.label_of(int(j)))
                for i in range(g.n_nodes)
                for j in g.out_neighbors(i)
            }
            new = {
                (g2.label_of(i), g2.label_of(int(j)))
                for i in range(g2.n_nodes)
                for j in g2.out_neighbors(i)
            }
            assert orig == new

    def test_partition_round_trip(self, karate):
        g, gold = karate
        buf = io.StringIO()
        write_partition(gold, g, buf)
        back = load_partition(io.StringIO(buf.getvalue()), g)
        assert np.array_equal(back.assignments, gold.assignments)


class TestPartitionType:
    def test_compact_labels_first_appearance(self):
        z, k = compact_labels(["b", "a", "b", "c"])
        assert z.tolist() == [0, 1, 0, 2] and k == 3

    def test_rejects_non_compact(self):
        with pytest.raises(ValueError):
            Partition(assignments=np.array([0, 2]), n_groups=3)

    def test_group_members(self):
        p = Partition.from_labels([0, 1, 0])
        assert p.group_members(0).tolist() == [0, 2]
