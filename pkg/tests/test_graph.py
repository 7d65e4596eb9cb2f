import io
import math

import numpy as np
import pytest

import graphcurv as gc
from graphcurv.errors import DataError, ParameterError

from conftest import er_graph


def test_parse_simple_path():
    g, stats = gc.parse_edge_list(["0 1", "1 2"])
    assert g.node_count == 3
    assert g.edge_count == 2
    assert stats.duplicate_edges == 0 and stats.self_loops == 0


def test_parse_duplicate_dropped():
    g, stats = gc.parse_edge_list(["a b", "b a", "# c"])
    assert g.node_count == 2
    assert g.edge_count == 1
    assert stats.duplicate_edges == 1


def test_parse_self_loop_dropped():
    g, stats = gc.parse_edge_list(["0 0", "0 1"])
    assert g.node_count == 2
    assert g.edge_count == 1
    assert stats.self_loops == 1


def test_parse_crlf_and_blank_lines():
    g, stats = gc.parse_edge_list(["a b\r\n", "\r\n", "b c\r\n"])
    assert g.node_count == 3 and g.edge_count == 2
    assert stats.duplicate_edges == 0


def test_parse_malformed_line_names_lineno():
    with pytest.raises(DataError, match="line 2"):
        gc.parse_edge_list(["0 1", "0 1 2"])


def test_parse_empty_input_errors():
    with pytest.raises(DataError):
        gc.parse_edge_list(["# nothing", ""])


def test_make_undirected():
    arcs, _ = gc.parse_edge_list(["0 1"], directed=True)
    assert gc.make_undirected(arcs).edge_count == 1
    arcs, _ = gc.parse_edge_list(["0 1", "1 0"], directed=True)
    assert gc.make_undirected(arcs).edge_count == 1
    arcs, _ = gc.parse_edge_list(["0 1", "2 1"], directed=True)
    g = gc.make_undirected(arcs)
    assert sorted(g.edges()) == [(0, 1), (1, 2)]


def test_round_trip_isomorphic():
    for seed in (3, 11, 25):
        g = er_graph(seed)
        buf = io.StringIO()
        gc.save_edge_list(g, buf)
        if g.edge_count == 0:
            continue
        reparsed, _ = gc.parse_edge_list(buf.getvalue().splitlines())
        assert reparsed.edge_count == g.edge_count
        # Isomorphism under the retained name mapping.
        name_to_new = {reparsed.name_of(i): i for i in range(reparsed.node_count)}
        for u, v in g.edges():
            nu, nv = name_to_new[g.name_of(u)], name_to_new[g.name_of(v)]
            assert reparsed.has_edge(nu, nv)


def test_graph_invariants_enforced():
    with pytest.raises(ParameterError):
        gc.Graph(2, ((1,), ()))  # asymmetric
    with pytest.raises(ParameterError):
        gc.Graph(1, ((0,),))  # self-loop
    with pytest.raises(ParameterError):
        gc.Graph(2, ((1, 1), (0, 0)))  # duplicates / not ascending


def test_generators_counts():
    c4 = gc.cycle_graph(4)
    assert c4.node_count == 4 and c4.edge_count == 4
    assert all(c4.degree(i) == 2 for i in range(4))
    bb = gc.barbell_graph(5)
    assert bb.edge_count == 2 * 10 + 1
    assert bb.has_edge(0, 5)
    tree = gc.tree_graph(2, 3)
    assert tree.node_count == 15 and tree.edge_count == 14
    grid = gc.grid2d_graph(3, 4)
    assert grid.node_count == 12 and grid.edge_count == 3 * 3 + 2 * 4


def test_generator_parameter_errors():
    with pytest.raises(ParameterError):
        gc.cycle_graph(2)
    with pytest.raises(ParameterError):
        gc.erdos_renyi_graph(5, 1.5, 0)


def test_erdos_renyi_deterministic():
    a = gc.erdos_renyi_graph(20, 0.3, 42)
    b = gc.erdos_renyi_graph(20, 0.3, 42)
    assert a.adjacency == b.adjacency
    c = gc.erdos_renyi_graph(20, 0.3, 43)
    assert a.adjacency != c.adjacency


def test_bfs_examples():
    p3 = gc.tree_graph(1, 2)
    assert gc.bfs_distances(p3, 0) == [0, 1, 2]
    k4 = gc.complete_graph(4)
    assert gc.bfs_distances(k4, 1) == [1, 0, 1, 1]
    two = gc.Graph.from_edges(2, [])
    assert gc.bfs_distances(two, 0) == [0, math.inf]


def test_bfs_cutoff():
    path = gc.tree_graph(1, 4)
    dist = gc.bfs_distances(path, 0, cutoff=2)
    assert dist[:3] == [0, 1, 2]
    assert dist[3] == math.inf and dist[4] == math.inf


def test_bfs_triangle_inequality(families):
    for _, g in families:
        all_dist = [gc.bfs_distances(g, i) for i in range(g.node_count)]
        for i in range(g.node_count):
            assert all_dist[i][i] == 0
        if g.node_count > 8:
            continue
        for i in range(g.node_count):
            for j in range(g.node_count):
                for k in range(g.node_count):
                    assert all_dist[i][j] <= all_dist[i][k] + all_dist[k][j]


def test_augmented_adjacency_values():
    k2 = gc.complete_graph(2)
    assert np.allclose(gc.augmented_normalized_adjacency(k2), [[0.5, 0.5], [0.5, 0.5]])
    single = gc.Graph.from_edges(1, [])
    assert np.allclose(gc.augmented_normalized_adjacency(single), [[1.0]])
    p3 = gc.tree_graph(1, 2)
    mat = gc.augmented_normalized_adjacency(p3)
    assert mat[0, 1] == pytest.approx(1 / math.sqrt(6), abs=1e-15)
    assert mat[1, 1] == pytest.approx(1 / 3, abs=1e-15)


def test_augmented_adjacency_structure_random():
    # Row sums are positive but exceed 1 on irregular graphs (a star center
    # sums to 1/(d+1) + d/sqrt(2(d+1)) > 1); the sharp statements are
    # symmetry, nonnegativity, and spectrum within [-1, 1].
    for seed in range(12):
        g = er_graph(seed)
        mat = gc.augmented_normalized_adjacency(g)
        assert np.allclose(mat, mat.T)
        assert np.all(mat >= 0)
        assert np.all(mat.sum(axis=1) > 0)
        eigs = np.linalg.eigvalsh(mat)
        assert eigs[0] >= -1 - 1e-9 and eigs[-1] <= 1 + 1e-9


def test_augmented_adjacency_row_sums_regular():
    for g in (gc.cycle_graph(6), gc.complete_graph(5)):
        sums = gc.augmented_normalized_adjacency(g).sum(axis=1)
        assert np.allclose(sums, 1.0)


def test_largest_component():
    g = gc.Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)])
    comp = gc.largest_component(g)
    assert comp.node_count == 3 and comp.edge_count == 2


def test_labels_parsing():
    g, _ = gc.parse_edge_list(["a b", "b c"])
    labeling = gc.load_labels(io.StringIO("a red\nb red\nc blue\n"), g)
    assert labeling.labels == (0, 0, 1)
    with pytest.raises(DataError):
        gc.load_labels(io.StringIO("a red\n"), g)
