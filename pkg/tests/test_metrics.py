import math

import pytest

import graphcurv as gc
from graphcurv.errors import DataError, ParameterError

from conftest import er_graph


def test_w1_identity():
    g = er_graph(10)
    assert gc.degree_w1(g, g) == 0.0


def test_w1_uniform_shift():
    assert gc.degree_w1(gc.cycle_graph(6), gc.complete_graph(4)) == pytest.approx(1.0)


def test_w1_mixed_degrees():
    # degree multisets {1,1,1,3} vs {2,2,2,2}: CDF areas |3/4-0| at t=1 ... = 1
    star = gc.tree_graph(3, 1)
    c4 = gc.cycle_graph(4)
    assert gc.degree_w1(star, c4) == pytest.approx(1.0)


def test_w1_brute_force_coupling():
    # Equal-size multisets: optimal 1-D coupling is the sorted pairing.
    import itertools

    pairs = [(0, 21), (1, 22), (2, 23)]  # same n (5..7), different graphs
    for seed, other in pairs:
        g1 = er_graph(seed)
        g2 = er_graph(other)
        assert g1.node_count == g2.node_count <= 8
        d1 = g1.degrees()
        d2 = sorted(g2.degrees())
        best = min(
            sum(abs(a - b) for a, b in zip(perm, d2)) / len(d1)
            for perm in itertools.permutations(d1)
        )
        assert gc.degree_w1(g1, g2) == pytest.approx(best, abs=1e-12)


def test_w1_metric_properties():
    graphs = [er_graph(s) for s in (0, 3, 6, 9)]
    for a in graphs:
        for b in graphs:
            ab = gc.degree_w1(a, b)
            assert ab == pytest.approx(gc.degree_w1(b, a), abs=1e-12)
            if sorted(a.degrees()) == sorted(b.degrees()):
                assert ab == pytest.approx(0.0, abs=1e-12)
    for a in graphs:
        for b in graphs:
            for c in graphs:
                assert gc.degree_w1(a, c) <= gc.degree_w1(a, b) + gc.degree_w1(b, c) + 1e-12


def test_edit_stats_examples():
    g = gc.cycle_graph(5)
    assert gc.edit_stats(g, g) == (0.0, 0.0)
    g10 = gc.cycle_graph(10)
    assert gc.edit_stats(g10, g10.with_edge(0, 5)) == (10.0, 0.0)
    with pytest.raises(ParameterError):
        gc.edit_stats(gc.cycle_graph(4), gc.cycle_graph(5))
    with pytest.raises(DataError):
        gc.edit_stats(gc.Graph.from_edges(3, []), gc.cycle_graph(3))


def test_edit_stats_bounded_by_sdrf_budget():
    for seed in (31, 44, 57):
        g = er_graph(seed)
        if g.edge_count < 3:
            continue
        max_iter = 6
        out, _ = gc.sdrf(g, gc.SdrfConfig(tau=2.0, max_iterations=max_iter, c_plus=0.7, seed=3))
        added, removed = gc.edit_stats(g, out)
        assert added + removed <= 100.0 * 2 * max_iter / g.edge_count + 1e-9


def test_sdrf_degree_distribution_drift_bounded():
    for seed in (31, 44):
        g = er_graph(seed)
        if g.edge_count < 3:
            continue
        max_iter = 8
        out, _ = gc.sdrf(g, gc.SdrfConfig(tau=3.0, max_iterations=max_iter, c_plus=0.8, seed=5))
        # Each of the <= 2m edits shifts two degrees by one.
        assert gc.degree_w1(g, out) <= 2.0 * max_iter * 2 / g.node_count + 1e-9


def test_homophily_examples():
    c4 = gc.cycle_graph(4)
    assert gc.homophily(c4, gc.NodeLabeling((0, 0, 0, 0))) == 1.0
    assert gc.homophily(c4, gc.NodeLabeling((0, 1, 0, 1))) == 0.0
    p3 = gc.tree_graph(1, 2)
    assert gc.homophily(p3, gc.NodeLabeling((0, 0, 1))) == pytest.approx(0.5)


def test_homophily_range():
    from graphcurv.rng import SplitMix64

    rng = SplitMix64(17)
    for seed in range(30):
        g = er_graph(seed)
        labels = gc.NodeLabeling(tuple(int(rng.uniform() * 3) for _ in range(g.node_count)))
        try:
            h = gc.homophily(g, labels, skip_isolated=True)
        except DataError:
            continue  # all isolated
        assert 0.0 <= h <= 1.0


def test_homophily_isolated_handling():
    g = gc.Graph.from_edges(3, [(0, 1)])
    labels = gc.NodeLabeling((0, 0, 0))
    with pytest.raises(DataError):
        gc.homophily(g, labels)
    assert gc.homophily(g, labels, skip_isolated=True) == 1.0


def test_homophily_length_mismatch():
    with pytest.raises(ParameterError):
        gc.homophily(gc.cycle_graph(4), gc.NodeLabeling((0, 1)))


def test_compare_report():
    g = gc.cycle_graph(6)
    out, _ = gc.sdrf(g, gc.SdrfConfig(tau=math.inf, max_iterations=3, convergence_floor=1.5))
    labels = gc.NodeLabeling((0, 0, 0, 1, 1, 1))
    report = gc.compare(g, out, labels)
    assert report.w1_degree >= 0
    assert report.pct_added >= 0 and report.pct_removed >= 0
    assert report.homophily_before is not None
    lines = report.summary_lines()
    assert len(lines) == 2 and "degree W1" in lines[0]
    obj = report.to_json_obj()
    assert set(obj) >= {"w1_degree", "pct_added", "pct_removed"}
