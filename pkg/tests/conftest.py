"""Shared corpora for the test suite.

The random corpus is fixed once and for all: seeds 0..199 with
n = 5 + seed % 21 (so 5..25) and edge probability cycling through
0.15, 0.3, 0.5. Tests that need fewer graphs slice this list; the
acceptance suite consumes it whole.
"""

from __future__ import annotations

import pytest

import graphcurv as gc

ER_PROBABILITIES = (0.15, 0.3, 0.5)


def er_graph(seed: int) -> gc.Graph:
    n = 5 + seed % 21
    p = ER_PROBABILITIES[seed % 3]
    return gc.erdos_renyi_graph(n, p, seed)


def regular_tree(degree: int) -> gc.Graph:
    """Depth-2 tree whose root and its children all have the given degree.

    Root gets ``degree`` children; each child gets ``degree - 1`` leaves.
    """
    edges = []
    nxt = 1
    children = []
    for _ in range(degree):
        edges.append((0, nxt))
        children.append(nxt)
        nxt += 1
    for child in children:
        for _ in range(degree - 1):
            edges.append((child, nxt))
            nxt += 1
    return gc.Graph.from_edges(nxt, edges)


@pytest.fixture(scope="session")
def er_corpus() -> list[gc.Graph]:
    return [er_graph(seed) for seed in range(200)]


def family_corpus() -> list[tuple[str, gc.Graph]]:
    graphs: list[tuple[str, gc.Graph]] = []
    for n in range(3, 9):
        graphs.append((f"cycle{n}", gc.cycle_graph(n)))
        graphs.append((f"complete{n}", gc.complete_graph(n)))
    graphs.append(("grid8x8", gc.grid2d_graph(8, 8)))
    graphs.append(("grid3x4", gc.grid2d_graph(3, 4)))
    for r in range(2, 7):
        graphs.append((f"tree{r}", gc.tree_graph(r, 3)))
    for n in range(3, 7):
        graphs.append((f"barbell{n}", gc.barbell_graph(n)))
    for length in (2, 4, 7):
        graphs.append((f"path{length}", gc.tree_graph(1, length)))
    return graphs


@pytest.fixture(scope="session")
def families() -> list[tuple[str, gc.Graph]]:
    return family_corpus()
