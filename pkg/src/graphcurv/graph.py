"""Immutable simple-graph core.

Holds the graph representation used by every other module (sorted adjacency
lists over dense 0-based indices), the deterministic family generators,
breadth-first distances, and the self-loop-augmented degree-normalized
adjacency matrix.

Edge-list text format: one edge per line as two whitespace-separated node
identifiers, ``#`` starting a comment line, UTF-8, LF or CRLF endings.
Node identifiers may be arbitrary strings; they are mapped to indices in
first-appearance order and the mapping is retained for output. Saved files
list each edge once, sorted by (min index, max index), using the original
names. An optional labels file carries one ``node label`` pair per line.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from .errors import DataError, ParameterError
from .rng import SplitMix64


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    """Unordered edge as an ordered pair (min, max)."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: no self-loops, no duplicate edges.

    ``adjacency[i]`` is the ascending tuple of neighbors of node ``i``;
    symmetry (j in adjacency[i] iff i in adjacency[j]) is validated at
    construction. Instances are immutable: edits produce new graphs, so a
    ``Graph`` may be shared freely across threads or processes.
    """

    node_count: int
    adjacency: tuple[tuple[int, ...], ...]
    node_names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.node_count
        if n < 0:
            raise ParameterError("node_count must be nonnegative")
        if len(self.adjacency) != n:
            raise ParameterError("adjacency length must equal node_count")
        if self.node_names is not None and len(self.node_names) != n:
            raise ParameterError("node_names length must equal node_count")
        for i, nbrs in enumerate(self.adjacency):
            prev = -1
            for v in nbrs:
                if not 0 <= v < n:
                    raise ParameterError(f"neighbor index {v} out of range for node {i}")
                if v == i:
                    raise ParameterError(f"self-loop stored at node {i}")
                if v <= prev:
                    raise ParameterError(f"adjacency of node {i} not strictly ascending")
                prev = v
        # Symmetry: every arc must have its reverse.
        for i, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if not _contains(self.adjacency[v], i):
                    raise ParameterError(f"asymmetric adjacency: {i}->{v} without {v}->{i}")

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        node_names: Sequence[str] | None = None,
    ) -> "Graph":
        """Build a graph from an edge iterable; duplicates and self-loops are dropped."""
        nbrs: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ParameterError(f"edge ({u}, {v}) out of range")
            if u == v:
                continue
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        names = tuple(node_names) if node_names is not None else None
        return cls(node_count, adjacency, names)

    # -- basic queries -------------------------------------------------

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self.adjacency]

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each undirected edge once, sorted by (min endpoint, max endpoint)."""
        for i, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if v > i:
                    yield (i, v)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def has_edge(self, u: int, v: int) -> bool:
        return _contains(self.adjacency[u], v)

    def name_of(self, i: int) -> str:
        return self.node_names[i] if self.node_names is not None else str(i)

    # -- derived graphs ------------------------------------------------

    def with_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise ParameterError("cannot add a self-loop")
        if self.has_edge(u, v):
            raise ParameterError(f"edge ({u}, {v}) already present")
        adj = [list(nbrs) for nbrs in self.adjacency]
        adj[u].insert(bisect_left(adj[u], v), v)
        adj[v].insert(bisect_left(adj[v], u), u)
        return Graph(self.node_count, tuple(tuple(a) for a in adj), self.node_names)

    def without_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise ParameterError(f"edge ({u}, {v}) not present")
        adj = [list(nbrs) for nbrs in self.adjacency]
        adj[u].remove(v)
        adj[v].remove(u)
        return Graph(self.node_count, tuple(tuple(a) for a in adj), self.node_names)

    def is_connected(self) -> bool:
        if self.node_count == 0:
            return True
        dist = bfs_distances(self, 0)
        return all(d != math.inf for d in dist)


def _contains(sorted_tuple: tuple[int, ...], x: int) -> bool:
    k = bisect_left(sorted_tuple, x)
    return k < len(sorted_tuple) and sorted_tuple[k] == x


@dataclass(frozen=True)
class DirectedArcs:
    """Arc set read from a directed edge list, before symmetrization."""

    node_count: int
    arcs: tuple[tuple[int, int], ...]
    node_names: tuple[str, ...] | None = None


@dataclass(frozen=True)
class NodeLabeling:
    """Per-node class labels, index-aligned with a graph."""

    labels: tuple[int, ...]
    label_names: tuple[str, ...] | None = None


@dataclass(frozen=True)
class ParseStats:
    """Bookkeeping from edge-list parsing: how many lines were dropped."""

    duplicate_edges: int
    self_loops: int


# ----------------------------------------------------------------------
# Edge-list and label I/O


def parse_edge_list(
    lines: Iterable[str], directed: bool = False
) -> tuple[Graph | DirectedArcs, ParseStats]:
    """Parse edge-list text into a graph (or raw arcs when ``directed``).

    Nodes are indexed 0..n-1 in first-appearance order. Duplicate edges and
    self-loops are dropped and counted, not errors. A line that is neither
    blank, a comment, nor exactly two tokens raises ``DataError`` naming the
    line number; so does input containing no edges at all.
    """
    index: dict[str, int] = {}
    names: list[str] = []
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    self_loops = 0
    any_line = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise DataError(f"line {lineno}: expected 2 tokens, found {len(tokens)}")
        any_line = True
        pair = []
        for tok in tokens:
            if tok not in index:
                index[tok] = len(names)
                names.append(tok)
            pair.append(index[tok])
        u, v = pair
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if directed else canonical_edge(u, v)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        arcs.append((u, v))
    if not any_line:
        raise DataError("empty edge list: no edges found")
    stats = ParseStats(duplicate_edges=duplicates, self_loops=self_loops)
    if directed:
        return DirectedArcs(len(names), tuple(arcs), tuple(names)), stats
    return Graph.from_edges(len(names), arcs, names), stats


def load_edge_list(source: str | TextIO, directed: bool = False) -> Graph | DirectedArcs:
    """Load an edge list from a path or open text stream; see ``parse_edge_list``."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            graph, _ = parse_edge_list(fh, directed=directed)
    else:
        graph, _ = parse_edge_list(source, directed=directed)
    return graph


def make_undirected(arcs: DirectedArcs) -> Graph:
    """Symmetric closure of an arc set."""
    return Graph.from_edges(arcs.node_count, arcs.arcs, arcs.node_names)


def save_edge_list(g: Graph, target: str | TextIO) -> None:
    """Write edges sorted by (min index, max index), one per line, original names."""
    if isinstance(target, str):
        with open(target, "w", encoding="utf-8") as fh:
            save_edge_list(g, fh)
        return
    for u, v in g.edges():
        target.write(f"{g.name_of(u)} {g.name_of(v)}\n")


def parse_labels(lines: Iterable[str], g: Graph) -> NodeLabeling:
    """Parse ``node label`` lines into a labeling aligned with ``g``.

    Label tokens are mapped to small integers in first-appearance order.
    Every graph node must receive exactly one label.
    """
    by_name = {g.name_of(i): i for i in range(g.node_count)}
    label_index: dict[str, int] = {}
    label_names: list[str] = []
    labels: list[int | None] = [None] * g.node_count
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise DataError(f"labels line {lineno}: expected 2 tokens, found {len(tokens)}")
        node_tok, label_tok = tokens
        if node_tok not in by_name:
            raise DataError(f"labels line {lineno}: unknown node {node_tok!r}")
        if label_tok not in label_index:
            label_index[label_tok] = len(label_names)
            label_names.append(label_tok)
        idx = by_name[node_tok]
        if labels[idx] is not None:
            raise DataError(f"labels line {lineno}: node {node_tok!r} labeled twice")
        labels[idx] = label_index[label_tok]
    missing = [g.name_of(i) for i, lab in enumerate(labels) if lab is None]
    if missing:
        raise DataError(f"labels missing for {len(missing)} nodes (first: {missing[0]!r})")
    return NodeLabeling(tuple(labels), tuple(label_names))


def load_labels(source: str | TextIO, g: Graph) -> NodeLabeling:
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return parse_labels(fh, g)
    return parse_labels(source, g)


# ----------------------------------------------------------------------
# Generators. Node orderings are part of the contract:
#   cycle:   0..n-1 in ring order
#   complete: all pairs
#   grid2d:  row-major, node r*cols + c
#   tree:    BFS order from root 0; root has `branching` children, every
#            other internal node has `branching` children plus its parent
#   barbell: first clique 0..n-1, second clique n..2n-1, bridge (0, n)
#   erdos_renyi: pairs (i, j), i < j, scanned in lexicographic order, one
#            splitmix64 draw per pair, edge present iff draw < p


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ParameterError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ParameterError("complete graph needs n >= 1")
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid2d_graph(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise ParameterError("grid needs rows, cols >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            node = r * cols + c
            if c + 1 < cols:
                edges.append((node, node + 1))
            if r + 1 < rows:
                edges.append((node, node + cols))
    return Graph.from_edges(rows * cols, edges)


def tree_graph(branching: int, depth: int) -> Graph:
    if branching < 1 or depth < 0:
        raise ParameterError("tree needs branching >= 1 and depth >= 0")
    edges = []
    next_node = 1
    frontier = [0]
    for _ in range(depth):
        new_frontier = []
        for parent in frontier:
            for _ in range(branching):
                edges.append((parent, next_node))
                new_frontier.append(next_node)
                next_node += 1
        frontier = new_frontier
    return Graph.from_edges(next_node, edges)


def barbell_graph(n: int) -> Graph:
    if n < 2:
        raise ParameterError("barbell needs clique size n >= 2")
    edges = []
    for base in (0, n):
        edges.extend((base + i, base + j) for i in range(n) for j in range(i + 1, n))
    edges.append((0, n))
    return Graph.from_edges(2 * n, edges)


def erdos_renyi_graph(n: int, p: float, seed: int) -> Graph:
    if n < 1:
        raise ParameterError("erdos_renyi needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise ParameterError("erdos_renyi needs p in [0, 1]")
    rng = SplitMix64(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.uniform() < p:
                edges.append((i, j))
    return Graph.from_edges(n, edges)


def generate(family: str, *params: float) -> Graph:
    """Dispatch on family name; used by the CLI ``generate`` subcommand."""
    try:
        if family == "cycle":
            (n,) = params
            return cycle_graph(int(n))
        if family == "complete":
            (n,) = params
            return complete_graph(int(n))
        if family == "grid2d":
            rows, cols = params
            return grid2d_graph(int(rows), int(cols))
        if family == "tree":
            branching, depth = params
            return tree_graph(int(branching), int(depth))
        if family == "barbell":
            (n,) = params
            return barbell_graph(int(n))
        if family == "erdos_renyi":
            n, p, seed = params
            return erdos_renyi_graph(int(n), float(p), int(seed))
    except ValueError as exc:
        raise ParameterError(f"bad parameters for family {family!r}: {exc}") from exc
    raise ParameterError(f"unknown graph family {family!r}")


# ----------------------------------------------------------------------
# Traversal and matrices


def bfs_distances(g: Graph, source: int, cutoff: int | None = None) -> list[float]:
    """Hop distances from ``source``; ``math.inf`` marks nodes that are
    unreachable or beyond ``cutoff``."""
    if not 0 <= source < g.node_count:
        raise ParameterError(f"source {source} out of range")
    dist: list[float] = [math.inf] * g.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if cutoff is not None and dist[u] >= cutoff:
            continue
        for v in g.adjacency[u]:
            if dist[v] == math.inf:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    Ties go to the component containing the smallest node index. Node order
    within the component is preserved, names carried over.
    """
    unseen = set(range(g.node_count))
    best: list[int] = []
    while unseen:
        start = min(unseen)
        comp = [start]
        unseen.discard(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if v in unseen:
                    unseen.discard(v)
                    comp.append(v)
                    queue.append(v)
        if len(comp) > len(best):
            best = comp
    keep = sorted(best)
    remap = {old: new for new, old in enumerate(keep)}
    edges = [(remap[u], remap[v]) for u, v in g.edges() if u in remap and v in remap]
    names = tuple(g.name_of(i) for i in keep) if g.node_names is not None else None
    return Graph.from_edges(len(keep), edges, names)


def augmented_normalized_adjacency(g: Graph) -> np.ndarray:
    """(D+I)^(-1/2) (A+I) (D+I)^(-1/2) as a dense symmetric matrix."""
    n = g.node_count
    w = np.array([1.0 / math.sqrt(d + 1.0) for d in g.degrees()])
    mat = np.zeros((n, n))
    for i in range(n):
        mat[i, i] = w[i] * w[i]
        for j in g.adjacency[i]:
            mat[i, j] = w[i] * w[j]
    return mat
