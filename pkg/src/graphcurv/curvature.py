"""Combinatorial edge curvatures.

For an edge i~j the relevant neighborhood census is:

* triangles: common neighbors S1(i) & S1(j);
* squares_i: neighbors k of i (not j, not adjacent to j) lying on a 4-cycle
  i~k~w~j~i with no diagonal inside (the witness w is not adjacent to i);
* degeneracy: the largest number of such 4-cycles through any single census
  node, computed from adjacency rows as |N(k) & (N(j) - N(i))| - 1, where
  the -1 removes the opposite endpoint itself.

Balanced Forman curvature of i~j (zero when min degree is 1):

    2/d_i + 2/d_j - 2 + 2*T/max(d) + T/min(d) + (|sq_i| + |sq_j|) / (degeneracy * max(d))

with T the triangle count and the last term dropped when there are no
squares. The value is always > -2. The plain (augmented) Forman curvature is
4 - d_i - d_j + 3*T, and the Jost-Liu bound (with d_i <= d_j) is

    -(1 - 1/d_i - 1/d_j - T/d_j)+ - (1 - 1/d_i - 1/d_j - T/d_i)+ + T/d_j.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import AbstractSet, Callable, Iterable, Sequence, TextIO

from .errors import ParameterError
from .graph import Graph

CURVATURE_KINDS = ("balanced_forman", "forman", "ollivier", "jost_liu")

HISTOGRAM_LO = -2.0
HISTOGRAM_HI = 2.0
HISTOGRAM_BINS = 16


@dataclass(frozen=True)
class EdgeProfile:
    """Neighborhood census of one edge."""

    i: int
    j: int
    d_i: int
    d_j: int
    triangles: frozenset[int]
    squares_i: frozenset[int]
    squares_j: frozenset[int]
    degeneracy: int | None

    def __post_init__(self):
        if (len(self.squares_i) > 0) != (len(self.squares_j) > 0):
            raise ParameterError("square sets must be empty or nonempty together")
        if self.degeneracy is not None and self.degeneracy < 1:
            raise ParameterError("degeneracy must be >= 1 when present")


def neighbor_sets(g: Graph) -> list[set[int]]:
    """Adjacency as mutable sets; the working form for profile computations."""
    return [set(nbrs) for nbrs in g.adjacency]


def profile_from_sets(adj: Sequence[AbstractSet[int]], i: int, j: int) -> EdgeProfile:
    ni = adj[i]
    nj = adj[j]
    if j not in ni:
        raise ParameterError(f"({i}, {j}) is not an edge")
    triangles = frozenset(ni & nj)
    squares_i = set()
    squares_j = set()
    for k in ni:
        if k == j or k in nj:
            continue
        # 4-cycle witness: w ~ k, w ~ j, w not adjacent to i, w != i.
        if any(w != i and w not in ni for w in adj[k] & nj):
            squares_i.add(k)
    for w in nj:
        if w == i or w in ni:
            continue
        if any(k != j and k not in nj for k in adj[w] & ni):
            squares_j.add(w)
    degeneracy: int | None = None
    if squares_i:
        best = 0
        for k in squares_i:
            best = max(best, len(adj[k] & nj) - len(adj[k] & nj & ni) - 1)
        for w in squares_j:
            best = max(best, len(adj[w] & ni) - len(adj[w] & ni & nj) - 1)
        degeneracy = best
    return EdgeProfile(
        i=i,
        j=j,
        d_i=len(ni),
        d_j=len(nj),
        triangles=triangles,
        squares_i=frozenset(squares_i),
        squares_j=frozenset(squares_j),
        degeneracy=degeneracy,
    )


def edge_profile(g: Graph, i: int, j: int) -> EdgeProfile:
    """Census of edge (i, j); raises ``ParameterError`` on a non-edge."""
    return profile_from_sets(neighbor_sets(g), i, j)


def balanced_forman_from_profile(p: EdgeProfile) -> float:
    if min(p.d_i, p.d_j) == 1:
        return 0.0
    d_max = max(p.d_i, p.d_j)
    d_min = min(p.d_i, p.d_j)
    t = len(p.triangles)
    value = 2.0 / p.d_i + 2.0 / p.d_j - 2.0 + 2.0 * t / d_max + t / d_min
    if p.squares_i:
        value += (len(p.squares_i) + len(p.squares_j)) / (p.degeneracy * d_max)
    return value


def balanced_forman(g: Graph, i: int, j: int) -> float:
    """Balanced Forman curvature of edge (i, j)."""
    return balanced_forman_from_profile(edge_profile(g, i, j))


def forman(g: Graph, i: int, j: int) -> float:
    """Augmented Forman curvature 4 - d_i - d_j + 3 * triangles."""
    p = edge_profile(g, i, j)
    return float(4 - p.d_i - p.d_j + 3 * len(p.triangles))


def jost_liu_lower_bound(g: Graph, i: int, j: int) -> float:
    """Jost-Liu lower bound on the alpha=0 Ollivier curvature."""
    p = edge_profile(g, i, j)
    d_lo, d_hi = sorted((p.d_i, p.d_j))
    t = len(p.triangles)
    base = 1.0 - 1.0 / d_lo - 1.0 / d_hi
    return -max(0.0, base - t / d_hi) - max(0.0, base - t / d_lo) + t / d_hi


def max_square_matching(g: Graph, i: int, j: int) -> int:
    """Largest one-to-one pairing between squares_i and squares_j along edges.

    A census node k on i's side may be paired with w on j's side only when
    k~w in the graph; computed by augmenting paths.
    """
    adj = neighbor_sets(g)
    p = profile_from_sets(adj, i, j)
    left = sorted(p.squares_i)
    right = sorted(p.squares_j)
    right_pos = {w: idx for idx, w in enumerate(right)}
    partners = [[right_pos[w] for w in sorted(adj[k] & p.squares_j)] for k in left]
    match_right: list[int | None] = [None] * len(right)

    def try_augment(u: int, visited: set[int]) -> bool:
        for rv in partners[u]:
            if rv in visited:
                continue
            visited.add(rv)
            if match_right[rv] is None or try_augment(match_right[rv], visited):
                match_right[rv] = u
                return True
        return False

    size = 0
    for u in range(len(left)):
        if try_augment(u, set()):
            size += 1
    return size


# ----------------------------------------------------------------------
# Whole-graph reports


@dataclass(frozen=True)
class CurvatureRecord:
    i: int
    j: int
    values: dict[str, float]


@dataclass(frozen=True)
class CurvatureSummary:
    kind: str
    minimum: float
    maximum: float
    mean: float
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    underflow: int
    overflow: int


@dataclass(frozen=True)
class CurvatureReport:
    """Per-edge curvature values plus per-kind summaries.

    Records appear once per undirected edge, sorted by (min endpoint, max
    endpoint); this fixed order makes report generation deterministic.
    """

    kinds: tuple[str, ...]
    records: tuple[CurvatureRecord, ...]
    summaries: tuple[CurvatureSummary, ...]

    def to_csv(self, out: TextIO, node_name: Callable[[int], str] | None = None) -> None:
        name = node_name or str
        out.write("i,j," + ",".join(self.kinds) + "\n")
        for rec in self.records:
            vals = ",".join(repr(rec.values[k]) for k in self.kinds)
            out.write(f"{name(rec.i)},{name(rec.j)},{vals}\n")

    def to_json_obj(self) -> dict:
        return {
            "kinds": list(self.kinds),
            "edges": [
                {"i": r.i, "j": r.j, **{k: r.values[k] for k in self.kinds}}
                for r in self.records
            ],
            "summary": {
                s.kind: {
                    "min": s.minimum,
                    "max": s.maximum,
                    "mean": s.mean,
                    "histogram": {
                        "bin_edges": list(s.bin_edges),
                        "counts": list(s.counts),
                        "underflow": s.underflow,
                        "overflow": s.overflow,
                    },
                }
                for s in self.summaries
            },
        }

    def to_json(self, out: TextIO, indent: int | None = 2) -> None:
        json.dump(self.to_json_obj(), out, indent=indent)
        out.write("\n")


def _summarize(kind: str, values: Sequence[float]) -> CurvatureSummary:
    width = (HISTOGRAM_HI - HISTOGRAM_LO) / HISTOGRAM_BINS
    edges = tuple(HISTOGRAM_LO + k * width for k in range(HISTOGRAM_BINS + 1))
    counts = [0] * HISTOGRAM_BINS
    underflow = overflow = 0
    for v in values:
        if v < HISTOGRAM_LO:
            underflow += 1
        elif v >= HISTOGRAM_HI:
            # Top edge is inclusive so the max cycle/complete values land inside.
            if v == HISTOGRAM_HI:
                counts[-1] += 1
            else:
                overflow += 1
        else:
            counts[int((v - HISTOGRAM_LO) / width)] += 1
    return CurvatureSummary(
        kind=kind,
        minimum=min(values),
        maximum=max(values),
        mean=sum(values) / len(values),
        bin_edges=edges,
        counts=tuple(counts),
        underflow=underflow,
        overflow=overflow,
    )


def _edge_values(g: Graph, kinds: Sequence[str], edges: Sequence[tuple[int, int]]):
    # Import here: transport depends on this module for the report plumbing.
    from .transport import ollivier_limit

    adj = neighbor_sets(g)
    rows = []
    for u, v in edges:
        prof = profile_from_sets(adj, u, v)
        values: dict[str, float] = {}
        for kind in kinds:
            if kind == "balanced_forman":
                values[kind] = balanced_forman_from_profile(prof)
            elif kind == "forman":
                values[kind] = float(4 - prof.d_i - prof.d_j + 3 * len(prof.triangles))
            elif kind == "jost_liu":
                values[kind] = jost_liu_lower_bound(g, u, v)
            elif kind == "ollivier":
                values[kind] = ollivier_limit(g, u, v)
            else:
                raise ParameterError(f"unknown curvature kind {kind!r}")
        rows.append(CurvatureRecord(u, v, values))
    return rows


def _edge_values_job(args) -> list[CurvatureRecord]:
    return _edge_values(*args)


def curvature_report(g: Graph, kinds: Iterable[str], jobs: int = 1) -> CurvatureReport:
    """Curvature of every edge for the requested kinds.

    ``jobs`` > 1 fans the per-edge work out over processes; the output is
    identical to a serial run because records are reassembled in edge order.
    """
    kind_list = tuple(kinds)
    for kind in kind_list:
        if kind not in CURVATURE_KINDS:
            raise ParameterError(f"unknown curvature kind {kind!r}")
    edge_list = list(g.edges())
    if jobs > 1 and len(edge_list) > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [edge_list[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_edge_values_job, [(g, kind_list, c) for c in chunks]))
        by_edge = {}
        for part in results:
            for rec in part:
                by_edge[(rec.i, rec.j)] = rec
        records = [by_edge[e] for e in edge_list]
    else:
        records = _edge_values(g, kind_list, edge_list)
    summaries = tuple(
        _summarize(kind, [r.values[kind] for r in records]) for kind in kind_list if records
    )
    return CurvatureReport(kind_list, tuple(records), summaries)
