"""Over-squashing diagnostics.

Message propagation in a depth-L message-passing network with bounded
update/message gradients is controlled by entries of powers of the
self-loop-augmented normalized adjacency: |dh_i(L)/dx_s| is at most
(c_phi * c_psi)^L times the (i, s) entry of the L-th power. This module
provides that bound, a fixed tanh-based reference network whose Jacobians
are measured by central finite differences, influence scores for
sum-aggregation networks, betweenness centrality with its bottleneck-value
reformulation, ball growth, and the per-edge checkers tying very negative
curvature to provable squashing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curvature import balanced_forman_from_profile, neighbor_sets, profile_from_sets
from .errors import ConsistencyError, DataError, ParameterError
from .graph import Graph, bfs_distances

_FD_STEP = 1e-5


@dataclass(frozen=True)
class MpnnSpec:
    """Reference scalar network: update c_phi*tanh(h + m), message c_psi*tanh(h + h').

    Both maps have every partial derivative bounded by c_phi and c_psi
    respectively (|tanh'| <= 1), so the Jacobian bound constants are known
    exactly. Without self-loops the forward pass degenerates to pure
    aggregation over row-normalized adjacency, c_phi*tanh(sum P_ij * c_psi*tanh(h_j)),
    which depends on x_s only through walks of length exactly L.
    """

    depth: int
    c_phi: float = 1.0
    c_psi: float = 1.0
    self_loops: bool = True

    def __post_init__(self):
        if self.depth < 0:
            raise ParameterError("depth must be nonnegative")
        if self.c_phi <= 0 or self.c_psi <= 0:
            raise ParameterError("gradient bounds must be positive")


def power_entry(g: Graph, r: int, i: int, s: int) -> float:
    """Entry (i, s) of the r-th power of the augmented normalized adjacency.

    Computed by repeatedly pushing the indicator row through the sparse
    adjacency; returns 0 when no walk exists.
    """
    if r < 0:
        raise ParameterError("power must be nonnegative")
    n = g.node_count
    inv_d1 = np.array([1.0 / (d + 1.0) for d in g.degrees()])
    w = np.sqrt(inv_d1)
    vec = np.zeros(n)
    vec[i] = 1.0
    for _ in range(r):
        scaled = w * vec
        nxt = np.zeros(n)
        for a in range(n):
            acc = 0.0
            for b in g.adjacency[a]:
                acc += scaled[b]
            nxt[a] = w[a] * acc + inv_d1[a] * vec[a]
        vec = nxt
    return float(vec[s])


def jacobian_upper_bound(
    g: Graph, r: int, i: int, s: int, c_phi: float = 1.0, c_psi: float = 1.0
) -> float:
    """(c_phi*c_psi)^(r+1) times the (r+1)-power entry: the propagation bound."""
    return (c_phi * c_psi) ** (r + 1) * power_entry(g, r + 1, i, s)


def _mpnn_forward(g: Graph, spec: MpnnSpec, x: np.ndarray) -> np.ndarray:
    n = g.node_count
    if spec.self_loops:
        weights = [
            [1.0 / math.sqrt((g.degree(a) + 1.0) * (g.degree(b) + 1.0)) for b in g.adjacency[a]]
            for a in range(n)
        ]
        self_w = np.array([1.0 / (d + 1.0) for d in g.degrees()])
        h = x.astype(float)
        for _ in range(spec.depth):
            msg = np.empty(n)
            for a in range(n):
                acc = self_w[a] * spec.c_psi * math.tanh(2.0 * h[a])
                for b, w_ab in zip(g.adjacency[a], weights[a]):
                    acc += w_ab * spec.c_psi * math.tanh(h[a] + h[b])
                msg[a] = acc
            h = spec.c_phi * np.tanh(h + msg)
        return h
    # Pure aggregation variant: row-normalized adjacency, no identity term.
    h = x.astype(float)
    degs = g.degrees()
    for _ in range(spec.depth):
        nxt = np.empty(n)
        for a in range(n):
            acc = 0.0
            for b in g.adjacency[a]:
                acc += spec.c_psi * math.tanh(h[b])
            nxt[a] = spec.c_phi * math.tanh(acc / degs[a]) if degs[a] else 0.0
        h = nxt
    return h


def mpnn_forward(g: Graph, spec: MpnnSpec, x: Sequence[float]) -> np.ndarray:
    """Forward pass of the reference network on scalar inputs ``x``."""
    arr = np.asarray(x, dtype=float)
    if arr.shape != (g.node_count,):
        raise ParameterError("input length must equal node_count")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("inputs must be finite")
    return _mpnn_forward(g, spec, arr)


def mpnn_jacobian(g: Graph, spec: MpnnSpec, x: Sequence[float], i: int, s: int) -> float:
    """Central finite difference of dh_i(depth)/dx_s with step 1e-5."""
    arr = np.asarray(x, dtype=float)
    if arr.shape != (g.node_count,):
        raise ParameterError("input length must equal node_count")
    hi = arr.copy()
    lo = arr.copy()
    hi[s] += _FD_STEP
    lo[s] -= _FD_STEP
    out_hi = _mpnn_forward(g, spec, hi)
    out_lo = _mpnn_forward(g, spec, lo)
    return float((out_hi[i] - out_lo[i]) / (2.0 * _FD_STEP))


def influence_score(g: Graph, r: int, i: int, s: int) -> float:
    """Relative influence of x_s on node i after r+1 sum-aggregation layers.

    Row i of (A+I)^(r+1) normalized by its total; exact integer arithmetic
    for graphs up to 64 nodes and powers up to 20, floating point beyond.
    """
    if r < 0:
        raise ParameterError("r must be nonnegative")
    n = g.node_count
    power = r + 1
    if n <= 64 and power <= 21:
        row = [0] * n
        row[i] = 1
        for _ in range(power):
            nxt = list(row)  # identity term of A + I
            for a in range(n):
                if row[a]:
                    for b in g.adjacency[a]:
                        nxt[b] += row[a]
            row = nxt
        denom = sum(row)
        return row[s] / denom
    mat = np.identity(n)
    for a in range(n):
        mat[a, list(g.adjacency[a])] = 1.0
    row_vec = np.linalg.matrix_power(mat, power)[i]
    return float(row_vec[s] / row_vec.sum())


def betweenness(g: Graph) -> list[float]:
    """Betweenness centrality over ordered node pairs, endpoints excluded.

    Brandes accumulation; with this convention the average centrality equals
    the average excess path length (see ``bottleneck_value``).
    """
    if not g.is_connected():
        raise DataError("betweenness requires a connected graph")
    n = g.node_count
    centrality = [0.0] * n
    for source in range(n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0.0] * n
        sigma[source] = 1.0
        dist = [-1] * n
        dist[source] = 0
        queue = [source]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            stack.append(v)
            for w in g.adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w])
            if w != source:
                centrality[w] += delta[w]
    # Brandes sums unordered dependencies once per source, which yields the
    # ordered-pair count directly (no halving).
    return centrality


def bottleneck_value(g: Graph) -> float:
    """Average betweenness, cross-checked against average excess distance.

    The two formulas (mean centrality and mean of d(i,j) - 1 over ordered
    pairs) must agree to 1e-9, otherwise a ``ConsistencyError`` is raised.
    Zero exactly for complete graphs.
    """
    n = g.node_count
    from_centrality = sum(betweenness(g)) / n
    excess = 0.0
    for i in range(n):
        dist = bfs_distances(g, i)
        for j in range(n):
            if j != i:
                if dist[j] == math.inf:
                    raise DataError("bottleneck value requires a connected graph")
                excess += dist[j] - 1.0
    from_distances = excess / n
    if abs(from_centrality - from_distances) > 1e-9:
        raise ConsistencyError(
            f"bottleneck identity mismatch: {from_centrality!r} vs {from_distances!r}"
        )
    return from_distances


def ball_growth(g: Graph, i: int, r_max: int) -> list[int]:
    """|B_r(i)| for r = 0..r_max; monotone nondecreasing by construction."""
    if r_max < 0:
        raise ParameterError("r_max must be nonnegative")
    dist = bfs_distances(g, i, cutoff=r_max)
    sizes = []
    for r in range(r_max + 1):
        sizes.append(sum(1 for d in dist if d <= r))
    return sizes


# ----------------------------------------------------------------------
# Edge checkers: curvature low enough forces measurable squashing.


@dataclass(frozen=True)
class EdgeCheckRecord:
    """Outcome of one per-edge checker.

    ``conditions`` maps hypothesis names to booleans; ``applicable`` is their
    conjunction. ``passes`` is None when not applicable, otherwise whether
    every asserted conclusion held. ``details`` carries the numeric values.
    """

    name: str
    i: int
    j: int
    delta: float
    conditions: dict[str, bool]
    applicable: bool
    passes: bool | None
    details: dict[str, float] = field(default_factory=dict)


def _far_side(adj, prof) -> set[int]:
    # Neighbors of the higher-degree endpoint outside {other endpoint},
    # triangles, and that side's square census.
    return set(adj[prof.j]) - {prof.i} - prof.triangles - prof.squares_j


def _oriented_profile(g: Graph, i: int, j: int):
    adj = neighbor_sets(g)
    if j not in adj[i]:
        raise ParameterError(f"({i}, {j}) is not an edge")
    if len(adj[i]) > len(adj[j]):
        i, j = j, i
    return adj, profile_from_sets(adj, i, j)


def squashing_check(g: Graph, i: int, j: int, delta: float) -> EdgeCheckRecord:
    """Squashing checker for one edge at a given margin ``delta``.

    Hypotheses: 0 < delta, delta^2 * max degree < 1, delta below the inverse
    4-cycle degeneracy (vacuous with no squares), and curvature at most
    -2 + delta. Conclusions asserted when all hold: the far side (neighbors
    of the higher-degree endpoint outside the edge's triangles and squares)
    has more than 1/delta nodes, at least (3/delta - 1) per triangle, and the mean
    two-step propagation weight from i into that side is at most
    3 * delta^(1/4).
    """
    adj, prof = _oriented_profile(g, i, j)
    ric = balanced_forman_from_profile(prof)
    d_hi = max(prof.d_i, prof.d_j)
    conditions = {
        "delta_positive": delta > 0,
        "delta_below_inverse_sqrt_degree": delta < d_hi ** -0.5,
        "delta_below_inverse_degeneracy": prof.degeneracy is None or delta < 1.0 / prof.degeneracy,
        "curvature_low_enough": ric <= -2.0 + delta,
    }
    applicable = all(conditions.values())
    q = _far_side(adj, prof)
    details: dict[str, float] = {
        "curvature": ric,
        "far_side_size": float(len(q)),
        "triangle_count": float(len(prof.triangles)),
    }
    passes: bool | None = None
    if applicable:
        mean_entry = (
            sum(power_entry(g, 2, prof.i, k) for k in sorted(q)) / len(q) if q else 0.0
        )
        details["far_side_lower_bound"] = 1.0 / delta
        details["ratio"] = len(q) / (len(prof.triangles) + 1.0)
        details["ratio_lower_bound"] = 3.0 / delta - 1.0
        details["mean_power_entry"] = mean_entry
        details["mean_upper_bound"] = 3.0 * delta ** 0.25
        passes = (
            len(q) > 1.0 / delta
            and details["ratio"] >= details["ratio_lower_bound"]
            and mean_entry <= details["mean_upper_bound"]
        )
    return EdgeCheckRecord(
        name="squashing_bound",
        i=prof.i,
        j=prof.j,
        delta=delta,
        conditions=conditions,
        applicable=applicable,
        passes=passes,
        details=details,
    )


@dataclass(frozen=True)
class BottleneckReport:
    """Betweenness profile plus the per-edge checker outcomes for a graph."""

    node_betweenness: tuple[float, ...]
    bottleneck: float
    squashing_checks: tuple[EdgeCheckRecord, ...]
    betweenness_checks: tuple[EdgeCheckRecord, ...]

    def __post_init__(self):
        if any(b < 0 for b in self.node_betweenness):
            raise ParameterError("betweenness values must be nonnegative")
        if self.bottleneck < 0:
            raise ParameterError("bottleneck value must be nonnegative")

    def to_json_obj(self) -> dict:
        def record_obj(rec: EdgeCheckRecord) -> dict:
            return {
                "i": rec.i,
                "j": rec.j,
                "delta": rec.delta,
                "conditions": rec.conditions,
                "applicable": rec.applicable,
                "passes": rec.passes,
                "details": rec.details,
            }

        return {
            "betweenness": list(self.node_betweenness),
            "bottleneck_value": self.bottleneck,
            "squashing_checks": [record_obj(r) for r in self.squashing_checks],
            "betweenness_checks": [record_obj(r) for r in self.betweenness_checks],
        }


def bottleneck_report(g: Graph, delta: float | None = None) -> BottleneckReport:
    """Run both edge checkers over every edge of a connected graph.

    With ``delta`` unset each edge uses its own tight margin, curvature + 2,
    the smallest value satisfying the curvature hypothesis.
    """
    central = betweenness(g)
    adj = neighbor_sets(g)
    squash = []
    omega = []
    for u, v in g.edges():
        ric = balanced_forman_from_profile(profile_from_sets(adj, u, v))
        margin = delta if delta is not None else ric + 2.0
        squash.append(squashing_check(g, u, v, margin))
        omega.append(betweenness_concentration_check(g, u, v, margin, centrality=central))
    return BottleneckReport(
        node_betweenness=tuple(central),
        bottleneck=bottleneck_value(g),
        squashing_checks=tuple(squash),
        betweenness_checks=tuple(omega),
    )


def betweenness_concentration_check(
    g: Graph, i: int, j: int, delta: float, centrality: Sequence[float] | None = None
) -> EdgeCheckRecord:
    """Mean betweenness over the shared neighborhood of a very negative edge.

    With curvature at most -2 + delta and delta below 1/(1 + degeneracy)
    (degeneracy taken as 0 with no squares), the common neighbors together
    with the far endpoint must average betweenness at least 1/delta.
    """
    adj, prof = _oriented_profile(g, i, j)
    ric = balanced_forman_from_profile(prof)
    gamma = prof.degeneracy if prof.degeneracy is not None else 0
    conditions = {
        "delta_positive": delta > 0,
        "delta_below_inverse_one_plus_degeneracy": delta < 1.0 / (1 + gamma),
        "curvature_low_enough": ric <= -2.0 + delta,
    }
    applicable = all(conditions.values())
    omega = sorted(prof.triangles | {prof.j})
    details: dict[str, float] = {"curvature": ric, "shared_size": float(len(omega))}
    passes: bool | None = None
    if applicable:
        b = list(centrality) if centrality is not None else betweenness(g)
        mean_b = sum(b[k] for k in omega) / len(omega)
        details["mean_betweenness"] = mean_b
        details["betweenness_lower_bound"] = 1.0 / delta
        passes = mean_b >= 1.0 / delta
    return EdgeCheckRecord(
        name="betweenness_bound",
        i=prof.i,
        j=prof.j,
        delta=delta,
        conditions=conditions,
        applicable=applicable,
        passes=passes,
        details=details,
    )
