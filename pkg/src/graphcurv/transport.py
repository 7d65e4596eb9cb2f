"""Exact Wasserstein-1 transport between local node measures and the
optimal-transport edge curvatures built on it.

The local measure at node i with idleness alpha puts mass alpha on i and
(1 - alpha)/d_i on each neighbor. The alpha-curvature of an edge i~j is
1 - W1 between the two local measures; the limit curvature is the value of
(1 - W1)/(1 - alpha) as alpha approaches 1. That map is piecewise linear,
bounded, and constant near 1, so it is evaluated at alpha = 1 - 1e-3 and
1 - 1e-4; the two probes must agree to 1e-6 or a ``ConsistencyError`` is
raised rather than returning a possibly-unconverged value.

W1 is solved exactly by successive shortest paths with node potentials on
the small bipartite transportation instance. Flow amounts are tracked in
``fractions.Fraction`` (every double is a dyadic rational, so conversion is
exact) which removes float-termination hazards; path selection uses integer
hop-distance costs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DataError, ParameterError
from .graph import Graph, bfs_distances

_SUM_TOL = 1e-12
_MARGINAL_TOL = 1e-9


@dataclass(frozen=True)
class LocalMeasure:
    """Probability measure with finite support on graph nodes."""

    support: tuple[int, ...]
    mass: tuple[float, ...]

    def __post_init__(self):
        if len(self.support) != len(self.mass):
            raise ParameterError("support and mass must have equal length")
        if len(set(self.support)) != len(self.support):
            raise ParameterError("support entries must be distinct")
        if any(m < 0 for m in self.mass):
            raise ParameterError("masses must be nonnegative")
        if abs(sum(self.mass) - 1.0) > _SUM_TOL:
            raise ParameterError(f"masses must sum to 1 (got {sum(self.mass)!r})")


@dataclass(frozen=True)
class TransportPlan:
    """Optimal coupling between two local measures.

    Row sums reproduce the source masses and column sums the target masses
    (to 1e-9); ``cost`` is the transported mass weighted by hop distance.
    """

    coupling: np.ndarray
    cost: float

    def validate_marginals(self, mu: LocalMeasure, nu: LocalMeasure) -> None:
        rows = self.coupling.sum(axis=1)
        cols = self.coupling.sum(axis=0)
        if np.max(np.abs(rows - np.array(mu.mass))) > _MARGINAL_TOL:
            raise ConsistencyError("transport plan row sums do not match source masses")
        if np.max(np.abs(cols - np.array(nu.mass))) > _MARGINAL_TOL:
            raise ConsistencyError("transport plan column sums do not match target masses")


def alpha_measure(g: Graph, i: int, alpha: float) -> LocalMeasure:
    """Idleness-alpha measure at node i: alpha at i, (1-alpha)/d_i per neighbor."""
    if not 0.0 <= alpha < 1.0:
        raise ParameterError("alpha must lie in [0, 1)")
    d = g.degree(i)
    if d == 0:
        raise DataError(f"node {i} is isolated; local measure undefined")
    support = (i,) + g.adjacency[i]
    mass = (alpha,) + ((1.0 - alpha) / d,) * d
    return LocalMeasure(support, mass)


def _solve_transportation(
    supply: Sequence[float], demand: Sequence[float], cost: Sequence[Sequence[int]]
) -> tuple[float, np.ndarray]:
    """Exact min-cost transportation via successive shortest paths.

    Costs are nonnegative integers. Node ids: sources 0..m-1, sinks m..m+q-1.
    Potentials keep reduced costs nonnegative so Dijkstra applies throughout.
    """
    m = len(supply)
    q = len(demand)
    remaining_supply = [Fraction(s) for s in supply]
    remaining_demand = [Fraction(d) for d in demand]
    flow = [[Fraction(0)] * q for _ in range(m)]
    potential = [0.0] * (m + q)

    total = sum(remaining_supply, Fraction(0))
    total_d = sum(remaining_demand, Fraction(0))
    if abs(float(total - total_d)) > 1e-9:
        raise ParameterError("supply and demand totals differ")
    if total != total_d:
        # Masses are doubles that each sum to ~1 but not to the same double;
        # rescale demand exactly so the balance condition holds in Fraction
        # arithmetic (relative distortion is at the last-ulp level).
        scale = total / total_d
        remaining_demand = [d * scale for d in remaining_demand]

    while True:
        active_sources = [s for s in range(m) if remaining_supply[s] > 0]
        if not active_sources:
            break
        # Multi-source Dijkstra on the residual network with reduced costs.
        dist = [math.inf] * (m + q)
        parent: list[int | None] = [None] * (m + q)
        heap: list[tuple[float, int]] = []
        for s in active_sources:
            dist[s] = 0.0
            heapq.heappush(heap, (0.0, s))
        while heap:
            d_u, u = heapq.heappop(heap)
            if d_u > dist[u] + 1e-15:
                continue
            if u < m:
                s = u
                for t in range(q):
                    c = cost[s][t]
                    rc = d_u + c + potential[s] - potential[m + t]
                    if rc < dist[m + t] - 1e-15:
                        dist[m + t] = rc
                        parent[m + t] = s
                        heapq.heappush(heap, (rc, m + t))
            else:
                t = u - m
                for s in range(m):
                    if flow[s][t] > 0:
                        c = -cost[s][t]
                        rc = d_u + c + potential[m + t] - potential[s]
                        if rc < dist[s] - 1e-15:
                            dist[s] = rc
                            parent[s] = m + t
                            heapq.heappush(heap, (rc, s))
        # Closest sink with unmet demand.
        best_t = None
        best_d = math.inf
        for t in range(q):
            if remaining_demand[t] > 0 and dist[m + t] < best_d:
                best_d = dist[m + t]
                best_t = t
        if best_t is None:
            raise ConsistencyError("transportation problem has residual demand but no path")
        # Trace back the augmenting path and its bottleneck.
        path: list[int] = [m + best_t]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        start = path[0]
        amount = min(remaining_supply[start], remaining_demand[best_t])
        for a, b in zip(path, path[1:]):
            if a < m:  # forward arc, unlimited capacity
                continue
            amount = min(amount, flow[b][a - m])
        if amount <= 0:
            raise ConsistencyError("degenerate augmentation in transport solver")
        for a, b in zip(path, path[1:]):
            if a < m:
                flow[a][b - m] += amount
            else:
                flow[b][a - m] -= amount
        remaining_supply[start] -= amount
        remaining_demand[best_t] -= amount
        # Johnson potential update keeps future reduced costs nonnegative.
        for u in range(m + q):
            if dist[u] < math.inf:
                potential[u] += dist[u]

    exact_cost = sum(
        flow[s][t] * cost[s][t] for s in range(m) for t in range(q) if flow[s][t] > 0
    )
    plan = np.array([[float(flow[s][t]) for t in range(q)] for s in range(m)])
    return float(exact_cost), plan


def wasserstein1(
    g: Graph, mu: LocalMeasure, nu: LocalMeasure, distance_cutoff: int | None = None
) -> tuple[float, TransportPlan]:
    """Exact W1 between two measures using hop distances as ground cost.

    ``distance_cutoff`` truncates the per-node BFS; measures arising from an
    edge's two endpoint balls never need distances beyond 3 hops. A needed
    pair at unreachable (or beyond-cutoff) distance raises ``DataError``.
    """
    for node in (*mu.support, *nu.support):
        if not 0 <= node < g.node_count:
            raise ParameterError(f"support node {node} out of range")
    dist_rows = []
    for s, s_mass in zip(mu.support, mu.mass):
        dist = bfs_distances(g, s, cutoff=distance_cutoff)
        row = []
        for t, t_mass in zip(nu.support, nu.mass):
            d = dist[t]
            if d == math.inf and s_mass > 0 and t_mass > 0:
                raise DataError(f"no finite distance between support nodes {s} and {t}")
            row.append(int(d) if d != math.inf else 0)
        dist_rows.append(row)
    cost, plan = _solve_transportation(mu.mass, nu.mass, dist_rows)
    transport_plan = TransportPlan(coupling=plan, cost=cost)
    transport_plan.validate_marginals(mu, nu)
    return cost, transport_plan


def ollivier_alpha(g: Graph, i: int, j: int, alpha: float) -> float:
    """1 - W1 between the idleness-alpha measures of the two endpoints."""
    if not g.has_edge(i, j):
        raise ParameterError(f"({i}, {j}) is not an edge")
    mu = alpha_measure(g, i, alpha)
    nu = alpha_measure(g, j, alpha)
    cost, _ = wasserstein1(g, mu, nu, distance_cutoff=3)
    return 1.0 - cost


_PROBE_ALPHAS = (1.0 - 1e-3, 1.0 - 1e-4)
_PROBE_TOL = 1e-6


def ollivier_limit(g: Graph, i: int, j: int) -> float:
    """Idleness-limit curvature: (1 - W1)/(1 - alpha) probed near alpha = 1.

    Evaluates at the two probe alphas and insists on agreement to 1e-6;
    disagreement means the terminal linear piece was not reached and raises
    ``ConsistencyError`` instead of returning a wrong value.
    """
    values = [ollivier_alpha(g, i, j, a) / (1.0 - a) for a in _PROBE_ALPHAS]
    if abs(values[0] - values[1]) > _PROBE_TOL:
        raise ConsistencyError(
            f"idleness-limit probes disagree on edge ({i}, {j}): "
            f"{values[0]!r} vs {values[1]!r}"
        )
    return values[1]
