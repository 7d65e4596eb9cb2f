"""Graph rewiring engines.

Stochastic discrete Ricci flow repeatedly supports the most negatively
curved edge: candidate additions k~l with k in the closed neighborhood of
one endpoint and l of the other are scored by how much they would raise
that edge's curvature, one is drawn through a temperature-controlled
softmax (infinite temperature degenerates to argmax), and afterwards the
globally most positive edge is removed if it exceeds the configured cap.
Edits therefore stay local to bad edges and the edit distance is at most
two per iteration.

Diffusion rewiring replaces the adjacency with the personalized-PageRank
matrix, sparsified per row by top-k or by a global threshold, optionally
symmetrized as (M + M^T)/2.

Curvature bookkeeping during a flow run is incremental: after an edit only
edges with an endpoint within two hops of the edited pair are rescored,
which is a superset of the edges whose neighborhood census can change.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .curvature import (
    balanced_forman_from_profile,
    neighbor_sets,
    profile_from_sets,
)
from .errors import ParameterError
from .graph import Graph, canonical_edge
from .rng import SplitMix64
from .spectral import ppr_matrix

SDRF_KINDS = ("balanced_forman", "forman", "jost_liu")


@dataclass(frozen=True)
class SdrfConfig:
    """Knobs for a flow run; defaults give the fully deterministic variant."""

    tau: float = math.inf
    max_iterations: int = 100
    c_plus: float = math.inf
    convergence_floor: float = 0.0
    seed: int = 0
    curvature_kind: str = "balanced_forman"

    def __post_init__(self):
        if not self.tau > 0:
            raise ParameterError("tau must be positive (math.inf allowed)")
        if self.max_iterations < 0:
            raise ParameterError("max_iterations must be nonnegative")
        if self.curvature_kind not in SDRF_KINDS:
            raise ParameterError(
                f"curvature_kind must be one of {SDRF_KINDS}, got {self.curvature_kind!r}"
            )


@dataclass(frozen=True)
class RewireEvent:
    iteration: int
    target_edge: tuple[int, int]
    min_curvature_before: float
    added_edge: tuple[int, int]
    sampled_probability: float
    removed_edge: tuple[int, int] | None = None
    removed_curvature: float | None = None

    def to_json_obj(self) -> dict:
        obj = {
            "iteration": self.iteration,
            "target_edge": list(self.target_edge),
            "min_curvature_before": self.min_curvature_before,
            "added_edge": list(self.added_edge),
            "sampled_probability": self.sampled_probability,
        }
        if self.removed_edge is not None:
            obj["removed_edge"] = list(self.removed_edge)
            obj["removed_curvature"] = self.removed_curvature
        return obj


@dataclass(frozen=True)
class RewireTrace:
    """Ordered edit log of one flow run."""

    events: tuple[RewireEvent, ...]
    termination_reason: str  # "converged" | "max_iterations"

    def to_jsonl(self, out: TextIO) -> None:
        for event in self.events:
            json.dump(event.to_json_obj(), out, separators=(",", ":"))
            out.write("\n")
        json.dump({"termination_reason": self.termination_reason}, out, separators=(",", ":"))
        out.write("\n")


@dataclass(frozen=True)
class WeightedGraph:
    """Weighted adjacency entries; symmetric graphs store each pair once."""

    node_count: int
    entries: tuple[tuple[int, int, float], ...]
    symmetric: bool
    node_names: tuple[str, ...] | None = None

    def __post_init__(self):
        for u, v, w in self.entries:
            if not (w > 0 and math.isfinite(w)):
                raise ParameterError(f"entry ({u}, {v}) must have positive finite weight")

    def name_of(self, i: int) -> str:
        return self.node_names[i] if self.node_names is not None else str(i)

    def binarize(self) -> Graph:
        """Unweighted symmetric support graph."""
        return Graph.from_edges(
            self.node_count, [(u, v) for u, v, _ in self.entries if u != v], self.node_names
        )

    def save(self, target: str | TextIO) -> None:
        """Write ``u v w`` lines in entry order (sorted by construction)."""
        if isinstance(target, str):
            with open(target, "w", encoding="utf-8") as fh:
                self.save(fh)
            return
        for u, v, w in self.entries:
            target.write(f"{self.name_of(u)} {self.name_of(v)} {w!r}\n")


# ----------------------------------------------------------------------
# Incremental curvature bookkeeping


def _curvature_from_sets(adj, i: int, j: int, kind: str) -> float:
    prof = profile_from_sets(adj, i, j)
    if kind == "balanced_forman":
        return balanced_forman_from_profile(prof)
    if kind == "forman":
        return float(4 - prof.d_i - prof.d_j + 3 * len(prof.triangles))
    if kind == "jost_liu":
        d_lo, d_hi = sorted((prof.d_i, prof.d_j))
        t = len(prof.triangles)
        base = 1.0 - 1.0 / d_lo - 1.0 / d_hi
        return -max(0.0, base - t / d_hi) - max(0.0, base - t / d_lo) + t / d_hi
    raise ParameterError(f"unsupported flow curvature kind {kind!r}")


class CurvatureIndex:
    """Mutable adjacency plus an edge-to-curvature map kept current.

    ``add_edge``/``remove_edge`` commit an edit and rescore exactly the edges
    with an endpoint within two hops of the edited pair; equality with a full
    recomputation is exercised in the test suite.
    """

    def __init__(self, g: Graph, kind: str = "balanced_forman"):
        if kind not in SDRF_KINDS:
            raise ParameterError(f"unsupported flow curvature kind {kind!r}")
        self.kind = kind
        self.adj: list[set[int]] = neighbor_sets(g)
        self.curvatures: dict[tuple[int, int], float] = {}
        for u, v in g.edges():
            self.curvatures[(u, v)] = _curvature_from_sets(self.adj, u, v, kind)

    def graph(self, template: Graph | None = None) -> Graph:
        names = template.node_names if template is not None else None
        return Graph(
            len(self.adj), tuple(tuple(sorted(s)) for s in self.adj), names
        )

    def min_edge(self) -> tuple[tuple[int, int], float]:
        return min(self.curvatures.items(), key=lambda item: (item[1], item[0]))

    def max_edge(self) -> tuple[tuple[int, int], float]:
        return max(
            self.curvatures.items(),
            key=lambda item: (item[1], -item[0][0], -item[0][1]),
        )

    def curvature_with_extra_edge(self, i: int, j: int, k: int, l: int) -> float:
        """Curvature of (i, j) if (k, l) were present; the edit is not kept."""
        self.adj[k].add(l)
        self.adj[l].add(k)
        try:
            return _curvature_from_sets(self.adj, i, j, self.kind)
        finally:
            self.adj[k].discard(l)
            self.adj[l].discard(k)

    def add_edge(self, k: int, l: int) -> None:
        if l in self.adj[k]:
            raise ParameterError(f"edge ({k}, {l}) already present")
        self.adj[k].add(l)
        self.adj[l].add(k)
        self.curvatures[canonical_edge(k, l)] = _curvature_from_sets(
            self.adj, *canonical_edge(k, l), self.kind
        )
        self._rescore_near(k, l)

    def remove_edge(self, k: int, l: int) -> None:
        if l not in self.adj[k]:
            raise ParameterError(f"edge ({k}, {l}) not present")
        self.adj[k].discard(l)
        self.adj[l].discard(k)
        del self.curvatures[canonical_edge(k, l)]
        self._rescore_near(k, l)

    def _rescore_near(self, k: int, l: int) -> None:
        near = self._two_ball(k) | self._two_ball(l)
        for a in near:
            for b in self.adj[a]:
                key = canonical_edge(a, b)
                self.curvatures[key] = _curvature_from_sets(self.adj, *key, self.kind)

    def _two_ball(self, center: int) -> set[int]:
        ball = {center}
        for u in self.adj[center]:
            ball.add(u)
            ball.update(self.adj[u])
        return ball


# ----------------------------------------------------------------------
# Flow steps


def candidate_improvements(
    g: Graph, i: int, j: int, kind: str = "balanced_forman"
) -> list[tuple[tuple[int, int], float]]:
    """Curvature gain on (i, j) for each addable pair k~l near the edge.

    Candidates are unordered non-edges {k, l} with k in B1(i), l in B1(j),
    sorted by (min, max); the score is curvature after minus before.
    """
    index = CurvatureIndex(g, kind)
    return _candidates_from_index(index, i, j)


def _candidates_from_index(
    index: CurvatureIndex, i: int, j: int
) -> list[tuple[tuple[int, int], float]]:
    adj = index.adj
    if j not in adj[i]:
        raise ParameterError(f"({i}, {j}) is not an edge")
    base = index.curvatures[canonical_edge(i, j)]
    ball_i = adj[i] | {i}
    ball_j = adj[j] | {j}
    pairs = set()
    for k in ball_i:
        for l in ball_j:
            if k != l and l not in adj[k]:
                pairs.add(canonical_edge(k, l))
    results = []
    for k, l in sorted(pairs):
        gained = index.curvature_with_extra_edge(i, j, k, l) - base
        results.append(((k, l), gained))
    return results


def softmax_probabilities(x: Sequence[float], tau: float) -> list[float]:
    """Temperature softmax; infinite temperature is a point mass on the argmax
    (first occurrence)."""
    if len(x) == 0:
        raise ParameterError("softmax over an empty list")
    if not tau > 0:
        raise ParameterError("tau must be positive")
    if math.isinf(tau):
        probs = [0.0] * len(x)
        probs[x.index(max(x))] = 1.0
        return probs
    peak = max(tau * v for v in x)
    weights = [math.exp(tau * v - peak) for v in x]
    total = sum(weights)
    return [w / total for w in weights]


def softmax_sample(x: Sequence[float], tau: float, rng: SplitMix64) -> int:
    """Draw an index with probability softmax(tau * x); deterministic at tau=inf."""
    probs = softmax_probabilities(x, tau)
    if math.isinf(tau):
        return probs.index(1.0)
    u = rng.uniform()
    acc = 0.0
    for idx, p in enumerate(probs):
        acc += p
        if u < acc:
            return idx
    return len(probs) - 1


def sdrf(g: Graph, cfg: SdrfConfig = SdrfConfig()) -> tuple[Graph, RewireTrace]:
    """Stochastic discrete Ricci flow.

    Per iteration: locate the minimum-curvature edge (lexicographic
    tie-break); stop converged once that minimum clears the floor or no
    improving addition exists under infinite temperature; otherwise sample
    an addition, then drop the maximum-curvature edge if it exceeds c_plus
    (the removal may take back the edge just added). Runs are reproducible
    from the seed, and seed-independent at tau=inf where sampling is argmax.
    """
    if g.edge_count < 1:
        raise ParameterError("flow rewiring needs at least one edge")
    index = CurvatureIndex(g, cfg.curvature_kind)
    rng = SplitMix64(cfg.seed)
    events: list[RewireEvent] = []
    reason = "max_iterations"
    for iteration in range(cfg.max_iterations):
        (u, v), minimum = index.min_edge()
        if minimum > cfg.convergence_floor:
            reason = "converged"
            break
        candidates = _candidates_from_index(index, u, v)
        if not candidates:
            reason = "converged"
            break
        gains = [gain for _, gain in candidates]
        if math.isinf(cfg.tau) and max(gains) <= 0:
            reason = "converged"
            break
        probs = softmax_probabilities(gains, cfg.tau)
        if math.isinf(cfg.tau):
            choice = probs.index(1.0)
        else:
            choice = softmax_sample(gains, cfg.tau, rng)
        added = candidates[choice][0]
        index.add_edge(*added)
        removed = None
        removed_curv = None
        (a, b), maximum = index.max_edge()
        if maximum > cfg.c_plus:
            index.remove_edge(a, b)
            removed = (a, b)
            removed_curv = maximum
        events.append(
            RewireEvent(
                iteration=iteration,
                target_edge=(u, v),
                min_curvature_before=minimum,
                added_edge=added,
                sampled_probability=probs[choice],
                removed_edge=removed,
                removed_curvature=removed_curv,
            )
        )
    return index.graph(g), RewireTrace(tuple(events), reason)


# ----------------------------------------------------------------------
# Diffusion rewiring


def digl_rewire(
    g: Graph,
    alpha: float,
    top_k: int | None = None,
    epsilon: float | None = None,
    symmetrize: bool = False,
) -> WeightedGraph:
    """Replace the adjacency with the sparsified PageRank matrix.

    Exactly one of ``top_k`` (keep the k largest entries per row, ties by
    value then smaller column) or ``epsilon`` (keep entries >= epsilon) must
    be given. The diagonal is zeroed first; with ``symmetrize`` the output is
    the support of (M + M^T)/2 with those averaged weights.
    """
    if (top_k is None) == (epsilon is None):
        raise ParameterError("exactly one of top_k and epsilon must be given")
    n = g.node_count
    if top_k is not None and not 0 < top_k < n:
        raise ParameterError(f"top_k must lie in [1, n-1], got {top_k}")
    if epsilon is not None and epsilon <= 0:
        raise ParameterError("epsilon must be positive")
    r = ppr_matrix(g, alpha)
    np.fill_diagonal(r, 0.0)
    kept = np.zeros_like(r)
    if top_k is not None:
        for row in range(n):
            order = sorted(range(n), key=lambda col: (-r[row, col], col))
            for col in order[:top_k]:
                kept[row, col] = r[row, col]
    else:
        kept = np.where(r >= epsilon, r, 0.0)
    if symmetrize:
        kept = (kept + kept.T) / 2.0
        entries = [
            (u, v, float(kept[u, v]))
            for u in range(n)
            for v in range(u + 1, n)
            if kept[u, v] > 0
        ]
        return WeightedGraph(n, tuple(entries), symmetric=True, node_names=g.node_names)
    entries = [
        (u, v, float(kept[u, v])) for u in range(n) for v in range(n) if kept[u, v] > 0
    ]
    return WeightedGraph(n, tuple(entries), symmetric=False, node_names=g.node_names)


def load_weighted_edge_list(source: str | TextIO, symmetric: bool = True) -> WeightedGraph:
    """Read ``u v w`` lines; used by analysis commands on rewired outputs."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return load_weighted_edge_list(fh, symmetric)
    from .errors import DataError

    index: dict[str, int] = {}
    names: list[str] = []
    entries: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise DataError(f"line {lineno}: expected 3 tokens, found {len(tokens)}")
        u_tok, v_tok, w_tok = tokens
        try:
            w = float(w_tok)
        except ValueError as exc:
            raise DataError(f"line {lineno}: bad weight {w_tok!r}") from exc
        for tok in (u_tok, v_tok):
            if tok not in index:
                index[tok] = len(names)
                names.append(tok)
        entries.append((index[u_tok], index[v_tok], w))
    if not entries:
        raise DataError("empty weighted edge list")
    return WeightedGraph(len(names), tuple(entries), symmetric=symmetric, node_names=tuple(names))
