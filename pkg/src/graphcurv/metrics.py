"""Graph-comparison metrics: degree-distribution transport distance, edge
edit percentages, and the homophily index."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TextIO

from .errors import DataError, ParameterError
from .graph import Graph, NodeLabeling


def degree_w1(g1: Graph, g2: Graph) -> float:
    """Exact 1-D Wasserstein-1 between the two empirical degree distributions.

    Computed as the integral of the absolute CDF difference over the degree
    axis; node counts may differ. For equal counts this reduces to the mean
    absolute difference of sorted degree sequences.
    """
    if g1.node_count == 0 or g2.node_count == 0:
        raise DataError("degree distance undefined for empty graphs")
    d1 = sorted(g1.degrees())
    d2 = sorted(g2.degrees())
    top = max(d1[-1], d2[-1])
    total = 0.0
    count1 = count2 = 0
    idx1 = idx2 = 0
    for t in range(top):
        while idx1 < len(d1) and d1[idx1] <= t:
            count1 += 1
            idx1 += 1
        while idx2 < len(d2) and d2[idx2] <= t:
            count2 += 1
            idx2 += 1
        total += abs(count1 / len(d1) - count2 / len(d2))
    return total


def _new_to_orig_map(g_orig: Graph, g_new: Graph) -> list[int]:
    """Index map aligning ``g_new`` onto ``g_orig`` by node name.

    Unnamed graphs align positionally. Node sets must coincide.
    """
    if g_orig.node_count != g_new.node_count:
        raise ParameterError("graphs are over different node sets (counts differ)")
    if g_orig.node_names is None or g_new.node_names is None:
        return list(range(g_new.node_count))
    by_name = {name: i for i, name in enumerate(g_orig.node_names)}
    if set(g_new.node_names) != set(by_name):
        raise ParameterError("graphs are over different node sets (names differ)")
    return [by_name[name] for name in g_new.node_names]


def edit_stats(g_orig: Graph, g_new: Graph) -> tuple[float, float]:
    """Edges added and removed as percentages of the original edge count.

    The graphs must cover the same node set; named graphs are aligned by
    name, so file ordering does not matter.
    """
    remap = _new_to_orig_map(g_orig, g_new)
    orig = set(g_orig.edges())
    new = set()
    for u, v in g_new.edges():
        a, b = remap[u], remap[v]
        new.add((a, b) if a <= b else (b, a))
    if not orig:
        raise DataError("edit stats undefined for an edgeless original graph")
    pct_added = 100.0 * len(new - orig) / len(orig)
    pct_removed = 100.0 * len(orig - new) / len(orig)
    return pct_added, pct_removed


def homophily(g: Graph, labeling: NodeLabeling, skip_isolated: bool = False) -> float:
    """Mean fraction of same-label neighbors per node, in [0, 1].

    Isolated nodes have no defined ratio: they raise ``DataError`` unless
    ``skip_isolated`` is set, in which case they are excluded from the mean.
    """
    if len(labeling.labels) != g.node_count:
        raise ParameterError("labeling length must equal node_count")
    total = 0.0
    counted = 0
    for v in range(g.node_count):
        nbrs = g.adjacency[v]
        if not nbrs:
            if skip_isolated:
                continue
            raise DataError(f"node {v} is isolated; pass skip_isolated to exclude it")
        same = sum(1 for u in nbrs if labeling.labels[u] == labeling.labels[v])
        total += same / len(nbrs)
        counted += 1
    if counted == 0:
        raise DataError("all nodes isolated; homophily undefined")
    return total / counted


@dataclass(frozen=True)
class ComparisonReport:
    """Distance and edit metrics between an original and a rewired graph."""

    w1_degree: float
    pct_added: float
    pct_removed: float
    homophily_before: float | None = None
    homophily_after: float | None = None

    def to_json_obj(self) -> dict:
        obj = {
            "w1_degree": self.w1_degree,
            "pct_added": self.pct_added,
            "pct_removed": self.pct_removed,
        }
        if self.homophily_before is not None:
            obj["homophily_before"] = self.homophily_before
        if self.homophily_after is not None:
            obj["homophily_after"] = self.homophily_after
        return obj

    def to_json(self, out: TextIO, indent: int | None = 2) -> None:
        json.dump(self.to_json_obj(), out, indent=indent)
        out.write("\n")

    def summary_lines(self) -> tuple[str, str]:
        first = (
            f"degree W1 {self.w1_degree:.4f}, "
            f"{self.pct_added:.1f}% edges added, {self.pct_removed:.1f}% removed"
        )
        if self.homophily_before is not None and self.homophily_after is not None:
            second = (
                f"homophily {self.homophily_before:.4f} -> {self.homophily_after:.4f}"
            )
        else:
            second = "homophily not evaluated (no labels)"
        return first, second


def compare(
    g_orig: Graph, g_new: Graph, labeling: NodeLabeling | None = None
) -> ComparisonReport:
    """Comparison metrics; ``labeling`` is indexed against ``g_orig``."""
    pct_added, pct_removed = edit_stats(g_orig, g_new)
    before = after = None
    if labeling is not None:
        remap = _new_to_orig_map(g_orig, g_new)
        relabeled = NodeLabeling(
            tuple(labeling.labels[remap[i]] for i in range(g_new.node_count)),
            labeling.label_names,
        )
        before = homophily(g_orig, labeling, skip_isolated=True)
        after = homophily(g_new, relabeled, skip_isolated=True)
    return ComparisonReport(
        w1_degree=degree_w1(g_orig, g_new),
        pct_added=pct_added,
        pct_removed=pct_removed,
        homophily_before=before,
        homophily_after=after,
    )
