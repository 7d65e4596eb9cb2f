"""Normalized Laplacian spectrum, Cheeger constants, and diffusion bounds.

The Cheeger constant is the minimum over nonempty proper node subsets of
boundary edges divided by the smaller side's volume. Small graphs are solved
exhaustively (every unordered partition once, vectorized over bitmask
chunks); larger graphs fall back to a Fiedler-vector sweep cut, which always
yields an upper bound. Personalized-PageRank rewiring cannot improve a cut's
conductance beyond a degree-dependent multiple of the original, and the
out-of-set PageRank mass concentrates on a small-volume subset; both facts
have checkers here that report (lhs, rhs, holds) records.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import ConsistencyError, DataError, ParameterError
from .graph import Graph

EXHAUSTIVE_CHEEGER_LIMIT = 24


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool

    def to_json_obj(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


@dataclass(frozen=True)
class SpectralReport:
    """Spectral gap, Cheeger value with witness cut, and bound checks."""

    lambda1: float
    cheeger: float
    cheeger_witness: tuple[int, ...]
    method: str  # "exact" | "sweep"
    bound_checks: tuple[BoundCheck, ...] = ()

    def to_json_obj(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "cheeger": self.cheeger,
            "cheeger_witness": list(self.cheeger_witness),
            "method": self.method,
            "bound_checks": [c.to_json_obj() for c in self.bound_checks],
        }

    def to_json(self, out: TextIO, indent: int | None = 2) -> None:
        json.dump(self.to_json_obj(), out, indent=indent)
        out.write("\n")


def normalized_laplacian(g: Graph) -> np.ndarray:
    """I - D^(-1/2) A D^(-1/2); rows/cols of isolated nodes are identity."""
    n = g.node_count
    lap = np.identity(n)
    w = [1.0 / math.sqrt(d) if d else 0.0 for d in g.degrees()]
    for i in range(n):
        for j in g.adjacency[i]:
            lap[i, j] = -w[i] * w[j]
    return lap


def spectral_gap(g: Graph) -> float:
    """Smallest nonzero eigenvalue of the normalized Laplacian.

    Requires a connected graph on at least two nodes; the zero mode is the
    minimum eigenvalue and must be within 1e-8 of zero.
    """
    if g.node_count < 2:
        raise ParameterError("spectral gap needs at least 2 nodes")
    if not g.is_connected():
        raise DataError("spectral gap requires a connected graph")
    eigenvalues = np.linalg.eigvalsh(normalized_laplacian(g))
    if abs(eigenvalues[0]) > 1e-8:
        raise ConsistencyError(f"zero mode missing: smallest eigenvalue {eigenvalues[0]!r}")
    if eigenvalues[1] < 1e-8:
        raise DataError("zero eigenvalue multiplicity > 1: graph is disconnected")
    return float(eigenvalues[1])


def _cut_fraction(g: Graph, members: Iterable[int]) -> tuple[int, int, int]:
    """(boundary, vol(S), vol(complement)) for a node subset."""
    inside = set(members)
    boundary = 0
    vol_s = 0
    total_vol = 2 * g.edge_count
    for u in inside:
        vol_s += g.degree(u)
        for v in g.adjacency[u]:
            if v not in inside:
                boundary += 1
    return boundary, vol_s, total_vol - vol_s


def cheeger_exact(g: Graph, limit: int = EXHAUSTIVE_CHEEGER_LIMIT) -> tuple[float, tuple[int, ...]]:
    """Exhaustive Cheeger constant with a witness cut.

    Enumerates the 2^(n-1) - 1 unordered partitions (subsets containing
    node 0, excluding the full set) in vectorized bitmask chunks. Among all
    exact minimizers the lexicographically smallest node tuple is returned.
    Refuses graphs beyond ``limit`` nodes; use ``cheeger_sweep`` there.
    """
    n = g.node_count
    if not g.is_connected():
        raise DataError("cheeger constant requires a connected graph")
    if n < 2:
        raise ParameterError("cheeger constant needs at least 2 nodes")
    if n > limit:
        raise ParameterError(
            f"exhaustive cheeger limited to {limit} nodes (got {n}); use cheeger_sweep"
        )
    degrees = np.array(g.degrees(), dtype=np.int64)
    total_vol = int(degrees.sum())
    edge_list = list(g.edges())
    # Subsets containing node 0: odd masks. Iterate chunks of candidate masks.
    best_num = None
    best_den = None
    best_witness: tuple[int, ...] | None = None
    span = 1 << (n - 1)
    chunk = 1 << 20
    for start in range(0, span, chunk):
        stop = min(start + chunk, span)
        half = np.arange(start, stop, dtype=np.int64)
        masks = (half << 1) | 1
        if stop == span:
            masks = masks[:-1]  # drop the full set
        if masks.size == 0:
            continue
        # One uint8 membership slab per node keeps the edge loop in cheap
        # byte-wide vector ops.
        bits = [((masks >> u) & 1).astype(np.uint8) for u in range(n)]
        boundary = np.zeros(masks.shape, dtype=np.int32)
        for u, v in edge_list:
            boundary += bits[u] ^ bits[v]
        vol = np.zeros(masks.shape, dtype=np.int64)
        for u in range(n):
            if degrees[u]:
                vol += bits[u].astype(np.int64) * degrees[u]
        den = np.minimum(vol, total_vol - vol)
        ratio = boundary / den
        chunk_min = ratio.min()
        if best_num is not None and chunk_min > best_num / best_den + 1e-12:
            continue
        for idx in np.nonzero(ratio <= chunk_min + 1e-12)[0]:
            num_i = int(boundary[idx])
            den_i = int(den[idx])
            if best_num is None or num_i * best_den < best_num * den_i:
                best_num, best_den = num_i, den_i
                best_witness = _mask_to_tuple(int(masks[idx]), n)
            elif num_i * best_den == best_num * den_i:
                cand = _mask_to_tuple(int(masks[idx]), n)
                if cand < best_witness:
                    best_witness = cand
    return best_num / best_den, best_witness


def _mask_to_tuple(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i for i in range(n) if (mask >> i) & 1)


def cheeger_sweep(g: Graph) -> tuple[float, tuple[int, ...]]:
    """Fiedler-vector sweep cut: an upper bound on the Cheeger constant.

    Nodes are ordered by the degree-rescaled Fiedler vector (ties broken by
    index) and all prefix cuts are scored; the best prefix wins.
    """
    n = g.node_count
    if not g.is_connected():
        raise DataError("cheeger sweep requires a connected graph")
    if n < 2:
        raise ParameterError("cheeger sweep needs at least 2 nodes")
    _, vectors = np.linalg.eigh(normalized_laplacian(g))
    fiedler = vectors[:, 1]
    scale = np.array([1.0 / math.sqrt(d) if d else 0.0 for d in g.degrees()])
    order = sorted(range(n), key=lambda i: (fiedler[i] * scale[i], i))
    degrees = g.degrees()
    total_vol = 2 * g.edge_count
    inside: set[int] = set()
    boundary = 0
    vol = 0
    best = math.inf
    best_prefix = 1
    for k, u in enumerate(order[:-1], start=1):
        for v in g.adjacency[u]:
            boundary += -1 if v in inside else 1
        inside.add(u)
        vol += degrees[u]
        h = boundary / min(vol, total_vol - vol)
        if h < best - 1e-15:
            best = h
            best_prefix = k
    witness = tuple(sorted(order[:best_prefix]))
    return best, witness


def cheeger(g: Graph, limit: int = EXHAUSTIVE_CHEEGER_LIMIT) -> tuple[float, tuple[int, ...], str]:
    """Exact Cheeger when feasible, sweep upper bound otherwise."""
    if g.node_count <= limit:
        h, witness = cheeger_exact(g, limit)
        return h, witness, "exact"
    h, witness = cheeger_sweep(g)
    return h, witness, "sweep"


# ----------------------------------------------------------------------
# Personalized PageRank and diffusion-rewiring bounds


def ppr_matrix(g: Graph, alpha: float) -> np.ndarray:
    """Dense PageRank matrix alpha * (I - (1-alpha) D^-1 A)^-1.

    Rows are probability distributions (checked to 1e-9). Needs alpha in
    (0, 1] and no isolated nodes.
    """
    if not 0.0 < alpha <= 1.0:
        raise ParameterError("ppr needs alpha in (0, 1]")
    degs = g.degrees()
    if any(d == 0 for d in degs):
        raise DataError("ppr matrix undefined with isolated nodes")
    n = g.node_count
    walk = np.zeros((n, n))
    for i in range(n):
        walk[i, list(g.adjacency[i])] = 1.0 / degs[i]
    system = np.identity(n) - (1.0 - alpha) * walk
    r = alpha * np.linalg.inv(system)
    row_err = np.max(np.abs(r.sum(axis=1) - 1.0))
    if row_err > 1e-9:
        raise ConsistencyError(f"ppr rows deviate from stochastic by {row_err!r}")
    return r


def _validate_subset(g: Graph, members: Sequence[int]) -> list[int]:
    subset = sorted(set(members))
    if not subset or len(subset) >= g.node_count:
        raise ParameterError("subset must be nonempty and proper")
    if subset[0] < 0 or subset[-1] >= g.node_count:
        raise ParameterError("subset contains out-of-range nodes")
    return subset


def ppr_cheeger(g: Graph, members: Sequence[int], alpha: float) -> float:
    """Per-node average PageRank mass escaping the subset."""
    subset = _validate_subset(g, members)
    r = ppr_matrix(g, alpha)
    outside = [i for i in range(g.node_count) if i not in set(subset)]
    return float(r[np.ix_(subset, outside)].sum() / len(subset))


def check_digl_bound(g: Graph, members: Sequence[int], alpha: float) -> BoundCheck:
    """Diffusion-conductance bound for one cut.

    lhs is the PageRank escape mass, rhs is ((1-alpha)/alpha) times the
    average-to-minimum degree ratio on the subset times |boundary|/vol(S);
    requires vol(S) at most half the total volume.
    """
    subset = _validate_subset(g, members)
    boundary, vol_s, vol_rest = _cut_fraction(g, subset)
    if vol_s > (vol_s + vol_rest) / 2:
        raise ParameterError(
            f"subset volume {vol_s} exceeds half the graph volume {vol_s + vol_rest}"
        )
    h_s = boundary / vol_s
    degrees = [g.degree(u) for u in subset]
    d_avg = sum(degrees) / len(degrees)
    d_min = min(degrees)
    lhs = ppr_cheeger(g, subset, alpha)
    rhs = (1.0 - alpha) / alpha * (d_avg / d_min) * h_s
    return BoundCheck(name="diffusion_conductance", lhs=lhs, rhs=rhs, holds=lhs <= rhs + 1e-12)


@dataclass(frozen=True)
class MassConcentrationRecord:
    alpha: float
    k: int
    threshold: float
    violating_volume: int
    volume_cap: float
    subset_volume: int
    holds: bool

    def to_json_obj(self) -> dict:
        return {
            "alpha": self.alpha,
            "k": self.k,
            "threshold": self.threshold,
            "violating_volume": self.violating_volume,
            "volume_cap": self.volume_cap,
            "subset_volume": self.subset_volume,
            "holds": self.holds,
        }


def ppr_mass_concentration(
    g: Graph, members: Sequence[int], alpha: float, k: int
) -> MassConcentrationRecord:
    """Volume of the subset nodes whose escape mass exceeds k times the bound.

    Nodes of S with out-of-S PageRank mass above k*((1-alpha)/alpha)*|bd S|/vol(S)
    must together have volume at most vol(S)/(2k).
    """
    if k < 1:
        raise ParameterError("k must be a positive integer")
    subset = _validate_subset(g, members)
    boundary, vol_s, vol_rest = _cut_fraction(g, subset)
    if vol_s > (vol_s + vol_rest) / 2:
        raise ParameterError(
            f"subset volume {vol_s} exceeds half the graph volume {vol_s + vol_rest}"
        )
    h_s = boundary / vol_s
    threshold = k * (1.0 - alpha) / alpha * h_s
    r = ppr_matrix(g, alpha)
    outside = [i for i in range(g.node_count) if i not in set(subset)]
    violating_volume = 0
    for u in subset:
        escape = float(r[u, outside].sum())
        if escape > threshold:
            violating_volume += g.degree(u)
    cap = vol_s / (2 * k)
    return MassConcentrationRecord(
        alpha=alpha,
        k=k,
        threshold=threshold,
        violating_volume=violating_volume,
        volume_cap=cap,
        subset_volume=vol_s,
        holds=violating_volume <= cap,
    )


def spectral_report(
    g: Graph,
    alpha: float = 0.15,
    k: int = 2,
    curvature_minimum: float | None = None,
    limit: int = EXHAUSTIVE_CHEEGER_LIMIT,
) -> SpectralReport:
    """Assemble gap, Cheeger, and every applicable bound check for a graph.

    The diffusion checks run on the Cheeger witness (taking whichever side
    has the smaller volume). When the graph's minimum curvature is supplied
    and positive, the curvature-gap-Cheeger chain is recorded as well.
    """
    lam = spectral_gap(g)
    h, witness, method = cheeger(g, limit=limit)
    checks: list[BoundCheck] = [
        BoundCheck("cheeger_upper", lam, 2.0 * h, lam <= 2.0 * h + 1e-12),
        BoundCheck("cheeger_lower", h * h / 2.0, lam, h * h / 2.0 <= lam + 1e-12),
    ]
    boundary, vol_s, vol_rest = _cut_fraction(g, witness)
    side = witness
    if vol_s > vol_rest:
        side = tuple(i for i in range(g.node_count) if i not in set(witness))
    checks.append(check_digl_bound(g, side, alpha))
    concentration = ppr_mass_concentration(g, side, alpha, k)
    checks.append(
        BoundCheck(
            "diffusion_mass_concentration",
            float(concentration.violating_volume),
            concentration.volume_cap,
            concentration.holds,
        )
    )
    if curvature_minimum is not None and curvature_minimum > 0:
        checks.append(
            BoundCheck(
                "curvature_gap_vs_cheeger", lam / 2.0, h, lam / 2.0 >= h - 1e-12
            )
        )
        checks.append(
            BoundCheck(
                "cheeger_vs_curvature",
                h,
                curvature_minimum / 2.0,
                h >= curvature_minimum / 2.0 - 1e-12,
            )
        )
    return SpectralReport(
        lambda1=lam,
        cheeger=h,
        cheeger_witness=witness,
        method=method,
        bound_checks=tuple(checks),
    )
