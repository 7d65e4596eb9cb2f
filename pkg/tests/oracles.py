"""Independent brute-force oracles the test suite checks the library against.

Each oracle deliberately avoids the code path it certifies: 4-cycle sets by
exhaustive tuple enumeration, matchings by backtracking over all injections,
transport by linear programming, betweenness by per-pair path counting,
Cheeger by subset iteration in exact rationals, and the Laplacian spectrum
by characteristic-polynomial root finding.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from graphcurv import Graph, augmented_normalized_adjacency, bfs_distances
from graphcurv.transport import LocalMeasure


def enumerate_square_sets(g: Graph, i: int, j: int):
    """4-cycle census of edge (i, j) by checking every (k, w) node pair.

    A pair qualifies when i~k~w~j closes a 4-cycle with no diagonal: k is
    adjacent to i but not j (and is not j), w adjacent to j and k but not i
    (and is not i). Returns (squares_i, squares_j, degeneracy) with the
    degeneracy the largest number of qualifying partners of any census node.
    """
    ni = set(g.adjacency[i])
    nj = set(g.adjacency[j])
    pair_count_k: dict[int, int] = {}
    pair_count_w: dict[int, int] = {}
    for k in range(g.node_count):
        if k == j or k == i or k not in ni or k in nj:
            continue
        for w in range(g.node_count):
            if w == i or w == j or w == k or w not in nj or w in ni:
                continue
            if g.has_edge(k, w):
                pair_count_k[k] = pair_count_k.get(k, 0) + 1
                pair_count_w[w] = pair_count_w.get(w, 0) + 1
    squares_i = frozenset(pair_count_k)
    squares_j = frozenset(pair_count_w)
    gamma = None
    if squares_i:
        gamma = max(max(pair_count_k.values()), max(pair_count_w.values()))
    return squares_i, squares_j, gamma


def brute_force_matching(g: Graph, i: int, j: int) -> int:
    """Maximum 1-1 pairing between the square sets by trying every injection."""
    squares_i, squares_j, _ = enumerate_square_sets(g, i, j)
    left = sorted(squares_i)
    right = sorted(squares_j)
    best = 0
    for size in range(min(len(left), len(right)), 0, -1):
        for subset in itertools.combinations(left, size):
            for image in itertools.permutations(right, size):
                if all(g.has_edge(k, w) for k, w in zip(subset, image)):
                    return size
        # no injection of this size worked; try smaller
    return best


def lp_wasserstein(g: Graph, mu: LocalMeasure, nu: LocalMeasure) -> float:
    """Optimal transport cost by linear programming over the coupling."""
    m = len(mu.support)
    q = len(nu.support)
    cost = np.empty((m, q))
    for a, s in enumerate(mu.support):
        dist = bfs_distances(g, s)
        for b, t in enumerate(nu.support):
            cost[a, b] = dist[t]
    a_eq = []
    b_eq = []
    for a in range(m):
        row = np.zeros(m * q)
        row[a * q : (a + 1) * q] = 1.0
        a_eq.append(row)
        b_eq.append(mu.mass[a])
    for b in range(q):
        row = np.zeros(m * q)
        row[b::q] = 1.0
        a_eq.append(row)
        b_eq.append(nu.mass[b])
    result = linprog(
        cost.reshape(-1), A_eq=np.array(a_eq), b_eq=np.array(b_eq), bounds=(0, None), method="highs"
    )
    assert result.status == 0, result.message
    return float(result.fun)


def betweenness_by_pairs(g: Graph) -> list[float]:
    """Ordered-pair betweenness from geodesic counts, no accumulation trick.

    sigma(s, t; k) = sigma(s, k) * sigma(k, t) when k lies on a geodesic.
    """
    n = g.node_count
    dist = []
    sigma = []
    for s in range(n):
        d = [math.inf] * n
        c = [0] * n
        d[s] = 0
        c[s] = 1
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in g.adjacency[u]:
                    if d[v] == math.inf:
                        d[v] = d[u] + 1
                        nxt.append(v)
                    if d[v] == d[u] + 1:
                        c[v] += c[u]
            frontier = nxt
        dist.append(d)
        sigma.append(c)
    b = [0.0] * n
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            for k in range(n):
                if k == s or k == t:
                    continue
                if dist[s][k] + dist[k][t] == dist[s][t]:
                    b[k] += sigma[s][k] * sigma[k][t] / sigma[s][t]
    return b


def cheeger_by_subsets(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """Cheeger constant over all subsets containing node 0, exact rationals."""
    n = g.node_count
    degrees = g.degrees()
    total_vol = sum(degrees)
    best = None
    witness = None
    others = list(range(1, n))
    for size in range(0, n - 1):
        for extra in itertools.combinations(others, size):
            subset = (0,) + extra
            inside = set(subset)
            boundary = sum(
                1 for u in subset for v in g.adjacency[u] if v not in inside
            )
            vol = sum(degrees[u] for u in subset)
            h = Fraction(boundary, min(vol, total_vol - vol))
            if best is None or h < best or (h == best and subset < witness):
                best = h
                witness = subset
    return best, witness


def charpoly_spectrum(g: Graph) -> list[float]:
    """Normalized-Laplacian eigenvalues via the characteristic polynomial.

    Works on the similar matrix D^-1 A (rational entries): Faddeev-LeVerrier
    in exact Fractions gives the polynomial, numpy finds its roots, and the
    Laplacian spectrum is 1 minus those roots.
    """
    n = g.node_count
    walk = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d = g.degree(i)
        for j in g.adjacency[i]:
            walk[i][j] = Fraction(1, d)

    def mat_mul(a, b):
        return [
            [sum(a[r][k] * b[k][c] for k in range(n)) for c in range(n)] for r in range(n)
        ]

    # Faddeev-LeVerrier: M_k = A*M_(k-1) + c_(n-k+1)*I, c_(n-k) = -tr(A*M_k)/k.
    coeffs = [Fraction(1)]
    a_times_m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        m_k = [row[:] for row in a_times_m]
        for d in range(n):
            m_k[d][d] += coeffs[-1]
        a_times_m = mat_mul(walk, m_k)
        trace = sum(a_times_m[d][d] for d in range(n))
        coeffs.append(-trace / k)
    roots = np.roots([float(c) for c in coeffs])
    return sorted(float(1.0 - r.real) for r in roots)


def dense_power(g: Graph, r: int) -> np.ndarray:
    return np.linalg.matrix_power(augmented_normalized_adjacency(g), r)


def integer_tilde_power_row(g: Graph, power: int, i: int) -> list[int]:
    """Row i of (A + I)^power in exact integer arithmetic."""
    n = g.node_count
    tilde = [[0] * n for _ in range(n)]
    for a in range(n):
        tilde[a][a] = 1
        for b in g.adjacency[a]:
            tilde[a][b] = 1
    row = [1 if c == i else 0 for c in range(n)]
    for _ in range(power):
        row = [sum(row[k] * tilde[k][c] for k in range(n)) for c in range(n)]
    return row
