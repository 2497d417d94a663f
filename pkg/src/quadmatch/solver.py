"""Exact minimum-weight perfect matching on general weighted graphs.

This is the optimization engine behind both matching stages.  Edge weights
are finite floats; "forbidden" edges carry the finite sentinel returned by
:func:`quadmatch.distances.infeasible_sentinel` instead of infinity so the
solver always has a feasible (if expensive) solution.  Weights are scaled
and rounded to int64 before solving, so optimality is certified in exact
integer arithmetic.

For graphs up to :data:`CANONICAL_MAX` vertices, ties between equal-weight
optima are broken by returning the lexicographically smallest edge set
(edges compared as sorted (u, v) pairs).  Above that size canonicalization
would need O(n^2) re-solves, so the solver returns its deterministic
algorithmic optimum instead; at the 1e-6 rounding granularity, ties between
distinct real-valued matchings are not a practical concern there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._blossom import max_weight_perfect_matching
from .errors import InfeasibleMatch, OddVertexCount, ParityViolation

SENTINEL = 1.0e15
SCALE = 1.0e6
CANONICAL_MAX = 64

# int64 headroom: vertex duals can grow to ~n * w_max inside the kernel
_INT_BUDGET = float(2**61)

__all__ = [
    "SENTINEL",
    "SCALE",
    "CANONICAL_MAX",
    "WeightedGraph",
    "PerfectMatching",
    "min_weight_perfect_matching",
    "add_sinks",
    "scale_weights",
]


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric finite weight matrix; the diagonal is ignored."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        if not np.isfinite(w).all():
            raise ValueError("weights must be finite (use the sentinel, not inf)")
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        object.__setattr__(self, "weights", w)

    @property
    def n_vertices(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class PerfectMatching:
    """A perfect matching: every vertex covered exactly once."""

    edges: frozenset
    total_weight: float

    def partner(self) -> dict:
        out = {}
        for u, v in self.edges:
            out[u] = v
            out[v] = u
        return out


def scale_weights(w: np.ndarray) -> tuple[np.ndarray, np.int64]:
    """Round weights to int64 at 1e-6 granularity, sentinel-aware.

    Returns the integer matrix and the integer sentinel value.  Entries at
    or above :data:`SENTINEL` map to the integer sentinel, which exceeds
    any total over feasible edges, so minimizing total weight first
    minimizes the number of sentinel edges used.  The multiplier backs off
    from 1e6 only when needed to keep kernel arithmetic inside int64.
    """
    n = w.shape[0]
    feasible = w < SENTINEL
    np.fill_diagonal(feasible, False)
    max_feas = float(w[feasible].max()) if feasible.any() else 0.0
    half = max(n // 2, 1)
    scale = SCALE
    if max_feas > 0 and max_feas * scale * half * half * 4 > _INT_BUDGET:
        scale = _INT_BUDGET / (max_feas * half * half * 4)
    w_int = np.rint(np.where(feasible, w, 0.0) * scale).astype(np.int64)
    int_sent = np.int64(half) * np.int64(max(int(max_feas * scale) + 1, 1)) + 1
    w_int[~feasible] = int_sent
    np.fill_diagonal(w_int, 0)
    return w_int, int_sent


def _solve_int(w_int: np.ndarray) -> list[tuple[int, int]]:
    """Minimum-weight perfect matching on an int64 matrix (0-based)."""
    n = w_int.shape[0]
    if n == 2:
        return [(0, 1)]
    wmax = int(w_int.max())
    # affine transform to a maximization problem with all weights >= 1
    w1 = np.zeros((n + 1, n + 1), dtype=np.int64)
    w1[1:, 1:] = wmax - w_int + 1
    np.fill_diagonal(w1, 0)
    match, ok = max_weight_perfect_matching(w1)
    if not ok:
        raise RuntimeError("blossom kernel failed to find a perfect matching")
    return sorted((u - 1, int(match[u]) - 1) for u in range(1, n + 1)
                  if u < match[u])


def _matching_total(w_int: np.ndarray, edges) -> int:
    return int(sum(int(w_int[u, v]) for u, v in edges))


def _canonicalize(w_int: np.ndarray, opt_total: int) -> list[tuple[int, int]]:
    """Lexicographically smallest optimal edge set, by greedy re-solving.

    For the smallest unfixed vertex, the candidate partner v is accepted
    iff fixing (m, v) still admits the optimal total on the remaining
    subgraph; the first accepted v is the lexicographic choice.
    """
    n = w_int.shape[0]
    alive = list(range(n))
    fixed: list[tuple[int, int]] = []
    fixed_w = 0
    while alive:
        m = alive[0]
        rest = alive[1:]
        chosen = -1
        for v in rest:
            remaining = [x for x in rest if x != v]
            cand = fixed_w + int(w_int[m, v])
            if remaining:
                sub = w_int[np.ix_(remaining, remaining)]
                cand += _matching_total(sub, _solve_int(sub))
            if cand == opt_total:
                chosen = v
                break
        if chosen < 0:  # cannot happen: the unfixed optimum extends fixed edges
            raise RuntimeError("canonicalization lost the optimum")
        fixed.append((m, chosen))
        fixed_w += int(w_int[m, chosen])
        alive = [x for x in alive if x != m and x != chosen]
    return fixed


def min_weight_perfect_matching(g: WeightedGraph) -> PerfectMatching:
    """Globally optimal perfect matching, deterministic for a fixed input.

    Raises
    ------
    OddVertexCount
        If the vertex count is odd.
    InfeasibleMatch
        If every optimal matching is forced to use a sentinel edge.
    """
    n = g.n_vertices
    if n < 2 or n % 2 != 0:
        raise OddVertexCount(f"perfect matching needs an even vertex count >= 2, got {n}")
    w_int, int_sent = scale_weights(g.weights)
    edges = _solve_int(w_int)
    if n <= CANONICAL_MAX:
        edges = sorted(tuple(sorted(e)) for e in
                       _canonicalize(w_int, _matching_total(w_int, edges)))
    if any(w_int[u, v] >= int_sent for u, v in edges):
        raise InfeasibleMatch("an optimal matching requires a forbidden edge")
    total = float(sum(g.weights[u, v] for u, v in edges))
    return PerfectMatching(edges=frozenset(edges), total_weight=total)


def add_sinks(g: WeightedGraph, n_sinks: int) -> WeightedGraph:
    """Append sink vertices: free edges to every real vertex, sentinel between sinks.

    Units matched to sinks are trimmed by the caller.  The augmented count
    must be even.
    """
    n = g.n_vertices
    if n_sinks < 0:
        raise ValueError("n_sinks must be non-negative")
    if (n + n_sinks) % 2 != 0:
        raise ParityViolation(
            f"{n} vertices with {n_sinks} sinks leaves an odd total")
    if n_sinks == 0:
        return g
    m = n + n_sinks
    w = np.full((m, m), SENTINEL, dtype=np.float64)
    w[:n, :n] = g.weights
    w[:n, n:] = 0.0
    w[n:, :n] = 0.0
    np.fill_diagonal(w, 0.0)
    return WeightedGraph(weights=w)
