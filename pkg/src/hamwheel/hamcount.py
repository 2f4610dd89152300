"""Exact Hamiltonicity and Hamiltonian-subset counting.

The counting engine fills one table for every vertex subset at once.  For a
subset ``A`` with lowest vertex ``a``, ``ends[A]`` is the bit set of vertices
``v > a`` such that some path starting at ``a`` visits exactly ``A`` and ends
at ``v``.  ``A`` (with ``|A| >= 3``) is Hamiltonian iff some endpoint in
``ends[A]`` is adjacent to ``a``.  Subsets are filled layer by layer in order of
size, and each layer is a handful of vectorised numpy gathers, so the whole
table costs ``O(2^n n)`` word operations rather than ``O(3^n)``.

The engine is batched: ``_ham_table`` takes a stack of adjacency rows for
many graphs on the same ``n`` and returns one boolean row per graph, which
is what makes the exhaustive census over labelled graphs cheap.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import GraphError, InfeasibleError
from .graph import Graph, iter_bits

DEFAULT_MAX_N = 18
HARD_MAX_N = 26


def _dtype_for(n: int):
    if n <= 8:
        return np.uint8
    if n <= 16:
        return np.uint16
    if n <= 32:
        return np.uint32
    return np.uint64


@lru_cache(maxsize=None)
def _layout(n: int):
    """Per-n index tables: popcount, lowest set bit, and per-(size, v) update lists."""
    masks = np.arange(1 << n, dtype=np.int64)
    pop = np.bitwise_count(masks).astype(np.int64)
    low = np.full(1 << n, -1, dtype=np.int64)
    for v in range(n - 1, -1, -1):
        low[(masks >> v) & 1 == 1] = v
    layers = []
    for k in range(2, n + 1):
        idx = np.flatnonzero(pop == k)
        per_v = []
        for v in range(1, n):
            sel = idx[((idx >> v) & 1 == 1) & (low[idx] < v)]
            if sel.size:
                per_v.append((v, sel, sel ^ (1 << v)))
        layers.append((k, per_v))
    return pop, low, layers


def _ham_table(rows: np.ndarray, n: int, deadline: float | None = None):
    """Hamiltonicity of every subset for a batch of graphs.

    ``rows`` has shape ``(batch, n)``.  Returns ``(ham, done_k)`` where ``ham``
    is a ``(batch, 2^n)`` bool array and ``done_k`` the largest subset size
    whose layer was completed (``n`` unless the deadline hit).
    """
    batch = rows.shape[0]
    dt = _dtype_for(n)
    rows = rows.astype(dt, copy=False)
    pop, low, layers = _layout(n)
    ends = np.zeros((batch, 1 << n), dtype=dt)
    for v in range(n):
        ends[:, 1 << v] = dt(1 << v)
    done_k = 1
    for k, per_v in layers:
        if deadline is not None and time.monotonic() > deadline:
            break
        for v, sel, prev in per_v:
            hit = (ends[:, prev] & rows[:, v : v + 1]) != 0
            ends[:, sel] |= hit.astype(dt) * dt(1 << v)
        done_k = k
    lowrows = rows[:, np.maximum(low, 0)]
    ham = ((ends & lowrows) != 0) & (pop >= 3) & (pop <= done_k)
    return ham, done_k


def _rows_array(g: Graph) -> np.ndarray:
    return np.array([g.adj], dtype=np.int64)


# -- single-graph Hamiltonicity -------------------------------------------


def is_hamiltonian(g: Graph) -> bool:
    """True iff ``g`` has a cycle through all of its vertices (False for n < 3)."""
    n = g.n
    if n < 3 or g.min_degree() < 2 or not g.is_connected():
        return False
    adj = g.adj
    # Paths start at vertex 0; states are subsets of {1..n-1} visited so far,
    # stored shifted down by one bit.
    size = 1 << (n - 1)
    ends = [0] * size
    for v in iter_bits(adj[0]):
        ends[1 << (v - 1)] = 1 << (v - 1)
    full = size - 1
    rows = [adj[v + 1] >> 1 for v in range(n - 1)]
    for s in range(1, size):
        e = ends[s]
        if not e:
            continue
        reach = 0
        for v in iter_bits(e):
            reach |= rows[v]
        reach &= ~s & full
        for u in iter_bits(reach):
            ends[s | (1 << u)] |= 1 << u
    return bool(ends[full] & (adj[0] >> 1))


# -- counting --------------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    """Limits for exact counting.  ``max_n`` is the feasibility cap."""

    max_n: int = DEFAULT_MAX_N
    time_ms: int | None = None
    threads: int = 1

    def to_dict(self) -> dict:
        return {"max_n": self.max_n, "time_ms": self.time_ms, "threads": self.threads}


@dataclass
class HamCount:
    n: int
    m: int
    total: int
    per_vertex: list[int]
    subsets_examined: int
    elapsed: float
    budget: Budget = field(default_factory=Budget)
    valid: bool = True
    complete_through_size: int | None = None
    size_weighted: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "total": self.total,
            "per_vertex": list(self.per_vertex),
            "valid": self.valid,
            "complete_through_size": self.complete_through_size,
            "subsets_examined": self.subsets_examined,
            "budget": self.budget.to_dict(),
            "timing": {"elapsed_ms": round(self.elapsed * 1000, 3)},
        }


def count_hamiltonian_subsets(g: Graph, budget: Budget | None = None) -> HamCount:
    """Exact h(G) and per-vertex counts h_v(G).

    Raises :class:`InfeasibleError` when ``n`` exceeds ``budget.max_n``.  If
    ``budget.time_ms`` runs out, the result covers only subsets up to
    ``complete_through_size`` and is flagged ``valid=False``.
    """
    budget = budget or Budget()
    t0 = time.monotonic()
    n = g.n
    if n > min(budget.max_n, HARD_MAX_N):
        raise InfeasibleError(
            f"n={n} exceeds the counting cap {budget.max_n}; the table has 2^{n} entries "
            f"(~{(1 << n) * n:.2e} word operations); raise Budget.max_n to override (hard max {HARD_MAX_N})"
        )
    if n == 0:
        return HamCount(0, 0, 0, [], 1, time.monotonic() - t0, budget)

    deadline = None if budget.time_ms is None else t0 + budget.time_ms / 1000
    ham, done_k = _ham_table(_rows_array(g), n, deadline)
    hmask = np.flatnonzero(ham[0])
    total, per_vertex, weighted = _tally(hmask, n, budget.threads)
    if total > (1 << n) - 1 - n - n * (n - 1) // 2:
        raise AssertionError("Hamiltonian subset count exceeds the number of subsets of size >= 3")
    if sum(per_vertex) != weighted:
        raise AssertionError("per-vertex counts disagree with the size-weighted subset tally")
    return HamCount(
        n=n,
        m=g.m,
        total=total,
        per_vertex=per_vertex,
        subsets_examined=1 << n,
        elapsed=time.monotonic() - t0,
        budget=budget,
        valid=done_k == n,
        complete_through_size=done_k,
        size_weighted=weighted,
    )


def _tally_block(hmask: np.ndarray, n: int) -> tuple[int, list[int], int]:
    per_vertex = [int(((hmask >> v) & 1).sum()) for v in range(n)]
    weighted = int(np.bitwise_count(hmask).sum())
    return int(hmask.size), per_vertex, weighted


def _tally(hmask: np.ndarray, n: int, threads: int = 1):
    """Sum counts over contiguous blocks of the (ascending) Hamiltonian-mask list.

    The reduction is a plain sum, so the result does not depend on the block
    split or on thread scheduling.
    """
    blocks = np.array_split(hmask, max(1, threads * 4)) if hmask.size else [hmask]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda b: _tally_block(b, n), blocks))
    else:
        parts = [_tally_block(b, n) for b in blocks]
    total = sum(p[0] for p in parts)
    per_vertex = [sum(p[1][v] for p in parts) for v in range(n)]
    weighted = sum(p[2] for p in parts)
    return total, per_vertex, weighted


def hamiltonian_subsets(g: Graph) -> list[int]:
    """All Hamiltonian subsets of ``g`` as ascending bit masks."""
    if g.n > HARD_MAX_N:
        raise InfeasibleError(f"n={g.n} too large to list Hamiltonian subsets")
    if g.n == 0:
        return []
    ham, _ = _ham_table(_rows_array(g), g.n)
    return [int(x) for x in np.flatnonzero(ham[0])]


def closed_form_h_clique(d: int) -> int:
    """h(K_{d+1}) = 2^{d+1} - (d^2 + 3d + 4)/2, i.e. the number of subsets of size >= 3."""
    if d < 2:
        raise GraphError(f"closed_form_h_clique needs d >= 2, got {d}")
    return (1 << (d + 1)) - (d * d + 3 * d + 4) // 2


# -- exhaustive census over labelled graphs --------------------------------

CENSUS_MAX_N = 7


@dataclass
class MinReport:
    n_max: int
    d: int
    graphs_examined: int
    graphs_qualifying: int
    min_h: int | None
    minimizers: list[dict]
    min_h_excluding_clique: int | None
    minimizers_excluding_clique: list[dict]
    per_n: dict[int, dict]
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "d": self.d,
            "graphs_examined": self.graphs_examined,
            "graphs_qualifying": self.graphs_qualifying,
            "min_h": self.min_h,
            "minimizer": self.minimizers[0]["name"] if self.minimizers else None,
            "minimizers": self.minimizers,
            "min_h_excluding_clique": self.min_h_excluding_clique,
            "minimizers_excluding_clique": self.minimizers_excluding_clique,
            "per_n": {str(k): v for k, v in self.per_n.items()},
            "timing": {"elapsed_ms": round(self.elapsed * 1000, 3)},
        }


def census_cost(n_max: int) -> int:
    """Number of labelled graphs the census visits for a given ``n_max``."""
    return sum(1 << comb(n, 2) for n in range(1, n_max + 1))


def _labelled_graph_rows(n: int, min_deg: int, chunk: int = 1 << 16):
    """Yield ``(codes, rows)`` chunks for all labelled graphs on ``n`` vertices with min degree >= min_deg.

    A graph's code has bit ``e`` set for the ``e``-th pair of ``combinations(range(n), 2)``.
    """
    pairs = list(combinations(range(n), 2))
    total = 1 << len(pairs)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        rows = np.zeros((codes.size, n), dtype=np.int64)
        for e, (u, v) in enumerate(pairs):
            bit = (codes >> e) & 1
            rows[:, u] |= bit << v
            rows[:, v] |= bit << u
        if min_deg > 0:
            deg = np.bitwise_count(rows)
            keep = deg.min(axis=1) >= min_deg
            codes, rows = codes[keep], rows[keep]
        if codes.size:
            yield codes, rows


def _graph_from_row(row) -> Graph:
    return Graph.from_rows([int(r) for r in row])


def _signature(g: Graph, hc: HamCount) -> tuple:
    return (tuple(sorted(g.degrees)), hc.total, tuple(sorted(hc.per_vertex)))


def _describe(g: Graph, hc: HamCount) -> dict:
    from .io import encode_graph6

    n = g.n
    name = f"K{n}" if g.m == n * (n - 1) // 2 else encode_graph6(g).decode()
    return {
        "name": name,
        "n": n,
        "m": g.m,
        "h": hc.total,
        "graph6": encode_graph6(g).decode(),
        "degree_sequence": sorted(g.degrees),
        "per_vertex_multiset": sorted(hc.per_vertex),
        "labelled_copies": 0,
    }


def exhaustive_min_search(n_max: int, d: int) -> MinReport:
    """Minimum h over all labelled graphs on at most ``n_max`` vertices with min degree >= d.

    Minimisers are grouped by the signature (sorted degree sequence, h,
    sorted per-vertex counts).  The report also gives the minimum over
    graphs other than K_{d+1}; on ``n = d + 1`` vertices the only graph with
    minimum degree ``d`` is K_{d+1} itself, so that minimum ranges over
    ``n >= d + 2``.
    """
    if n_max > CENSUS_MAX_N:
        raise InfeasibleError(
            f"n_max={n_max} exceeds the census cap {CENSUS_MAX_N}: it would visit "
            f"{census_cost(n_max):.3e} labelled graphs (n_max=7 visits {census_cost(7):,})"
        )
    if d < 0:
        raise GraphError("minimum degree must be >= 0")
    t0 = time.monotonic()
    examined = qualifying = 0
    best = _MinPool()
    best_other = _MinPool()
    per_n = {}
    for n in range(1, n_max + 1):
        examined += 1 << comb(n, 2)
        n_min = None
        n_count = 0
        for codes, rows in _labelled_graph_rows(n, d):
            ham, _ = _ham_table(rows, n)
            h = ham.sum(axis=1)
            n_count += codes.size
            hmin = int(h.min())
            n_min = hmin if n_min is None else min(n_min, hmin)
            best.offer(h, rows)
            if n != d + 1:
                best_other.offer(h, rows)
        qualifying += n_count
        per_n[n] = {"qualifying": n_count, "min_h": n_min}

    min_h, minimizers = best.summarise()
    min_other, minimizers_other = best_other.summarise()
    return MinReport(
        n_max=n_max,
        d=d,
        graphs_examined=examined,
        graphs_qualifying=qualifying,
        min_h=min_h,
        minimizers=minimizers,
        min_h_excluding_clique=min_other,
        minimizers_excluding_clique=minimizers_other,
        per_n=per_n,
        elapsed=time.monotonic() - t0,
    )


class _MinPool:
    """Running minimum of h with the labelled graphs attaining it.

    ``count`` is exact; at most ``cap`` representative rows are stored.
    """

    def __init__(self, cap: int = 20000):
        self.cap = cap
        self.h: int | None = None
        self.count = 0
        self.rows: list[np.ndarray] = []

    def offer(self, h: np.ndarray, rows: np.ndarray) -> None:
        hmin = int(h.min())
        if self.h is not None and hmin > self.h:
            return
        if self.h is None or hmin < self.h:
            self.h, self.count, self.rows = hmin, 0, []
        hit = rows[h == hmin]
        self.count += hit.shape[0]
        room = self.cap - len(self.rows)
        self.rows.extend(r.copy() for r in hit[:room])

    def summarise(self) -> tuple[int | None, list[dict]]:
        if self.h is None:
            return None, []
        groups: dict[tuple, dict] = {}
        for row in self.rows:
            g = _graph_from_row(row)
            hc = count_hamiltonian_subsets(g)
            sig = (g.n,) + _signature(g, hc)
            if sig not in groups:
                groups[sig] = _describe(g, hc)
            groups[sig]["labelled_copies"] += 1
        out = sorted(groups.values(), key=lambda r: (r["n"], r["m"], r["graph6"]))
        if len(self.rows) < self.count:
            for r in out:
                r["copies_truncated"] = True
        for r in out:
            r["total_labelled_minimizers"] = self.count
        return self.h, out
