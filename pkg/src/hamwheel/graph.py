"""Immutable simple undirected graphs stored as adjacency bit rows.

Vertices are the integers ``0..n-1``.  Row ``adj[u]`` is a Python int whose
bit ``v`` is set iff ``uv`` is an edge; set algebra on rows is therefore
word-parallel through CPython's arbitrary-precision integers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

from .errors import GraphError


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class VertexSet:
    """A set of vertices of an ``n``-vertex graph, as a bit mask."""

    bits: int
    n: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise GraphError(f"vertex set {self.bits:#x} has bits outside 0..{self.n - 1}")

    @classmethod
    def of(cls, vertices: Iterable[int], n: int) -> "VertexSet":
        bits = 0
        for v in vertices:
            if not 0 <= v < n:
                raise GraphError(f"vertex {v} out of range for n={n}")
            bits |= 1 << v
        return cls(bits, n)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.bits >> v & 1)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits | other.bits, self.n)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & other.bits, self.n)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & ~other.bits, self.n)

    def sorted(self) -> list[int]:
        return list(iter_bits(self.bits))


SetLike = Union[VertexSet, int, Iterable[int], None]


def as_mask(s: SetLike, n: int) -> int:
    """Coerce a VertexSet, raw mask, or iterable of vertices to a bit mask."""
    if s is None:
        return 0
    if isinstance(s, VertexSet):
        if s.n != n:
            raise GraphError(f"vertex set indexes n={s.n}, graph has n={n}")
        return s.bits
    if isinstance(s, int):
        if s < 0 or s >> n:
            raise GraphError(f"mask {s:#x} has bits outside 0..{n - 1}")
        return s
    return VertexSet.of(s, n).bits


class Graph:
    """Immutable simple undirected graph.

    Construct with :meth:`from_edges` or :meth:`from_rows`; both validate
    symmetry and loop-freeness.
    """

    def __init__(self, n: int, rows: Sequence[int], *, _trusted: bool = False):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        if len(rows) != n:
            raise GraphError(f"expected {n} rows, got {len(rows)}")
        rows = tuple(int(r) for r in rows)
        if not _trusted:
            full = (1 << n) - 1
            for u, r in enumerate(rows):
                if r & ~full:
                    raise GraphError(f"row {u} has bits outside 0..{n - 1}")
                if r >> u & 1:
                    raise GraphError(f"loop at vertex {u}")
                for v in iter_bits(r):
                    if not rows[v] >> u & 1:
                        raise GraphError(f"asymmetric adjacency between {u} and {v}")
        self._n = n
        self._adj = rows
        total = sum(r.bit_count() for r in rows)
        self._m = total // 2

    # -- construction -------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> "Graph":
        return cls(len(rows), rows)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, _trusted=True)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n, _trusted=True)

    # -- basic accessors ----------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    @property
    def adj(self) -> tuple[int, ...]:
        return self._adj

    @property
    def full_mask(self) -> int:
        return (1 << self._n) - 1

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._n == other._n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(r.bit_count() for r in self._adj)

    @cached_property
    def nbrs(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour lists, for traversal code on sparse graphs."""
        return tuple(tuple(iter_bits(r)) for r in self._adj)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.nbrs[v]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, r in enumerate(self._adj):
            for v in iter_bits(r >> (u + 1)):
                yield u, u + 1 + v

    def min_degree(self) -> int:
        return min(self.degrees) if self._n else 0

    def max_degree(self) -> int:
        return max(self.degrees) if self._n else 0

    def is_regular(self) -> bool:
        return self._n > 0 and len(set(self.degrees)) == 1

    def avg_degree(self) -> Fraction:
        """Average degree ``2m/n`` as an exact rational."""
        if self._n == 0:
            raise GraphError("average degree of the empty graph is undefined")
        return Fraction(2 * self._m, self._n)

    # -- set helpers --------------------------------------------------
    def neighborhood(self, mask: int) -> int:
        """External neighbourhood N(X): vertices outside X adjacent to X."""
        out = 0
        for v in iter_bits(mask):
            out |= self._adj[v]
        return out & ~mask

    def edges_within(self, mask: int) -> int:
        total = 0
        for v in iter_bits(mask):
            total += (self._adj[v] & mask).bit_count()
        return total // 2

    def edges_between(self, xmask: int, ymask: int) -> int:
        """e(X, Y) for disjoint X, Y: edges with one end in each."""
        return sum((self._adj[v] & ymask).bit_count() for v in iter_bits(xmask))

    def is_connected(self, mask: int | None = None) -> bool:
        mask = self.full_mask if mask is None else mask
        if not mask:
            return True
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= self._adj[v]
            frontier = nxt & mask & ~seen
            seen |= frontier
        return seen == mask

    def components(self) -> list[int]:
        left = self.full_mask
        comps = []
        while left:
            start = left & -left
            seen = frontier = start
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self._adj[v]
                frontier = nxt & ~seen
                seen |= frontier
            comps.append(seen)
            left &= ~seen
        return comps

    def bfs_order(self, source: int, allowed: int | None = None) -> tuple[list[int], list[int]]:
        """BFS from ``source`` inside ``allowed``; return (discovery order, depths)."""
        allowed = self.full_mask if allowed is None else allowed
        order = [source]
        depth = [0]
        seen = {source}
        q = deque([(source, 0)])
        nbrs = self.nbrs
        while q:
            u, du = q.popleft()
            for w in nbrs[u]:
                if w not in seen and allowed >> w & 1:
                    seen.add(w)
                    order.append(w)
                    depth.append(du + 1)
                    q.append((w, du + 1))
        return order, depth

    # -- derived graphs -----------------------------------------------
    def induced(self, s: SetLike) -> "Graph":
        """G[S] relabelled to ``0..|S|-1`` in ascending original order."""
        mask = as_mask(s, self._n)
        if not mask:
            raise GraphError("induced subgraph on the empty set")
        verts = list(iter_bits(mask))
        pos = {v: i for i, v in enumerate(verts)}
        rows = []
        for v in verts:
            r = 0
            for w in iter_bits(self._adj[v] & mask):
                r |= 1 << pos[w]
            rows.append(r)
        return Graph(len(verts), rows, _trusted=True)

    def remove(self, s: SetLike) -> "Graph":
        """G - X, relabelled."""
        return self.induced(self.full_mask & ~as_mask(s, self._n))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self._n, ((perm[u], perm[v]) for u, v in self.edges()))

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self._n, self._n), dtype=np.int64)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return Graph.from_edges(offset, edges)
