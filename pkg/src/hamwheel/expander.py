"""Sublinear expanders: the expansion function, certification, and extraction.

A graph is an ``(eps1, k)``-expander when every vertex set ``X`` with
``k/2 <= |X| <= n/2`` has ``|N(X)| >= eps(|X|) * |X|``, where ``N(X)`` is the
external neighbourhood.  Besides checking that property this module provides
the traversal primitives the wheel pipeline is built from: degree peeling,
robust ball finding and shortest avoiding paths.
"""

from __future__ import annotations

import logging
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BallNotFound, ExtractionFailed, GraphError, PathNotFound
from .graph import Graph, SetLike, VertexSet, as_mask, iter_bits

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 22
LOG3 = math.log(3)


def eps(x: float, eps1: float, k: float) -> float:
    """The expansion rate: 0 below k/5, else eps1 / ln^2(15x/k)."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x < k / 5:
        return 0.0
    return float(eps1) / math.log(15 * x / k) ** 2


@dataclass(frozen=True)
class ExpanderParams:
    eps1: float
    k: float = 15
    C: float = 30 * LOG3

    @classmethod
    def standard(cls, k: float = 15) -> "ExpanderParams":
        """C = 30 ln 3 and eps1 = 1/(10C)."""
        c = 30 * LOG3
        return cls(eps1=1 / (10 * c), k=k, C=c)

    @property
    def delta(self) -> float:
        return self.C * float(self.eps1) / LOG3

    def validate(self) -> None:
        """The extraction guarantee needs C > 30, eps1 <= 1/(10C) and delta < 1."""
        if not 0 < float(self.eps1) < 1:
            raise GraphError(f"eps1 must lie in (0, 1), got {self.eps1}")
        if self.k <= 0:
            raise GraphError("k must be positive")
        if not self.C > 30:
            raise GraphError(f"C must exceed 30, got {self.C}")
        if float(self.eps1) > 1 / (10 * self.C) * (1 + 1e-12):
            raise GraphError(f"eps1={self.eps1} exceeds 1/(10C)={1 / (10 * self.C)}")
        if not self.delta < 1:
            raise GraphError(f"delta={self.delta} must be < 1")

    def to_dict(self) -> dict:
        return {"eps1": float(self.eps1), "k": self.k, "C": self.C, "delta": self.delta}


@dataclass(frozen=True)
class Probed:
    probes: int = 32
    seed: int = 0
    ball_centers: int | None = None


EXHAUSTIVE = "exhaustive"


@dataclass
class ExpanderCertificate:
    eps1: float
    k: float
    level: str
    probes: int | None = None
    seed: int | None = None
    violating: VertexSet | None = None
    checked: int = 0

    @property
    def certified(self) -> bool:
        return self.violating is None

    def to_dict(self) -> dict:
        return {
            "eps1": float(self.eps1),
            "k": self.k,
            "level": self.level,
            "probes": self.probes,
            "seed": self.seed,
            "certified": self.certified,
            "violating": self.violating.sorted() if self.violating is not None else None,
            "checked": self.checked,
        }


def _window(n: int, k: float) -> tuple[int, int]:
    return math.ceil(k / 2), n // 2


def _violates(size_n: int, size_x: int, eps1: float, k: float) -> bool:
    return size_n < eps(size_x, eps1, k) * size_x


def verify_expander(g: Graph, p: ExpanderParams, level: str | Probed = EXHAUSTIVE) -> ExpanderCertificate:
    """Check (eps1, k)-expansion exhaustively (n <= 22) or by randomized probing.

    Exhaustive mode returns the lowest violating subset mask, if any.  Probed
    mode looks at BFS-ball prefixes and greedy local-search shrinks; its
    certificate only means nothing was found.
    """
    if level == EXHAUSTIVE:
        return _verify_exhaustive(g, p)
    if isinstance(level, Probed):
        return _verify_probed(g, p, level)
    raise ValueError(f"unknown verification level {level!r}")


def _verify_exhaustive(g: Graph, p: ExpanderParams) -> ExpanderCertificate:
    n = g.n
    if n > EXHAUSTIVE_MAX_N:
        raise GraphError(f"exhaustive expander verification needs n <= {EXHAUSTIVE_MAX_N}, got {n}")
    lo, hi = _window(n, p.k)
    cert = ExpanderCertificate(float(p.eps1), p.k, EXHAUSTIVE)
    if lo > hi or n == 0:
        return cert
    size = 1 << n
    nb = np.zeros(size, dtype=np.uint32)
    for v in range(n):
        nb[1 << v : 1 << (v + 1)] = nb[: 1 << v] | np.uint32(g.adj[v])
    masks = np.arange(size, dtype=np.uint32)
    pop = np.bitwise_count(masks)
    boundary = np.bitwise_count(nb & ~masks)
    need = np.zeros(n + 1)
    for s in range(lo, hi + 1):
        need[s] = eps(s, p.eps1, p.k) * s
    in_window = (pop >= lo) & (pop <= hi)
    bad = np.flatnonzero(in_window & (boundary < need[pop]))
    cert.checked = int(in_window.sum())
    if bad.size:
        cert.violating = VertexSet(int(bad[0]), n)
    return cert


def violation_of(g: Graph, mask: int, p: ExpanderParams) -> bool:
    """True iff ``mask`` lies in the size window and expands too little."""
    lo, hi = _window(g.n, p.k)
    s = mask.bit_count()
    return lo <= s <= hi and _violates(g.neighborhood(mask).bit_count(), s, p.eps1, p.k)


def _verify_probed(g: Graph, p: ExpanderParams, level: Probed) -> ExpanderCertificate:
    n = g.n
    cert = ExpanderCertificate(float(p.eps1), p.k, "probed", probes=level.probes, seed=level.seed)
    lo, hi = _window(n, p.k)
    if lo > hi or n == 0:
        return cert
    rng = random.Random(f"probe:{level.seed}")
    centers = list(range(n))
    limit = level.ball_centers
    if limit is None:
        limit = n if n <= 400 else 256
    if limit < n:
        centers = sorted(rng.sample(centers, limit))
    nbrs = g.nbrs
    for c in centers:
        order, _ = g.bfs_order(c)
        cnt = [0] * n
        inside = bytearray(n)
        bsize = 0
        for s, u in enumerate(order[:hi], start=1):
            inside[u] = 1
            if cnt[u]:
                bsize -= 1
            for w in nbrs[u]:
                if not inside[w]:
                    if cnt[w] == 0:
                        bsize += 1
                    cnt[w] += 1
            cert.checked += 1
            if s >= lo and _violates(bsize, s, p.eps1, p.k):
                cert.violating = VertexSet(sum(1 << v for v in order[:s]), n)
                return cert
    for _ in range(level.probes):
        found = _greedy_shrink(g, p, rng, lo, hi)
        cert.checked += 1
        if found is not None:
            cert.violating = VertexSet(found, n)
            return cert
    return cert


def _greedy_shrink(g: Graph, p: ExpanderParams, rng: random.Random, lo: int, hi: int, steps: int = 200) -> int | None:
    """Local search for a set with small boundary relative to eps(|X|)|X|.

    ``cnt[w]`` is the number of neighbours of w inside X, so the boundary size
    after a single add or delete is evaluated in O(deg) time.
    """
    n = g.n
    nbrs = g.nbrs
    size = rng.randint(lo, hi)
    order, _ = g.bfs_order(rng.randrange(n))
    if len(order) < lo:
        return None
    inside = bytearray(n)
    cnt = [0] * n
    members: list[int] = []
    for u in order[:size]:
        inside[u] = 1
        members.append(u)
        for w in nbrs[u]:
            cnt[w] += 1
    bsize = sum(1 for w in range(n) if cnt[w] and not inside[w])
    s = len(members)

    def add_delta(v: int) -> int:
        return -(cnt[v] > 0) + sum(1 for w in nbrs[v] if not inside[w] and cnt[w] == 0)

    def del_delta(v: int) -> int:
        return (cnt[v] > 0) - sum(1 for w in nbrs[v] if not inside[w] and cnt[w] == 1)

    def apply(v: int, sign: int) -> None:
        inside[v] = 1 if sign > 0 else 0
        for w in nbrs[v]:
            cnt[w] += sign

    cur = bsize - eps(s, p.eps1, p.k) * s
    for _ in range(steps):
        if cur < 0:
            break
        moves = []
        if s < hi:
            bnd = {w for u in rng.sample(members, min(8, s)) for w in nbrs[u] if not inside[w]}
            moves += [(1, v) for v in rng.sample(sorted(bnd), min(8, len(bnd)))]
        if s > lo:
            moves += [(-1, v) for v in rng.sample(members, min(8, s))]
        best = None
        for sign, v in moves:
            nb = bsize + (add_delta(v) if sign > 0 else del_delta(v))
            ns = s + sign
            sc = nb - eps(ns, p.eps1, p.k) * ns
            if best is None or sc < best[0]:
                best = (sc, sign, v, nb)
        if best is None or best[0] >= cur:
            break
        cur, sign, v, bsize = best
        apply(v, sign)
        if sign > 0:
            members.append(v)
        else:
            members.remove(v)
        s += sign
    return sum(1 << v for v in members) if cur < 0 else None


# -- peeling --------------------------------------------------------------


def peel_mask(g: Graph, mask: int, threshold) -> int:
    """Repeatedly delete a vertex of degree < threshold (smallest degree, then index)."""
    import heapq

    threshold = Fraction(threshold)
    adj = g.adj
    deg = {v: (adj[v] & mask).bit_count() for v in iter_bits(mask)}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    alive = mask
    while heap:
        d, v = heapq.heappop(heap)
        if not alive >> v & 1 or deg[v] != d:
            continue
        if d >= threshold:
            break
        alive &= ~(1 << v)
        for w in iter_bits(adj[v] & alive):
            deg[w] -= 1
            heapq.heappush(heap, (deg[w], w))
    return alive


def peel_min_degree(g: Graph, threshold) -> Graph:
    """The graph left after peeling every vertex of degree below ``threshold``."""
    kept = peel_mask(g, g.full_mask, threshold)
    return g.induced(kept) if kept else Graph.empty(0)


def avg_degree_of(g: Graph, mask: int) -> Fraction:
    s = mask.bit_count()
    return Fraction(2 * g.edges_within(mask), s) if s else Fraction(0)


def peel_to_half_average(g: Graph, mask: int) -> int:
    """Delete vertices of degree below half the *current* average degree until none is left.

    Removing a vertex of degree at most d/2 never lowers the average degree,
    so the result has min degree >= d(H)/2 and d(H) >= d(G[mask]).
    """
    adj = g.adj
    while mask:
        s = mask.bit_count()
        two_e = sum((adj[v] & mask).bit_count() for v in iter_bits(mask))
        # deg < (two_e / s) / 2  <=>  4 * s * deg < 2 * two_e ... keep integers: 2*s*deg < two_e
        worst = None
        for v in iter_bits(mask):
            d = (adj[v] & mask).bit_count()
            if 2 * s * d < two_e and (worst is None or d < worst[0]):
                worst = (d, v)
        if worst is None:
            return mask
        mask &= ~(1 << worst[1])
    return mask


# -- extraction -------------------------------------------------------------


@dataclass
class ExtractionResult:
    graph: Graph
    vertices: VertexSet
    certificate: ExpanderCertificate
    avg_degree: Fraction
    min_degree: int
    source_avg_degree: Fraction
    iterations: int
    history: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "m": self.graph.m,
            "vertices": self.vertices.sorted(),
            "avg_degree": str(self.avg_degree),
            "min_degree": self.min_degree,
            "source_avg_degree": str(self.source_avg_degree),
            "iterations": self.iterations,
            "certificate": self.certificate.to_dict(),
            "history": self.history,
        }


def _lift(sub_vertices: Sequence[int], local_mask: int) -> int:
    return sum(1 << sub_vertices[i] for i in iter_bits(local_mask))


def extract_expander(
    g: Graph,
    p: ExpanderParams | None = None,
    max_iterations: int = 200,
    probed: Probed | None = None,
    strict: bool = True,
) -> ExtractionResult:
    """Find H subset of G with d(H) >= (1-delta) d(G), min degree >= d(H)/2, certified as an expander.

    Violating-cut descent: start from the half-average peel of G; while a
    violating set X is found, replace H by the denser of H[X + N(X)] and
    H - X and re-peel.  Exhaustive certification is used when |H| <= 22,
    probing otherwise.  ``strict=False`` skips the parameter constraints so the
    descent can be exercised with stronger expansion rates.
    """
    p = p or ExpanderParams.standard()
    if strict:
        p.validate()
    if g.n == 0 or g.m == 0:
        raise GraphError("extract_expander needs a graph with at least one edge")
    probed = probed or Probed()
    d0 = g.avg_degree()
    floor = (1 - Fraction(p.delta)) * d0 if p.delta < 1 else Fraction(0)
    h = peel_to_half_average(g, g.full_mask)
    history = []
    last_violation = None
    for it in range(1, max_iterations + 1):
        verts = list(iter_bits(h))
        sub = g.induced(h)
        level = EXHAUSTIVE if sub.n <= EXHAUSTIVE_MAX_N else probed
        cert = verify_expander(sub, p, level)
        davg = avg_degree_of(g, h)
        history.append({"n": sub.n, "avg_degree": str(davg), "level": cert.level, "certified": cert.certified})
        if cert.certified:
            mind = sub.min_degree()
            if davg < floor or 2 * mind < davg:
                raise ExtractionFailed("degree conditions failed on the certified candidate", best=VertexSet(h, g.n), violating=None)
            return ExtractionResult(sub, VertexSet(h, g.n), cert, davg, mind, d0, it, history)
        x = _lift(verts, cert.violating.bits)
        last_violation = VertexSet(x, g.n)
        nx = g.neighborhood(x) & h
        a = peel_to_half_average(g, x | nx)
        b = peel_to_half_average(g, h & ~x)
        da, db = avg_degree_of(g, a), avg_degree_of(g, b)
        nxt = b if (db, b.bit_count()) >= (da, a.bit_count()) else a
        if avg_degree_of(g, nxt) < floor or not nxt:
            raise ExtractionFailed(
                f"descent would drop the average degree below (1-delta)d = {float(floor):.4f}",
                best=VertexSet(h, g.n),
                violating=last_violation,
            )
        h = nxt
    raise ExtractionFailed(
        f"no certified expander after {max_iterations} iterations", best=VertexSet(h, g.n), violating=last_violation
    )


# -- balls and short paths ---------------------------------------------------


def find_ball_avoiding(
    g: Graph,
    w: SetLike,
    size_target: int,
    radius_cap: int,
    centers: Iterable[int] | None = None,
) -> tuple[int, VertexSet]:
    """First BFS ball in G - W reaching ``size_target`` vertices within ``radius_cap``.

    Centres are tried in ``centers`` order (vertex order by default).  The
    ball is the BFS discovery-order prefix of exactly ``size_target``
    vertices, so it is connected and keeps the centre and radius.
    """
    wmask = as_mask(w, g.n)
    if size_target < 1:
        raise ValueError("size_target must be >= 1")
    nbrs = g.nbrs
    for c in centers if centers is not None else range(g.n):
        if wmask >> c & 1:
            continue
        taken = 1 << c
        order = [c]
        frontier = [c]
        depth = 0
        while len(order) < size_target and frontier and depth < radius_cap:
            depth += 1
            nxt = []
            for u in frontier:
                for v in nbrs[u]:
                    if not ((taken | wmask) >> v & 1):
                        taken |= 1 << v
                        order.append(v)
                        nxt.append(v)
                        if len(order) == size_target:
                            break
                if len(order) == size_target:
                    break
            frontier = nxt
        if len(order) >= size_target:
            return c, VertexSet.of(order[:size_target], g.n)
    raise BallNotFound(f"no ball of size {size_target} and radius <= {radius_cap} avoids the given set")


def ball_radius(g: Graph, center: int, ball: VertexSet) -> int:
    """Eccentricity of ``center`` inside G[ball] (inf if disconnected)."""
    order, depth = g.bfs_order(center, ball.bits)
    if len(order) != len(ball):
        return math.inf
    return max(depth)


def short_path_avoiding(g: Graph, x1: SetLike, x2: SetLike, w: SetLike, length_cap: int | None = None) -> list[int]:
    """Shortest path in G - W from X1 to X2 (multi-source BFS).

    Internal vertices avoid W, X1 and X2.  Raises :class:`PathNotFound` with
    the achieved distance when the path is longer than ``length_cap``, or with
    ``distance=None`` when X2 is unreachable.
    """
    n = g.n
    a, b, wm = as_mask(x1, n), as_mask(x2, n), as_mask(w, n)
    if not a or not b:
        raise ValueError("x1 and x2 must be nonempty")
    if wm & (a | b):
        log.warning("dropping %d endpoint-set vertices from the avoided set", (wm & (a | b)).bit_count())
        wm &= ~(a | b)
    common = a & b
    if common:
        v = (common & -common).bit_length() - 1
        return [v]
    parent = {v: -1 for v in iter_bits(a)}
    q = deque(iter_bits(a))
    dist = {v: 0 for v in parent}
    nbrs = g.nbrs
    blocked = wm | a
    while q:
        u = q.popleft()
        du = dist[u]
        for v in nbrs[u]:
            if v in parent or blocked >> v & 1:
                continue
            parent[v] = u
            dist[v] = du + 1
            if b >> v & 1:
                if length_cap is not None and du + 1 > length_cap:
                    raise PathNotFound(f"shortest avoiding path has length {du + 1} > cap {length_cap}", du + 1)
                out = [v]
                while parent[out[-1]] != -1:
                    out.append(parent[out[-1]])
                return out[::-1]
            q.append(v)
    raise PathNotFound("X2 is unreachable from X1 in G - W", None)


def path_inside(g: Graph, mask: int, a: int, b: int) -> list[int]:
    """Shortest a-b path using only vertices of ``mask``."""
    if a == b:
        return [a]
    if not (mask >> a & 1 and mask >> b & 1):
        raise ValueError("endpoints must lie in the set")
    return short_path_avoiding(g, 1 << a, 1 << b, g.full_mask & ~mask)
