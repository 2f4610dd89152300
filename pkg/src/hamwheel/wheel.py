"""Disjoint-cycle harvest, chain building on cycles, wheel closing and wheel enumeration.

An l-chain (l-wheel) is a path (cycle) in which l edges have each been
replaced by a cycle through the edge's two endpoints.  Choosing one of the
two arcs of every attached cycle gives a cycle of the host graph, so an
l-wheel carries 2^l distinct Hamiltonian subsets and every one of its
vertices lies in at least 2^(l-1) of them.

Cycles are vertex lists in cyclic order.  Paths are vertex lists from one
end to the other; a path of length 0 is a single vertex.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BallNotFound, GraphError, InvariantError, PathNotFound, PipelineError
from .expander import (
    ExpanderParams,
    Probed,
    extract_expander,
    find_ball_avoiding,
    path_inside,
    short_path_avoiding,
)
from .graph import Graph, VertexSet, iter_bits

log = logging.getLogger(__name__)

Cycle = list[int]
Path = list[int]


@dataclass(frozen=True)
class PipelineParams:
    """Desk-scale stand-ins for the cycle-length window, connector cap and ball sizes."""

    Lmin: int = 16
    Lmax: int = 64
    conn_cap: int = 6
    ball_size: int = 12
    ball_radius: int = 4
    target_cycles: int = 40
    stop_fraction: Fraction = Fraction(1, 100)
    exp: ExpanderParams = field(default_factory=ExpanderParams.standard)
    buffer_fraction: Fraction = Fraction(1, 3)
    retry: int = 20
    wheel_cap: int = 20
    return_cap: int | None = None
    greedy: bool = True
    dfs_budget: int = 4000

    def __post_init__(self):
        if not 3 <= self.Lmin <= self.Lmax:
            raise GraphError(f"need 3 <= Lmin <= Lmax, got Lmin={self.Lmin}, Lmax={self.Lmax}")
        if self.conn_cap < 1:
            raise GraphError("conn_cap must be >= 1")
        if not 0 < Fraction(self.stop_fraction) < 1:
            raise GraphError("stop_fraction must lie in (0, 1)")
        if not 0 < Fraction(self.buffer_fraction) < 1:
            raise GraphError("buffer_fraction must lie in (0, 1)")
        if self.ball_size < 1 or self.ball_radius < 0 or self.target_cycles < 1 or self.retry < 1:
            raise GraphError("ball_size, target_cycles and retry must be positive")

    @classmethod
    def small(cls, **kw) -> "PipelineParams":
        """Parameters for graphs with a few dozen vertices: triangles and short connectors."""
        base = dict(Lmin=3, Lmax=6, conn_cap=3, ball_size=3, ball_radius=2, target_cycles=12)
        base.update(kw)
        return cls(**base)

    def to_dict(self) -> dict:
        return {
            "Lmin": self.Lmin,
            "Lmax": self.Lmax,
            "conn_cap": self.conn_cap,
            "ball_size": self.ball_size,
            "ball_radius": self.ball_radius,
            "target_cycles": self.target_cycles,
            "stop_fraction": str(self.stop_fraction),
            "buffer_fraction": str(self.buffer_fraction),
            "retry": self.retry,
            "wheel_cap": self.wheel_cap,
            "return_cap": self.return_cap,
            "greedy": self.greedy,
            "dfs_budget": self.dfs_budget,
            "exp": self.exp.to_dict(),
        }


# -- structural checks -------------------------------------------------------


def is_cycle(g: Graph, c: Sequence[int]) -> bool:
    if len(c) < 3 or len(set(c)) != len(c):
        return False
    return all(g.has_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def is_path(g: Graph, p: Sequence[int]) -> bool:
    if not p or len(set(p)) != len(p):
        return False
    return all(g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1))


def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def arcs(c: Cycle, s: int, t: int) -> tuple[Path, Path]:
    """The two s-t arcs of cycle ``c`` (forward and backward), both including s and t."""
    i, j = c.index(s), c.index(t)
    if i == j:
        raise GraphError("attachment vertices must differ")
    L = len(c)
    fwd = [c[(i + k) % L] for k in range((j - i) % L + 1)]
    bwd = [c[(i - k) % L] for k in range((i - j) % L + 1)]
    return fwd, bwd


# -- Step 1: harvesting disjoint cycles ----------------------------------------


@dataclass
class HarvestResult:
    cycles: list[Cycle]
    greedy_found: int = 0
    constructed: int = 0
    failures: dict = field(default_factory=dict)
    failed_stage: str | None = None

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def to_dict(self) -> dict:
        return {
            "cycles": self.cycles,
            "lengths": [len(c) for c in self.cycles],
            "greedy_found": self.greedy_found,
            "constructed": self.constructed,
            "failures": self.failures,
            "failed_stage": self.failed_stage,
        }


def _bfs_dist(g: Graph, source: int, blocked: int, cap: int) -> dict[int, int]:
    dist = {source: 0}
    frontier = [source]
    nbrs = g.nbrs
    d = 0
    while frontier and d < cap:
        d += 1
        nxt = []
        for u in frontier:
            for v in nbrs[u]:
                if v not in dist and not blocked >> v & 1:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


def _cycle_through(g: Graph, v: int, blocked: int, lmin: int, lmax: int, budget: int) -> Cycle | None:
    """Bounded DFS for a cycle through ``v`` of length in [lmin, lmax] avoiding ``blocked``.

    Neighbour order is guided by the distance back to ``v``: move away while
    the path is short, head back once a closing edge could land in the window.
    """
    dist = _bfs_dist(g, v, blocked, lmax)
    nbrs = g.nbrs
    path = [v]
    on = {v}
    stack = []
    nodes = 0

    def ordered(u: int, depth: int) -> list[int]:
        cand = [w for w in nbrs[u] if w not in on and w in dist and depth + 1 + dist[w] <= lmax]
        returning = depth + 1 + 1 >= lmin
        cand.sort(key=lambda w: (dist[w] if returning else -dist[w], w))
        return cand

    stack.append(iter(ordered(v, 0)))
    while stack:
        nodes += 1
        if nodes > budget:
            return None
        u = path[-1]
        depth = len(path) - 1
        if depth >= lmin - 1 and depth >= 2 and g.has_edge(u, v):
            return list(path)
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on.discard(path.pop())
            continue
        if len(path) >= lmax:
            continue
        path.append(nxt)
        on.add(nxt)
        stack.append(iter(ordered(nxt, depth + 1)))
    return None


def _construct_cycle(g: Graph, used: int, p: PipelineParams, rng: random.Random) -> tuple[Cycle | None, str]:
    """Ball-and-path constructor: two balls, a connecting path lengthened through fresh balls, then closed.

    Returns (cycle, "") or (None, failing_stage).
    """
    n = g.n
    centers = [v for v in range(n) if not used >> v & 1]
    rng.shuffle(centers)
    try:
        _, a_ball = find_ball_avoiding(g, used, p.ball_size, p.ball_radius, centers)
        _, b_ball = find_ball_avoiding(g, used | a_ball.bits, p.ball_size, p.ball_radius, centers)
    except BallNotFound:
        return None, "balls"
    A, B = a_ball.bits, b_ball.bits
    try:
        P = short_path_avoiding(g, A, B, used, p.conn_cap)
    except PathNotFound:
        return None, "connect"
    # Closing adds at least one edge, so stop lengthening at Lmin - 1.
    lo = p.Lmin - 1
    # P runs from a in A to b in B; P meets A and B only in a and b.
    steps = 0
    while len(P) - 1 < lo:
        steps += 1
        if steps > 4 * p.Lmax:
            return None, "lengthen"
        pmask = _mask(P)
        try:
            _, x_ball = find_ball_avoiding(g, used | A | B | pmask, p.ball_size, p.ball_radius, centers)
        except BallNotFound:
            return None, "lengthen"
        X = x_ball.bits
        try:
            Q = short_path_avoiding(g, X, A | B, used | (pmask & ~(A | B)), p.conn_cap)
        except PathNotFound:
            return None, "lengthen"
        d = Q[-1]
        if B >> d & 1:
            inner = path_inside(g, B, d, P[-1])
            P = Q + inner[1:] + P[::-1][1:]
            A, B = X, A
        else:
            inner = path_inside(g, A, d, P[0])
            P = Q + inner[1:] + P[1:]
            A, B = X, B
        if not is_path(g, P):
            raise InvariantError("lengthened path is not simple")
    pmask = _mask(P)
    try:
        Q2 = short_path_avoiding(g, A, B, used | (pmask & ~(A | B)), p.conn_cap)
    except PathNotFound:
        return None, "close"
    in_a = path_inside(g, A, Q2[0], P[0])
    in_b = path_inside(g, B, P[-1], Q2[-1])
    cyc = in_a[:-1] + P + in_b[1:] + Q2[::-1][1:-1]
    if not is_cycle(g, cyc) or _mask(cyc) & used:
        return None, "close"
    if not p.Lmin <= len(cyc) <= p.Lmax:
        return None, "window"
    return cyc, ""


def harvest_cycles(g: Graph, p: PipelineParams, seed: int = 0) -> HarvestResult:
    """A maximal-effort collection of pairwise disjoint cycles with lengths in [Lmin, Lmax].

    In-window cycles found by bounded DFS are accepted greedily first (start
    vertices in seeded order); the ball-and-path constructor then runs until
    ``target_cycles`` is reached or it has failed ``retry`` times.
    """
    rng = random.Random(f"{seed}:harvest")
    res = HarvestResult([])
    used = 0
    if p.greedy:
        starts = list(range(g.n))
        rng.shuffle(starts)
        for v in starts:
            if len(res.cycles) >= p.target_cycles:
                break
            if used >> v & 1:
                continue
            c = _cycle_through(g, v, used, p.Lmin, p.Lmax, p.dfs_budget)
            if c is not None:
                res.cycles.append(c)
                used |= _mask(c)
        res.greedy_found = len(res.cycles)
    failures = 0
    while len(res.cycles) < p.target_cycles and failures < p.retry:
        c, stage = _construct_cycle(g, used, p, rng)
        if c is None:
            failures += 1
            res.failures[stage] = res.failures.get(stage, 0) + 1
            continue
        res.cycles.append(c)
        res.constructed += 1
        used |= _mask(c)
    if not res.cycles:
        res.failed_stage = max(res.failures, key=res.failures.get) if res.failures else "greedy"
    _check_disjoint_cycles(g, res.cycles, p)
    return res


def _check_disjoint_cycles(g: Graph, cycles: Sequence[Cycle], p: PipelineParams | None = None) -> None:
    seen = 0
    for c in cycles:
        if not is_cycle(g, c):
            raise InvariantError(f"not a cycle of the graph: {c}")
        if p is not None and not p.Lmin <= len(c) <= p.Lmax:
            raise InvariantError(f"cycle length {len(c)} outside [{p.Lmin}, {p.Lmax}]")
        m = _mask(c)
        if seen & m:
            raise InvariantError("harvested cycles overlap")
        seen |= m


# -- Step 2: DFS on cycles -------------------------------------------------------


@dataclass
class Chain:
    """Cycles C_1..C_l with connectors ``connectors[i]`` running from C_i to C_{i+1}."""

    cycles: list[Cycle]
    connectors: list[Path]

    @property
    def ell(self) -> int:
        return len(self.cycles)

    def attachments(self) -> list[tuple[int | None, int | None]]:
        """(in, out) attachment vertex per cycle; None at the two ends."""
        out = []
        for i in range(len(self.cycles)):
            a = self.connectors[i - 1][-1] if i > 0 else None
            b = self.connectors[i][0] if i < len(self.connectors) else None
            out.append((a, b))
        return out

    def validate(self, g: Graph, conn_cap: int | None = None, all_cycles: Sequence[Cycle] | None = None) -> None:
        if len(self.connectors) != max(0, len(self.cycles) - 1):
            raise InvariantError("an l-chain needs exactly l-1 connectors")
        _check_disjoint_cycles(g, self.cycles)
        cyc_mask = _mask(v for c in (all_cycles if all_cycles is not None else self.cycles) for v in c)
        inner_seen = 0
        for i, pth in enumerate(self.connectors):
            if not is_path(g, pth) or len(pth) < 2:
                raise InvariantError(f"connector {i} is not a path of positive length")
            if conn_cap is not None and len(pth) - 1 > conn_cap:
                raise InvariantError(f"connector {i} has length {len(pth) - 1} > {conn_cap}")
            if pth[0] not in self.cycles[i] or pth[-1] not in self.cycles[i + 1]:
                raise InvariantError(f"connector {i} does not join cycles {i} and {i + 1}")
            inner = _mask(pth[1:-1])
            if inner & cyc_mask or inner & inner_seen:
                raise InvariantError(f"connector {i} meets a cycle or another connector")
            inner_seen |= inner
        for i, (a, b) in enumerate(self.attachments()):
            if a is not None and a == b:
                raise InvariantError(f"cycle {i} has coinciding attachment vertices")

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "cycles": self.cycles,
            "connectors": self.connectors,
            "attachments": [list(x) for x in self.attachments()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Chain":
        return cls([list(c) for c in d["cycles"]], [list(p) for p in d["connectors"]])


@dataclass
class ChainSearchState:
    S: list[int]
    U: list[int]
    X: list[int]
    P: list[Path]
    steps: int = 0

    def to_dict(self) -> dict:
        return {"S": self.S, "U": self.U, "X": self.X, "P": self.P, "steps": self.steps}


def _find_connector(
    g: Graph, sources: int, owner: Sequence[int], targets: set[int], blocked: int, cap: int
) -> Path | None:
    """Shortest connector from ``sources`` to the lowest-index target cycle reachable within ``cap``.

    Internal vertices avoid every cycle vertex and ``blocked``.
    """
    nbrs = g.nbrs
    parent = {v: -1 for v in iter_bits(sources)}
    hits: dict[int, tuple[int, int]] = {}
    frontier = list(iter_bits(sources))
    depth = 0
    while frontier and depth < cap:
        nxt = []
        for u in frontier:
            for v in nbrs[u]:
                if v in parent:
                    continue
                o = owner[v]
                if o >= 0:
                    if o in targets and o not in hits:
                        hits[o] = (u, v)
                    continue
                if blocked >> v & 1:
                    continue
                parent[v] = u
                nxt.append(v)
        frontier = nxt
        depth += 1
    if not hits:
        return None
    u, v = hits[min(hits)]
    out = [v, u]
    while parent[out[-1]] != -1:
        out.append(parent[out[-1]])
    return out[::-1]


def _chain_of(cycles: Sequence[Cycle], S: list[int], in_paths: dict[int, Path]) -> Chain:
    return Chain([list(cycles[i]) for i in S], [list(in_paths[i]) for i in S[1:]])


def build_chain(g: Graph, cycles: Sequence[Cycle], p: PipelineParams, audit: bool = True) -> tuple[Chain, ChainSearchState]:
    """DFS on the cycle collection; returns the longest chain seen and the final search state.

    Connectors leave the top cycle from any vertex other than its incoming
    attachment, so every cycle of the chain has two distinct attachments.
    """
    _check_disjoint_cycles(g, cycles)
    if not cycles:
        raise PipelineError("chain", "no cycles to connect")
    n = g.n
    owner = [-1] * n
    for i, c in enumerate(cycles):
        for v in c:
            owner[v] = i
    cyc_masks = [_mask(c) for c in cycles]
    state = ChainSearchState(S=[], U=list(range(len(cycles))), X=[], P=[])
    in_paths: dict[int, Path] = {}
    path_mask = 0
    best = _chain_of(cycles, [0], {})
    stop = Fraction(p.stop_fraction) * len(cycles)
    while state.U and len(state.U) > stop:
        state.steps += 1
        if not state.S:
            state.S.append(state.U.pop(0))
        else:
            top = state.S[-1]
            src = cyc_masks[top]
            if top in in_paths:
                src &= ~(1 << in_paths[top][-1])
            conn = _find_connector(g, src, owner, set(state.U), path_mask, p.conn_cap)
            if conn is None:
                state.X.append(state.S.pop())
            else:
                nxt = owner[conn[-1]]
                state.U.remove(nxt)
                state.S.append(nxt)
                state.P.append(conn)
                in_paths[nxt] = conn
                path_mask |= _mask(conn[1:-1])
        if len(state.S) > best.ell:
            best = _chain_of(cycles, state.S, in_paths)
        if audit:
            if len(state.P) > len(cycles) - len(state.U):
                raise InvariantError("more connectors than explored cycles")
            if sorted(state.S + state.U + state.X) != list(range(len(cycles))):
                raise InvariantError("S, U, X do not partition the cycles")
            _chain_of(cycles, state.S, in_paths).validate(g, p.conn_cap, cycles)
    best.validate(g, p.conn_cap, cycles)
    return best, state


def dfs_observation_holds(g: Graph, cycles: Sequence[Cycle], state: ChainSearchState, p: PipelineParams) -> bool:
    """No connector within cap joins an explored cycle to an unexplored one (sources as in the search)."""
    owner = [-1] * g.n
    for i, c in enumerate(cycles):
        for v in c:
            owner[v] = i
    path_mask = _mask(v for q in state.P for v in q[1:-1])
    in_att = {q[-1] for q in state.P}
    targets = set(state.U)
    for x in state.X:
        src = _mask(v for v in cycles[x] if v not in in_att)
        if src and _find_connector(g, src, owner, targets, path_mask, p.conn_cap) is not None:
            return False
    return True


# -- Step 3: closing the chain into a wheel ----------------------------------------


@dataclass
class AttachedCycle:
    cycle: Cycle
    s: int
    t: int

    def arcs(self) -> tuple[Path, Path]:
        return arcs(self.cycle, self.s, self.t)


@dataclass
class Wheel:
    """Attached cycles with links; ``links[k]`` runs from ``attached[k].t`` to ``attached[k+1].s`` (cyclically)."""

    attached: list[AttachedCycle]
    links: list[Path]
    n: int
    graph: Graph | None = field(default=None, repr=False, compare=False)

    @property
    def ell(self) -> int:
        return len(self.attached)

    @property
    def base(self) -> list[int]:
        """Vertices shared by every arc choice: all link vertices (attachments included)."""
        return sorted({v for q in self.links for v in q})

    def interiors(self) -> list[tuple[list[int], list[int]]]:
        return [(a[1:-1], b[1:-1]) for a, b in (c.arcs() for c in self.attached)]

    def vertices(self) -> list[int]:
        return sorted({v for c in self.attached for v in c.cycle} | set(self.base))

    def cycle_for(self, choice: int) -> Cycle:
        """The host-graph cycle picking arc B of attached cycle k iff bit k of ``choice`` is set."""
        walk: list[int] = []
        for k, ac in enumerate(self.attached):
            fwd, bwd = ac.arcs()
            arc = bwd if choice >> k & 1 else fwd
            walk += arc[:-1]
            walk += self.links[k][:-1]
        return walk

    def validate(self, g: Graph | None = None) -> None:
        g = g or self.graph
        if g is None:
            raise GraphError("validating a wheel needs its host graph")
        if self.ell < 1 or len(self.links) != self.ell:
            raise InvariantError("a wheel needs l >= 1 attached cycles and l links")
        for k, ac in enumerate(self.attached):
            if not is_cycle(g, ac.cycle) or ac.s == ac.t or ac.s not in ac.cycle or ac.t not in ac.cycle:
                raise InvariantError(f"attached cycle {k} is malformed")
            q = self.links[k]
            if not is_path(g, q) or q[0] != ac.t or q[-1] != self.attached[(k + 1) % self.ell].s:
                raise InvariantError(f"link {k} does not join cycle {k} to cycle {(k + 1) % self.ell}")
        base = _mask(self.base)
        seen = 0
        for a, b in self.interiors():
            m = _mask(a) | _mask(b)
            if m & (seen | base):
                raise InvariantError("arc interiors overlap")
            seen |= m
        for choice in (0, (1 << self.ell) - 1):
            if not is_cycle(g, self.cycle_for(choice)):
                raise InvariantError("an arc choice does not give a cycle of the host graph")

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "cycles": [c.cycle for c in self.attached],
            "attachments": [[c.s, c.t] for c in self.attached],
            "links": self.links,
            "base": self.base,
        }

    @classmethod
    def from_dict(cls, d: dict, g: Graph) -> "Wheel":
        att = [AttachedCycle(list(c), s, t) for c, (s, t) in zip(d["cycles"], d["attachments"])]
        return cls(att, [list(q) for q in d["links"]], g.n, g)

    def relabel(self, mapping: Sequence[int], g: Graph) -> "Wheel":
        att = [AttachedCycle([mapping[v] for v in c.cycle], mapping[c.s], mapping[c.t]) for c in self.attached]
        return Wheel(att, [[mapping[v] for v in q] for q in self.links], g.n, g)


def close_wheel(g: Graph, chain: Chain, p: PipelineParams) -> Wheel:
    """Close an m-chain (m >= 3) into a wheel through a return path that avoids the middle."""
    m = chain.ell
    if m < 3:
        raise PipelineError("close", f"closing needs a chain with at least 3 cycles, got {m}", {"chain": chain.to_dict()})
    b = max(1, min(m - 2, int(Fraction(p.buffer_fraction) * m)))
    k1 = (m - b) // 2
    x1 = _mask(v for c in chain.cycles[:k1] for v in c)
    x2 = _mask(v for c in chain.cycles[k1 + b :] for v in c)
    w = _mask(v for c in chain.cycles[k1 : k1 + b] for v in c) | _mask(v for q in chain.connectors for v in q[1:-1])
    # Prefer endpoints off the attachment vertices, so no end cycle is lost.
    ex1 = _mask(q[0] for q in chain.connectors[:k1])
    ex2 = _mask(q[-1] for q in chain.connectors[k1 + b - 1 :])
    ret = None
    if x1 & ~ex1 and x2 & ~ex2:
        try:
            ret = short_path_avoiding(g, x1 & ~ex1, x2 & ~ex2, w | ex1 | ex2, p.return_cap)
        except PathNotFound:
            ret = None
    try:
        ret = ret or short_path_avoiding(g, x1, x2, w, p.return_cap)
    except PathNotFound as exc:
        raise PipelineError(
            "close",
            f"no return path between X1 ({k1} cycles) and X2 ({m - k1 - b} cycles) avoiding {b} buffer cycles: {exc}",
            {"chain": chain.to_dict(), "partition": [k1, b, m - k1 - b]},
        ) from None
    a, z = ret[0], ret[-1]
    i = next(idx for idx, c in enumerate(chain.cycles) if a in c)
    j = next(idx for idx, c in enumerate(chain.cycles) if z in c)
    att = chain.attachments()
    attached = []
    for idx in range(i, j + 1):
        s = a if idx == i else att[idx][0]
        t = z if idx == j else att[idx][1]
        attached.append(AttachedCycle(list(chain.cycles[idx]), s, t))
    links = [list(chain.connectors[idx]) for idx in range(i, j)] + [ret[::-1]]
    # An end cycle whose two attachments coincide hangs off a single vertex: drop it
    # and merge the two links that met there.
    if attached[-1].s == attached[-1].t:
        attached.pop()
        tail = links.pop()
        links[-1] = links[-1] + tail[1:]
    if attached[0].s == attached[0].t:
        attached.pop(0)
        head = links.pop(0)
        links[-1] = links[-1] + head[1:]
    if not attached:
        raise PipelineError("close", "both end cycles were deleted and nothing remains", {"chain": chain.to_dict()})
    wheel = Wheel(attached, links, g.n, g)
    wheel.validate(g)
    return wheel


# -- enumeration ------------------------------------------------------------------


def enumerate_wheel_subsets(
    w: Wheel, cap: int = 20, verify_exact_upto: int = 16, walk_upto: int = 12, walk_samples: int = 256
) -> set[VertexSet]:
    """Vertex sets of the 2^l arc-choice cycles, deduplicated and each verified Hamiltonian.

    ``Wheel.validate`` proves every arc choice is a cycle: the all-A and all-B
    choices are checked as host-graph cycles and arc interiors are pairwise
    disjoint and avoid the links, so any mixture is a cycle too.  On top of
    that, each choice's witness cycle is walked explicitly when l <= walk_upto
    (a seeded sample of ``walk_samples`` choices otherwise), and sets of at most
    ``verify_exact_upto`` vertices are re-checked with the exact Hamiltonicity
    test.  Masks are produced in Gray-code order, one XOR per choice.
    """
    from .hamcount import is_hamiltonian

    if w.ell > cap:
        raise GraphError(f"wheel has l={w.ell} > cap={cap}")
    g = w.graph
    if g is None:
        raise GraphError("wheel carries no host graph")
    w.validate(g)
    ell = w.ell
    if ell <= walk_upto:
        walk = range(1 << ell)
    else:
        walk = random.Random(f"{ell}:{g.n}:walk").sample(range(1 << ell), min(walk_samples, 1 << ell))
    for choice in walk:
        c = w.cycle_for(choice)
        if not is_cycle(g, c):
            raise InvariantError(f"arc choice {choice} is not a cycle of the host graph")
        if len(c) <= verify_exact_upto and not is_hamiltonian(g.induced(_mask(c))):
            raise InvariantError(f"arc choice {choice} failed the exact Hamiltonicity check")

    toggles = [_mask(a) ^ _mask(b) for a, b in w.interiors()]
    mask = _mask(w.base)
    for a, _ in w.interiors():
        mask |= _mask(a)
    out = {VertexSet(mask, g.n)}
    for i in range(1, 1 << ell):
        mask ^= toggles[(i & -i).bit_length() - 1]
        out.add(VertexSet(mask, g.n))
    return out


def vertex_tally(subsets, n: int) -> list[int]:
    tally = [0] * n
    for s in subsets:
        for v in s:
            tally[v] += 1
    return tally


def random_wheel(
    ell: int, seed: int = 0, max_arc: int = 3, max_link: int = 2, nonempty_arcs: bool = True, shared: bool = False
) -> tuple[Graph, Wheel]:
    """A hand-built l-wheel as its own host graph, for tests and demos.

    Arc interiors have 1..max_arc vertices (one arc may be empty when
    ``nonempty_arcs`` is False); links have 0..max_link internal vertices.
    With ``shared`` (and l >= 3) consecutive cycles may share their
    attachment vertex through a link of length 0.
    """
    if ell < 1:
        raise GraphError("ell must be >= 1")
    rng = random.Random(f"{seed}:wheel")
    share = [shared and ell >= 3 and rng.random() < 0.3 for _ in range(ell)]
    count = 0

    def new() -> int:
        nonlocal count
        count += 1
        return count - 1

    s0 = new()
    s = s0
    attached, links, edges = [], [], []
    for k in range(ell):
        last = k == ell - 1
        a_in = [new() for _ in range(rng.randint(1 if nonempty_arcs else 0, max_arc))]
        b_in = [new() for _ in range(rng.randint(1, max_arc))]
        t = s0 if last and share[k] else new()
        cyc = [s] + a_in + [t] + b_in[::-1]
        edges += [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
        attached.append(AttachedCycle(cyc, s, t))
        if share[k]:
            links.append([t])
            s = t
            continue
        inner = [new() for _ in range(rng.randint(1 if ell == 1 else 0, max_link))]
        nxt = s0 if last else new()
        q = [t] + inner + [nxt]
        edges += list(zip(q, q[1:]))
        links.append(q)
        s = nxt
    g = Graph.from_edges(count, edges)
    w = Wheel(attached, links, g.n, g)
    w.validate(g)
    return g, w


# -- end to end ---------------------------------------------------------------------


@dataclass
class HeavyVertexResult:
    vertex: int
    lower_bound: int
    wheel: Wheel
    chain: Chain
    harvest: HarvestResult
    expander_vertices: VertexSet
    expander_order_vs_alpha_d: tuple[int, float]
    verified: dict
    timing: dict

    @property
    def ell(self) -> int:
        return self.wheel.ell

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "lower_bound": str(self.lower_bound),
            "ell": self.ell,
            "wheel": self.wheel.to_dict(),
            "chain": self.chain.to_dict(),
            "harvest": {k: v for k, v in self.harvest.to_dict().items() if k != "cycles"},
            "expander_order": len(self.expander_vertices),
            "alpha_d": self.expander_order_vs_alpha_d[1],
            "verified": self.verified,
            "timing": self.timing,
        }


def heavy_vertex(
    g: Graph,
    alpha=Fraction(1, 5),
    p: PipelineParams | None = None,
    seed: int = 0,
    probed: Probed | None = None,
    spot_checks: int = 64,
) -> HeavyVertexResult:
    """Expander extraction, harvest, chain, wheel; a wheel vertex with 2^(l-1) certified Hamiltonian subsets."""
    p = p or PipelineParams()
    alpha = Fraction(alpha)
    timing = {}
    t0 = time.perf_counter()
    try:
        ext = extract_expander(g, p.exp, probed=probed or Probed(seed=seed))
    except Exception as exc:
        raise PipelineError("extract", str(exc)) from exc
    timing["extract"] = time.perf_counter() - t0
    h = ext.graph
    verts = ext.vertices.sorted()
    alpha_d = float(alpha * g.avg_degree())

    t0 = time.perf_counter()
    hv = harvest_cycles(h, p, seed)
    timing["harvest"] = time.perf_counter() - t0
    if not hv.cycles:
        raise PipelineError("harvest", f"no cycle constructible (failed at {hv.failed_stage})", {"harvest": hv.to_dict()})

    t0 = time.perf_counter()
    chain, _ = build_chain(h, hv.cycles, p)
    timing["chain"] = time.perf_counter() - t0
    if chain.ell < 3:
        raise PipelineError("chain", f"longest chain has only {chain.ell} cycles", {"harvest": hv.to_dict(), "chain": chain.to_dict()})

    t0 = time.perf_counter()
    wh = close_wheel(h, chain, p).relabel(verts, g)
    chain_g = Chain([[verts[v] for v in c] for c in chain.cycles], [[verts[v] for v in q] for q in chain.connectors])
    timing["close"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    wh.validate(g)
    vertex = wh.vertices()[0]
    bound = 1 << (wh.ell - 1)
    if wh.ell <= p.wheel_cap:
        subsets = enumerate_wheel_subsets(wh, p.wheel_cap)
        hits = sum(1 for s in subsets if vertex in s)
        verified = {"mode": "enumeration", "subsets": len(subsets), "containing_vertex": hits}
        if hits < bound:
            raise InvariantError("enumeration found fewer subsets through the vertex than the bound")
    else:
        rng = random.Random(f"{seed}:spot")
        ok = 0
        for _ in range(spot_checks):
            c = wh.cycle_for(rng.getrandbits(wh.ell))
            if not is_cycle(g, c):
                raise InvariantError("spot-checked arc choice is not a cycle")
            ok += 1
        verified = {"mode": "spot-check", "samples": ok}
    timing["verify"] = time.perf_counter() - t0
    return HeavyVertexResult(vertex, bound, wh, chain_g, hv, ext.vertices, (len(verts), alpha_d), verified, timing)
