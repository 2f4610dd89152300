"""Beta-graphs: verification, DFS long cycles in large subsets, and the resulting count bound.

A graph on n vertices is a beta-graph when every two disjoint vertex sets,
both of size greater than beta*n, are joined by an edge.  Since having an
edge is monotone under taking supersets it suffices to look at sets of size
exactly ``q = floor(beta*n) + 1``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .crux import as_fraction
from .errors import GraphError, NotBetaGraph, NotFoundError
from .expander import EXHAUSTIVE, Probed
from .graph import Graph, as_mask, iter_bits

EXHAUSTIVE_MAX_N = 22


@dataclass(frozen=True)
class BetaParams:
    beta: Fraction
    n: int

    def __post_init__(self):
        b = as_fraction(self.beta)
        object.__setattr__(self, "beta", b)
        if not 0 < b < 1:
            raise GraphError(f"beta must lie in (0, 1), got {b}")
        if self.n < 0:
            raise GraphError("n must be nonnegative")

    @property
    def q(self) -> int:
        """Smallest integer strictly larger than beta*n."""
        return math.floor(self.beta * self.n) + 1

    @property
    def beta_n_floor(self) -> int:
        return math.floor(self.beta * self.n)


@dataclass
class BetaCheck:
    holds: bool
    level: str
    q: int
    pair: tuple[list[int], list[int]] | None = None
    checked: int = 0

    def to_dict(self) -> dict:
        return {
            "check": "beta_graph",
            "holds": self.holds,
            "level": self.level,
            "q": self.q,
            "violating_pair": [list(x) for x in self.pair] if self.pair else None,
            "checked": self.checked,
        }


def _witness(g: Graph, amask: int, q: int) -> tuple[list[int], list[int]] | None:
    """If the non-neighbours of A (outside A) number at least q, return (A, lowest q of them)."""
    rest = g.full_mask & ~amask & ~g.neighborhood(amask)
    if rest.bit_count() < q:
        return None
    b = []
    for v in iter_bits(rest):
        b.append(v)
        if len(b) == q:
            break
    return sorted(iter_bits(amask)), b


def check_beta_graph(g: Graph, p: BetaParams, level=EXHAUSTIVE) -> BetaCheck:
    """Exhaustively (n <= 22) or by probing, look for two disjoint q-sets with no edge between them.

    Exhaustive mode reports the violating pair whose first set has the lowest mask.
    """
    n = g.n
    q = p.q
    if 2 * q > n:
        return BetaCheck(True, level if level == EXHAUSTIVE else "probed", q)
    if level == EXHAUSTIVE:
        if n > EXHAUSTIVE_MAX_N:
            raise GraphError(f"exhaustive beta check needs n <= {EXHAUSTIVE_MAX_N}, got {n}")
        size = 1 << n
        nb = np.zeros(size, dtype=np.uint32)
        for v in range(n):
            nb[1 << v : 1 << (v + 1)] = nb[: 1 << v] | np.uint32(g.adj[v] | (1 << v))
        masks = np.arange(size, dtype=np.uint32)
        sel = np.bitwise_count(masks) == q
        free = np.bitwise_count(~nb & np.uint32(g.full_mask))
        bad = np.flatnonzero(sel & (free >= q))
        res = BetaCheck(not bad.size, EXHAUSTIVE, q, checked=int(sel.sum()))
        if bad.size:
            res.pair = _witness(g, int(bad[0]), q)
        return res
    if not isinstance(level, Probed):
        raise ValueError(f"unknown level {level!r}")
    rng = random.Random(f"beta:{level.seed}")
    res = BetaCheck(True, "probed", q)
    candidates = []
    centers = rng.sample(range(n), min(n, level.probes))
    for c in centers:
        order, _ = g.bfs_order(c)
        candidates.append(sum(1 << v for v in order[:q]))
    for _ in range(level.probes):
        candidates.append(sum(1 << v for v in rng.sample(range(n), q)))
    for amask in candidates:
        res.checked += 1
        w = _witness(g, amask, q)
        if w is not None:
            res.holds = False
            res.pair = w
            return res
    return res


def ndl_to_beta(info, beta, tol: float | None = None) -> bool:
    """Whether d / lambda >= 1/beta^2, with lambda inflated by the eigensolver tolerance."""
    beta = as_fraction(beta)
    lam = info.lam + (info.tol if tol is None else tol)
    return info.d * float(beta) ** 2 >= lam


# -- long cycles by DFS ------------------------------------------------------------


@dataclass
class LongCycle:
    cycle: list[int]
    subset_size: int
    longest_stack: int
    guaranteed_bound: int
    strong_bound: float
    mode: str
    steps: int = 0

    @property
    def length(self) -> int:
        return len(self.cycle)

    @property
    def strong_met(self) -> bool:
        return self.length >= self.strong_bound

    def to_dict(self) -> dict:
        return {
            "cycle": self.cycle,
            "length": self.length,
            "subset_size": self.subset_size,
            "longest_stack": self.longest_stack,
            "guaranteed_bound": self.guaranteed_bound,
            "strong_bound": self.strong_bound,
            "strong_bound_met": self.strong_met,
            "mode": self.mode,
        }


def _pair_of(umask: int, xmask: int, q: int) -> tuple[frozenset, frozenset]:
    take = lambda m: frozenset(list(iter_bits(m))[:q])
    return take(umask), take(xmask)


def long_cycle_in_subset(g: Graph, s, p: BetaParams, mode: str = "guaranteed", audit: bool | None = None) -> LongCycle:
    """DFS on G[s]; close the longest stack path with its farthest-reaching chord.

    DFS never leaves an edge between explored and unvisited vertices, so
    both being larger than beta*n exposes a non-beta pair; this is raised as
    :class:`NotBetaGraph`.  Otherwise the stack reaches |s| - 2 floor(beta n)
    vertices and the closing chord gives a cycle on at least |s| - 4 floor(beta n).
    """
    if mode not in ("guaranteed", "best-effort"):
        raise ValueError("mode must be 'guaranteed' or 'best-effort'")
    n = g.n
    smask = as_mask(s, n)
    size = smask.bit_count()
    bn = p.beta * p.n
    if mode == "guaranteed" and not size > 4 * bn:
        raise GraphError(f"guaranteed mode needs |s| > 4 beta n = {float(4 * bn)}, got {size}")
    if mode == "best-effort" and not size > 3 * bn:
        raise GraphError(f"best-effort mode needs |s| > 3 beta n = {float(3 * bn)}, got {size}")
    q = p.q
    audit = n <= 200 if audit is None else audit
    adj = g.adj
    unvisited = smask
    explored = 0
    stack: list[int] = []
    best: list[int] = []
    steps = 0
    while unvisited or stack:
        steps += 1
        if not stack:
            v = (unvisited & -unvisited).bit_length() - 1
            unvisited &= ~(1 << v)
            stack.append(v)
        else:
            top = stack[-1]
            nxt = adj[top] & unvisited
            if nxt:
                v = (nxt & -nxt).bit_length() - 1
                unvisited &= ~(1 << v)
                stack.append(v)
            else:
                explored |= 1 << stack.pop()
        if len(stack) > len(best):
            best = list(stack)
        if unvisited.bit_count() >= q and explored.bit_count() >= q:
            raise NotBetaGraph("DFS left two large sets with no edge between them", _pair_of(unvisited, explored, q))
        if audit:
            for v in iter_bits(explored):
                if adj[v] & unvisited:
                    raise AssertionError("DFS invariant broken: an explored-unvisited edge")
    cyc = _close_path(g, best)
    if cyc is None:
        if len(best) >= 2 * q:
            a, b = frozenset(best[:q]), frozenset(best[-q:])
            raise NotBetaGraph("no edge between the two ends of the longest DFS path", (a, b))
        raise NotFoundError("the longest DFS path has no chord closing a cycle")
    guaranteed = size - 4 * p.beta_n_floor
    res = LongCycle(cyc, size, len(best), guaranteed, float(size - 3 * bn), mode, steps)
    _check_cycle(g, cyc, smask)
    if res.length < guaranteed:
        raise AssertionError(f"cycle of length {res.length} misses the guaranteed bound {guaranteed}")
    return res


def _close_path(g: Graph, path: list[int]) -> list[int] | None:
    """Longest cycle path[i..j] closed by an edge path[i]-path[j] with j - i >= 2."""
    pos = {v: i for i, v in enumerate(path)}
    best = None
    for i, v in enumerate(path):
        if best is not None and len(path) - 1 - i <= best[1] - best[0]:
            break
        far = max((pos[w] for w in g.neighbors(v) if w in pos), default=-1)
        if far - i >= 2 and (best is None or far - i > best[1] - best[0]):
            best = (i, far)
    if best is None:
        return None
    return path[best[0] : best[1] + 1]


def _check_cycle(g: Graph, cyc: list[int], smask: int) -> None:
    if len(cyc) < 3 or len(set(cyc)) != len(cyc):
        raise AssertionError("returned cycle is not simple")
    for i, v in enumerate(cyc):
        if not smask >> v & 1 or not g.has_edge(v, cyc[(i + 1) % len(cyc)]):
            raise AssertionError("returned cycle leaves the subset or uses a non-edge")


# -- counting bound ------------------------------------------------------------------


def _ceil_pow2(e: Fraction) -> int:
    """Smallest integer k with k >= 2^e, for rational e >= 0."""
    a, b = e.numerator, e.denominator
    target = 1 << a
    lo, hi = 1, 1 << (a // b + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**b >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass
class BetaBound:
    n: int
    beta: Fraction
    binomial_bound: Fraction
    power_exponent: Fraction | None
    power_bound: int | None
    check: BetaCheck
    samples: list[dict] = field(default_factory=list)
    distinct_cycles: int = 0
    exact_h: int | None = None
    neighbourhood_diagnostic: dict | None = None

    @property
    def bound(self) -> int:
        """The integer lower bound ceil(C(n, n/2) / C(n/2 + k, k))."""
        f = self.binomial_bound
        return -((-f.numerator) // f.denominator)

    @property
    def holds(self) -> bool | None:
        if self.exact_h is None:
            return None
        return self.exact_h >= self.bound and (self.power_bound is None or self.exact_h >= self.power_bound)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "beta": str(self.beta),
            "bound": str(self.bound),
            "bound_fraction": str(self.binomial_bound),
            "power_exponent": None if self.power_exponent is None else str(self.power_exponent),
            "power_bound": None if self.power_bound is None else str(self.power_bound),
            "beta_check": self.check.to_dict(),
            "samples": self.samples,
            "distinct_cycles": self.distinct_cycles,
            "exact_h": None if self.exact_h is None else str(self.exact_h),
            "holds": self.holds,
            "neighbourhood_diagnostic": self.neighbourhood_diagnostic,
        }


def binomial_bound(n: int, beta) -> Fraction:
    """C(n, h) / C(n - h + k, k) with h = floor(n/2) and k = floor(3 beta n)."""
    beta = as_fraction(beta)
    half = n // 2
    k = min(half, math.floor(3 * beta * n))
    return Fraction(math.comb(n, half), math.comb(n - half + k, k))


def power_bound(n: int, beta) -> tuple[Fraction, int] | None:
    """(exponent, ceil(2^exponent)) for exponent (1/2 - 3 beta) n, when beta <= 1/6."""
    beta = as_fraction(beta)
    e = (Fraction(1, 2) - 3 * beta) * n
    if e < 0:
        return None
    return e, _ceil_pow2(e)


def neighbourhood_diagnostic(g: Graph, smask: int, p: BetaParams, samples: int, rng: random.Random) -> dict:
    """Sample W in s with beta n <= |W| <= 2 beta n and test |N_{G[s]}(W)| >= |s| - 3 beta n."""
    verts = list(iter_bits(smask))
    lo = max(1, math.ceil(p.beta * p.n))
    hi = min(len(verts) - 1, math.floor(2 * p.beta * p.n))
    if lo > hi:
        return {"samples": 0, "passed": 0}
    need = len(verts) - 3 * p.beta * p.n
    passed = 0
    for _ in range(samples):
        w = sum(1 << v for v in rng.sample(verts, rng.randint(lo, hi)))
        if (g.neighborhood(w) & smask).bit_count() >= need:
            passed += 1
    return {"samples": samples, "passed": passed}


def count_lower_bound_beta(g: Graph, p: BetaParams, samples: int = 16, seed: int = 0, level=None) -> BetaBound:
    """Both closed-form counting bounds for a beta-graph, plus empirical cycle yield and exact h when n <= 16."""
    n = g.n
    if n != p.n:
        raise GraphError(f"BetaParams.n={p.n} does not match the graph order {n}")
    level = level or (EXHAUSTIVE if n <= EXHAUSTIVE_MAX_N else Probed(seed=seed))
    chk = check_beta_graph(g, p, level)
    if not chk.holds:
        a, b = chk.pair
        raise NotBetaGraph(f"not a beta-graph at beta={p.beta}: {a} and {b} are not joined", (frozenset(a), frozenset(b)))
    pw = power_bound(n, p.beta) if p.beta <= Fraction(1, 6) else None
    out = BetaBound(n, p.beta, binomial_bound(n, p.beta), pw[0] if pw else None, pw[1] if pw else None, chk)
    rng = random.Random(f"{seed}:beta-samples")
    half = n // 2
    mode = "guaranteed" if half > 4 * p.beta * n else "best-effort" if half > 3 * p.beta * n else None
    seen = set()
    if mode is not None:
        for _ in range(samples):
            smask = sum(1 << v for v in rng.sample(range(n), half))
            lc = long_cycle_in_subset(g, smask, p, mode)
            seen.add(frozenset(lc.cycle))
            out.samples.append({"length": lc.length, "guaranteed_bound": lc.guaranteed_bound, "strong_bound_met": lc.strong_met})
        out.neighbourhood_diagnostic = neighbourhood_diagnostic(g, smask, p, 32, rng) if samples else None
    out.distinct_cycles = len(seen)
    if n <= 16:
        from .hamcount import count_hamiltonian_subsets

        out.exact_h = count_hamiltonian_subsets(g).total
    return out

