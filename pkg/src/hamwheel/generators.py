"""Generators for every graph family the toolkit works with.

Each family is addressed by a :class:`FamilySpec` such as
``FamilySpec.parse("clique_star:3,2")``; :func:`generate` is deterministic
given ``(family, seed)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .errors import GraphError
from .graph import Graph, disjoint_union

MAX_REGULAR_ATTEMPTS = 1000


def complete(k: int) -> Graph:
    if k < 1:
        raise GraphError("complete graph needs k >= 1")
    return Graph.from_edges(k, combinations(range(k), 2))


def complete_bipartite(s: int, t: int) -> Graph:
    if s < 1 or t < 1:
        raise GraphError("complete bipartite graph needs s, t >= 1")
    return Graph.from_edges(s + t, ((i, s + j) for i in range(s) for j in range(t)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def star(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def hypercube(d: int) -> Graph:
    if d < 0:
        raise GraphError("hypercube dimension must be >= 0")
    n = 1 << d
    return Graph.from_edges(n, ((v, v ^ (1 << i)) for v in range(n) for i in range(d) if v < v ^ (1 << i)))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def clique_star(d: int, copies: int) -> Graph:
    """``copies`` copies of K_{d+1} sharing the single vertex 0."""
    if d < 1 or copies < 1:
        raise GraphError("clique_star needs d >= 1 and copies >= 1")
    edges = []
    for c in range(copies):
        block = [0] + [1 + c * d + i for i in range(d)]
        edges.extend(combinations(block, 2))
    return Graph.from_edges(copies * d + 1, edges)


def clique_bowtie(d: int) -> Graph:
    """Two K_{d+1} that share exactly one vertex."""
    return clique_star(d, 2)


def complete_minus_matching(k: int) -> Graph:
    """K_k with the perfect matching {0,1}, {2,3}, ... removed."""
    if k < 2 or k % 2:
        raise GraphError(f"complete_minus_matching needs an even k >= 2, got {k}")
    return Graph.from_edges(k, ((u, v) for u, v in combinations(range(k), 2) if not (u % 2 == 0 and v == u + 1)))


def complete_minus_max_matching(k: int) -> Graph:
    """K_k minus a maximum matching; for odd k the last vertex stays unmatched."""
    if k < 2:
        raise GraphError("complete_minus_max_matching needs k >= 2")
    return Graph.from_edges(
        k, ((u, v) for u, v in combinations(range(k), 2) if not (u % 2 == 0 and v == u + 1 and v < k - (k % 2)))
    )


def two_cliques_bridge(k: int) -> Graph:
    """Two disjoint K_k joined by the single edge (k-1, k)."""
    if k < 1:
        raise GraphError("two_cliques_bridge needs k >= 1")
    g = disjoint_union(complete(k), complete(k))
    return Graph.from_edges(2 * k, list(g.edges()) + [(k - 1, k)])


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise GraphError(f"gnp needs n >= 0 and 0 <= p <= 1, got n={n}, p={p}")
    rng = random.Random(seed)
    return Graph.from_edges(n, ((u, v) for u, v in combinations(range(n), 2) if rng.random() < p))


def random_regular(n: int, d: int, seed: int = 0) -> Graph:
    """Uniform-ish random d-regular graph from the pairing (configuration) model.

    Stubs are paired at random; pairs that would create a loop or a repeated
    edge are returned to the pool and re-paired.  If the pool gets stuck the
    attempt is discarded and a fresh pairing is drawn, up to
    ``MAX_REGULAR_ATTEMPTS`` times.
    """
    if n * d % 2:
        raise GraphError(f"random_regular needs n*d even, got n={n}, d={d}")
    if not 0 <= d < n:
        raise GraphError(f"random_regular needs 0 <= d < n, got n={n}, d={d}")
    rng = random.Random(seed)
    for _ in range(MAX_REGULAR_ATTEMPTS):
        edges = _try_pairing(n, d, rng)
        if edges is not None:
            return Graph.from_edges(n, edges)
    raise GraphError(f"random_regular({n}, {d}) failed after {MAX_REGULAR_ATTEMPTS} attempts")


def _try_pairing(n: int, d: int, rng: random.Random) -> set[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = [v for v in range(n) for _ in range(d)]
    while stubs:
        rng.shuffle(stubs)
        left = []
        it = iter(stubs)
        for a, b in zip(it, it):
            e = (a, b) if a < b else (b, a)
            if a != b and e not in edges:
                edges.add(e)
            else:
                left += [a, b]
        if len(left) == len(stubs):
            # Nothing could be paired this round; check whether any pairing is possible at all.
            pool = sorted(set(left))
            if not any(
                (a, b) not in edges for i, a in enumerate(pool) for b in pool[i + 1 :]
            ):
                return None
            if len(pool) <= 1:
                return None
        stubs = left
    return edges


@dataclass(frozen=True)
class FamilySpec:
    """A named graph family with its parameters, e.g. ``complete:4``."""

    name: str
    params: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        name, _, rest = text.strip().partition(":")
        params = []
        for tok in filter(None, (t.strip() for t in rest.split(","))):
            try:
                params.append(int(tok))
            except ValueError:
                try:
                    params.append(float(tok))
                except ValueError:
                    raise GraphError(f"bad family parameter {tok!r} in {text!r}") from None
        return cls(name, tuple(params))

    def __str__(self) -> str:
        return self.name + (":" + ",".join(str(p) for p in self.params) if self.params else "")


_DETERMINISTIC = {
    "complete": complete,
    "complete_bipartite": complete_bipartite,
    "cycle": cycle,
    "path": path,
    "star": star,
    "hypercube": hypercube,
    "petersen": petersen,
    "clique_star": clique_star,
    "clique_bowtie": clique_bowtie,
    "complete_minus_matching": complete_minus_matching,
    "complete_minus_max_matching": complete_minus_max_matching,
    "two_cliques_bridge": two_cliques_bridge,
}
_RANDOM = {"random_regular": random_regular, "gnp": gnp}

FAMILIES = sorted(_DETERMINISTIC) + sorted(_RANDOM)


def generate(family: FamilySpec | str, seed: int = 0) -> Graph:
    if isinstance(family, str):
        family = FamilySpec.parse(family)
    if family.name in _DETERMINISTIC:
        fn = _DETERMINISTIC[family.name]
        try:
            return fn(*family.params)
        except TypeError as exc:
            raise GraphError(f"wrong parameters for {family}: {exc}") from None
    if family.name in _RANDOM:
        fn = _RANDOM[family.name]
        try:
            return fn(*family.params, seed=seed)
        except TypeError as exc:
            raise GraphError(f"wrong parameters for {family}: {exc}") from None
    raise GraphError(f"unknown family {family.name!r}; known: {', '.join(FAMILIES)}")
