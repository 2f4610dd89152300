"""Exact crux computation and the crux inequalities.

``c_alpha(G)`` is the smallest order of a subgraph whose average degree is at
least ``alpha * d(G)``.  Adding edges never lowers average degree, so the
minimum is attained by an induced subgraph and only vertex subsets are
searched.  All density comparisons are exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GraphError, HamwheelError
from .graph import Graph, VertexSet, iter_bits

EXHAUSTIVE_MAX_N = 24
DEFAULT_NODE_CAP = 2_000_000


class CapExceeded(HamwheelError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**12)


@dataclass
class CruxCertificate:
    alpha: Fraction
    value: int
    witness: VertexSet | None
    exhaustive: bool
    nodes: int = 0

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "value": self.value,
            "witness": self.witness.sorted() if self.witness is not None else None,
            "exhaustive": self.exhaustive,
            "nodes": self.nodes,
        }


def _meets(e: int, k: int, g: Graph, alpha: Fraction) -> bool:
    # 2e/k >= alpha * 2m/n  <=>  e * n * q >= p * m * k
    return e * g.n * alpha.denominator >= alpha.numerator * g.m * k


def _edge_target(g: Graph, alpha: Fraction, k: int) -> int:
    """Fewest edges a k-subset needs to be an alpha-crux."""
    num = alpha.numerator * g.m * k
    den = g.n * alpha.denominator
    return -(-num // den)


def _find_dense_subset(g: Graph, k: int, target: int, budget: list[int]) -> int | None:
    """Lexicographically first k-subset inducing at least ``target`` edges, or None.

    Include-first DFS over vertices in index order, so the first hit is the
    lexicographically smallest witness.  Prunes with an admissible bound on
    the edges still obtainable.
    """
    n = g.n
    adj = g.adj
    if target <= 0:
        return (1 << k) - 1
    if k * (k - 1) // 2 < target:
        return None
    # Global cheap bound: half the sum of the k largest degrees (capped at k-1 each).
    top = sorted((min(d, k - 1) for d in g.degrees), reverse=True)[:k]
    if sum(top) // 2 < target:
        return None

    def rec(chosen: int, size: int, edges: int, nxt: int) -> int | None:
        budget[0] -= 1
        if budget[0] < 0:
            raise CapExceeded
        if size == k:
            return chosen if edges >= target else None
        need = k - size
        cands = ((1 << n) - 1) & ~((1 << nxt) - 1)
        if cands.bit_count() < need:
            return None
        # Each remaining pick adds its edges into chosen, plus edges among
        # the new picks; the latter are bounded per vertex by need - 1.
        gains = sorted(
            ((adj[v] & chosen).bit_count() * 2 + min((adj[v] & cands).bit_count(), need - 1) for v in iter_bits(cands)),
            reverse=True,
        )
        if edges + sum(gains[:need]) // 2 < target:
            return None
        for v in iter_bits(cands):
            if n - v < need:
                break
            got = rec(chosen | (1 << v), size + 1, edges + (adj[v] & chosen).bit_count(), v + 1)
            if got is not None:
                return got
        return None

    return rec(0, 0, 0, 0)


def crux_exact(g: Graph, alpha, cap: int = DEFAULT_NODE_CAP) -> CruxCertificate:
    """Smallest k with some k-subset inducing average degree >= alpha * d(G).

    ``cap`` bounds the number of search nodes.  If it runs out the result is
    a lower-bound certificate: ``exhaustive=False``, ``value`` one more than
    the largest fully refuted size, and no witness.
    """
    alpha = as_fraction(alpha)
    if not 0 < alpha < 1:
        raise GraphError(f"alpha must lie in (0, 1), got {alpha}")
    if g.n == 0:
        raise GraphError("crux of the empty graph is undefined")
    if g.n > EXHAUSTIVE_MAX_N:
        raise GraphError(f"exact crux supports n <= {EXHAUSTIVE_MAX_N}, got {g.n}")
    budget = [cap]
    for k in range(1, g.n + 1):
        target = _edge_target(g, alpha, k)
        try:
            found = _find_dense_subset(g, k, target, budget)
        except CapExceeded:
            return CruxCertificate(alpha, k, None, False, cap)
        if found is not None:
            witness = VertexSet(found, g.n)
            if not _meets(g.edges_within(found), k, g, alpha):
                raise AssertionError("crux witness fails its density inequality")
            return CruxCertificate(alpha, k, witness, True, cap - budget[0])
    raise AssertionError("the whole vertex set is always an alpha-crux")


def crux_brute_force(g: Graph, alpha) -> int:
    """Reference crux by plain enumeration of all subsets (small n only)."""
    alpha = as_fraction(alpha)
    best = g.n
    for mask in range(1, 1 << g.n):
        k = mask.bit_count()
        if k < best and _meets(g.edges_within(mask), k, g, alpha):
            best = k
    return best


@dataclass
class Report:
    """A checked inequality ``lhs <= rhs`` (or ``lhs > rhs`` where stated)."""

    name: str
    lhs: object
    rhs: object
    holds: bool | None
    detail: dict

    def to_dict(self) -> dict:
        def conv(x):
            if isinstance(x, Fraction):
                return str(x)
            return x

        return {
            "check": self.name,
            "lhs": conv(self.lhs),
            "rhs": conv(self.rhs),
            "holds": self.holds,
            **{k: conv(v) for k, v in self.detail.items()},
        }


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def check_crux_scaling(g: Graph, alpha, alpha_prime, cap: int = DEFAULT_NODE_CAP) -> Report:
    """Check c_a(G) <= ceil((a/a')(c_a'(G) - 1) + 1) and c_a(G) <= ceil(a(n-1) + 1)."""
    alpha, alpha_prime = as_fraction(alpha), as_fraction(alpha_prime)
    if not 0 < alpha < alpha_prime < 1:
        raise GraphError("need 0 < alpha < alpha_prime < 1")
    lo = crux_exact(g, alpha, cap)
    hi = crux_exact(g, alpha_prime, cap)
    if not (lo.exhaustive and hi.exhaustive):
        raise CapExceeded("crux search cap exceeded; cannot evaluate both sides exactly")
    rhs = _ceil_frac(alpha / alpha_prime * (hi.value - 1) + 1)
    corollary = _ceil_frac(alpha * (g.n - 1) + 1)
    holds = lo.value <= rhs and lo.value <= corollary
    return Report(
        "crux_scaling",
        lo.value,
        rhs,
        holds,
        {
            "c_alpha_prime": hi.value,
            "corollary_rhs": corollary,
            "corollary_holds": lo.value <= corollary,
            "witness": lo.witness.sorted() if lo.witness else None,
        },
    )


def check_crux_lower_ndl(g: Graph, alpha, eps: float, tol: float = 1e-9, cap: int = DEFAULT_NODE_CAP) -> Report:
    """For an (n, d, lambda)-graph with lambda/d < eps*alpha, check c_alpha(G) > (1 - eps) alpha n.

    If the spectral precondition fails the report has ``holds=None`` and
    ``applicable=False``; that is not a failure.
    """
    from .spectral import second_eigenvalue

    alpha = as_fraction(alpha)
    info = second_eigenvalue(g, tol)
    ratio = info.lam / info.d
    applicable = ratio < eps * float(alpha)
    detail = {"lambda": info.lam, "d": info.d, "lambda_over_d": ratio, "applicable": applicable}
    rhs = (1 - eps) * float(alpha) * g.n
    if not applicable:
        return Report("crux_lower_ndl", None, rhs, None, detail)
    cert = crux_exact(g, alpha, cap)
    if not cert.exhaustive:
        raise CapExceeded("crux search cap exceeded")
    detail["witness"] = cert.witness.sorted() if cert.witness else None
    return Report("crux_lower_ndl", cert.value, rhs, cert.value > rhs, detail)
