"""High-precision evaluation of the crux-based lower bound on h(G).

The bound reads h(G) >= (n/B) * 2^(beta * t / ln^16 t) with t the crux size
and beta = (6000 ln 3)^-16.  With that beta the exponent is far below 1 for
every t a computer can hold, so the right-hand side is essentially n/B;
the evaluator says so explicitly instead of pretending otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

DPS = 60


def default_beta_const() -> mpmath.mpf:
    with mpmath.workdps(DPS):
        return (6000 * mpmath.log(3)) ** -16


@dataclass(frozen=True)
class BoundParams:
    B: float = 1.0
    beta_const: object = None
    alpha: Fraction = Fraction(1, 5)

    def __post_init__(self):
        if self.B <= 0:
            raise ValueError("B must be positive")
        if self.beta_const is not None and not mpmath.mpf(self.beta_const) > 0:
            raise ValueError("beta_const must be positive")

    def beta(self) -> mpmath.mpf:
        return default_beta_const() if self.beta_const is None else mpmath.mpf(self.beta_const)


def _s(x) -> str:
    return mpmath.nstr(x, 20)


def evaluate_main_bound(n, t, p: BoundParams | None = None) -> dict:
    """RHS of the main bound, its exponent, and the companion heavy-vertex and wheel exponents.

    ``t`` may be any real > 1 (the natural log of t must be positive).
    """
    p = p or BoundParams()
    with mpmath.workdps(DPS):
        n_ = mpmath.mpf(n)
        t_ = mpmath.mpf(t)
        if n_ <= 0:
            raise ValueError("n must be positive")
        if t_ <= 1:
            raise ValueError("t must exceed 1 so that ln t > 0")
        beta = p.beta()
        logt = mpmath.log(t_)
        exponent = beta * t_ / logt**16
        rhs = n_ / mpmath.mpf(p.B) * mpmath.power(2, exponent)
        eps1 = 1 / (300 * mpmath.log(3))
        wheel_ell = (eps1 / 20) ** 16 * 2 * t_ / logt**16
        out = {
            "n": _s(n_),
            "t": _s(t_),
            "B": _s(mpmath.mpf(p.B)),
            "alpha": str(p.alpha),
            "beta_const": _s(beta),
            "exponent": _s(exponent),
            "rhs": _s(rhs),
            "rhs_over_n_per_B": _s(mpmath.power(2, exponent)),
            "heavy_vertex_exponent": _s(exponent),
            "heavy_vertex_count": _s(mpmath.power(2, exponent)),
            "wheel_ell_bound": _s(wheel_ell),
            "exponent_below_one": bool(exponent < 1),
        }
        if exponent < 1:
            out["note"] = "exponent < 1: the right-hand side is within a factor 2 of n/B"
    return out
