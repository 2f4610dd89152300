"""Adjacency spectra by cyclic Jacobi rotation, and the expander mixing lemma check."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import GraphError, NotRegularError
from .graph import Graph, iter_bits

MAX_N = 500


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-9, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps.

    Sweeps over all off-diagonal pairs ``(p, q)`` in row order, zeroing each
    with a plane rotation, until the off-diagonal Frobenius norm drops below
    ``tol``.  Returns the eigenvalues in ascending order.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return np.zeros(0)
    for _ in range(max_sweeps):
        # summed directly: total minus diagonal cancels down to ~sqrt(machine eps)
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    return np.sort(np.diag(a))


@dataclass(frozen=True)
class SpectralInfo:
    d: int
    lam: float
    tol: float
    spectrum: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {"d": self.d, "lambda": self.lam, "tol": self.tol, "spectrum": list(self.spectrum)}


def second_eigenvalue(g: Graph, tol: float = 1e-9) -> SpectralInfo:
    """Largest |eigenvalue| of the adjacency matrix once one copy of ``d`` is set aside.

    For a d-regular graph the all-ones vector has eigenvalue ``d``; the copy of
    the spectrum closest to ``d`` is taken as the principal one.  Repeated
    ``d`` (a disconnected graph) therefore gives ``lambda = d``.
    """
    if g.n == 0 or not g.is_regular():
        raise NotRegularError("second_eigenvalue needs a nonempty regular graph")
    if g.n > MAX_N:
        raise GraphError(f"dense Jacobi is limited to n <= {MAX_N}")
    d = g.degrees[0]
    ev = jacobi_eigenvalues(g.adjacency_matrix(), tol=tol)
    principal = int(np.argmin(np.abs(ev - d)))
    rest = np.delete(ev, principal)
    lam = float(np.max(np.abs(rest))) if rest.size else 0.0
    return SpectralInfo(d=d, lam=lam, tol=tol, spectrum=tuple(float(x) for x in ev))


@dataclass
class MixingReport:
    trials: int
    passed: int
    lam: float
    worst_slack: float
    failures: list[dict]

    @property
    def holds(self) -> bool:
        return self.passed == self.trials

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "passed": self.passed,
            "holds": self.holds,
            "lambda": self.lam,
            "worst_slack": self.worst_slack,
            "failures": self.failures,
        }


def mixing_deviation(g: Graph, d: int, xmask: int, ymask: int) -> tuple[float, float]:
    """Return (|e(X,Y) - d|X||Y|/n|, sqrt(|X||Y|(1-|X|/n)(1-|Y|/n)))."""
    n = g.n
    x, y = xmask.bit_count(), ymask.bit_count()
    e = g.edges_between(xmask, ymask)
    dev = abs(e - d * x * y / n)
    scale = math.sqrt(x * y * (1 - x / n) * (1 - y / n))
    return dev, scale


def mixing_check(g: Graph, trials: int = 100, seed: int = 0, tol: float = 1e-9, info: SpectralInfo | None = None) -> MixingReport:
    """Test the expander mixing lemma on ``trials`` random disjoint pairs (X, Y)."""
    info = info or second_eigenvalue(g, tol)
    rng = random.Random(seed)
    n = g.n
    passed = 0
    worst = math.inf
    failures = []
    for _ in range(trials):
        labels = [rng.randrange(3) for _ in range(n)]
        xmask = sum(1 << v for v in range(n) if labels[v] == 0)
        ymask = sum(1 << v for v in range(n) if labels[v] == 1)
        if not xmask:
            xmask = 1 << rng.randrange(n)
            ymask &= ~xmask
        dev, scale = mixing_deviation(g, info.d, xmask, ymask)
        slack = info.lam * scale + tol - dev
        worst = min(worst, slack)
        if slack >= 0:
            passed += 1
        else:
            failures.append({"X": list(iter_bits(xmask)), "Y": list(iter_bits(ymask)), "deviation": dev})
    return MixingReport(trials, passed, info.lam, worst, failures)
