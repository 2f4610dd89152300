import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings

from hamwheel.errors import NotRegularError
from hamwheel.generators import complete, cycle, hypercube, path, petersen, random_regular
from hamwheel.spectral import jacobi_eigenvalues, mixing_check, second_eigenvalue

from conftest import graphs


@settings(max_examples=40)
@given(graphs(min_n=1, max_n=12))
def test_trace_and_square_sum(g):
    ev = jacobi_eigenvalues(g.adjacency_matrix().astype(float))
    assert abs(ev.sum()) < 1e-7
    assert abs((ev ** 2).sum() - 2 * g.m) < 1e-7


@settings(max_examples=20)
@given(graphs(min_n=1, max_n=12))
def test_jacobi_matches_numpy(g):
    a = g.adjacency_matrix().astype(float)
    assert np.allclose(np.sort(jacobi_eigenvalues(a)), np.linalg.eigvalsh(a), atol=1e-7)


@pytest.mark.parametrize("n", [3, 5, 8, 11])
def test_complete_spectrum(n):
    info = second_eigenvalue(complete(n))
    assert info.lam == pytest.approx(1, abs=1e-8)
    assert sorted(info.spectrum) == pytest.approx([-1.0] * (n - 1) + [n - 1.0], abs=1e-8)


@pytest.mark.parametrize("n", [4, 6, 7, 10])
def test_cycle_spectrum(n):
    info = second_eigenvalue(cycle(n))
    expect = sorted(2 * math.cos(2 * math.pi * j / n) for j in range(n))
    assert sorted(info.spectrum) == pytest.approx(expect, abs=1e-8)
    assert info.lam == pytest.approx(max(abs(x) for x in expect[:-1]), abs=1e-8)
    if n == 6:
        assert info.lam == pytest.approx(2, abs=1e-8)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_hypercube_spectrum(d):
    info = second_eigenvalue(hypercube(d))
    expect = sorted(float(d - 2 * k) for k in range(d + 1) for _ in range(math.comb(d, k)))
    assert sorted(info.spectrum) == pytest.approx(expect, abs=1e-8)
    assert info.lam == pytest.approx(d, abs=1e-8)


def test_petersen_against_characteristic_polynomial():
    g = petersen()
    x = sympy.symbols("x")
    poly = sympy.Matrix(g.adjacency_matrix().tolist()).charpoly(x).as_expr()
    assert sympy.factor(poly) == (x - 3) * (x - 1) ** 5 * (x + 2) ** 4
    info = second_eigenvalue(g)
    assert info.lam == pytest.approx(2, abs=1e-8)
    assert 0 <= info.lam <= info.d + info.tol


@pytest.mark.parametrize("g", [petersen(), complete(8), hypercube(4), random_regular(60, 5, 2)], ids=["petersen", "K8", "Q4", "rr60"])
def test_mixing_lemma_holds(g):
    rep = mixing_check(g, trials=100, seed=11)
    assert rep.holds and rep.passed == 100 and not rep.failures


def test_non_regular_rejected():
    with pytest.raises(NotRegularError):
        second_eigenvalue(path(5))
    with pytest.raises(NotRegularError):
        mixing_check(path(5))
