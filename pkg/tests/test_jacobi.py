import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cubelab.jacobi import EigenConvergenceError, jacobi_eigh


def _check(a, w, V, tol):
    assert np.all(np.diff(w) >= -tol)
    assert np.allclose(V.T @ V, np.eye(len(w)), atol=tol)
    assert np.allclose(a @ V, V * w, atol=tol * max(1.0, np.abs(a).max()))


def test_two_by_two():
    w, V = jacobi_eigh(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert w == pytest.approx([1.0, 3.0], abs=1e-14)
    _check(np.array([[2.0, 1.0], [1.0, 2.0]]), w, V, 1e-13)


def test_diagonal_and_singleton():
    w, V = jacobi_eigh(np.diag([3.0, -1.0, 2.0]))
    assert list(w) == [-1.0, 2.0, 3.0]
    w, V = jacobi_eigh(np.array([[5.0]]))
    assert w[0] == 5.0 and V[0, 0] == 1.0


def test_cube_adjacency_spectrum():
    # Q3 adjacency: eigenvalues 3 - 2k with multiplicity C(3, k)
    n = 3
    a = np.array([[1.0 if bin(x ^ y).count("1") == 1 else 0.0 for y in range(8)] for x in range(8)])
    w, _ = jacobi_eigh(a)
    assert w == pytest.approx([-3, -1, -1, -1, 1, 1, 1, 3], abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2 ** 32 - 1))
def test_matches_lapack(m, seed):
    rng = np.random.default_rng(seed)
    b = rng.normal(size=(m, m))
    a = (b + b.T) / 2
    w, V = jacobi_eigh(a)
    assert w == pytest.approx(np.linalg.eigvalsh(a), abs=1e-11 * max(1.0, np.abs(a).max()))
    _check(a, w, V, 1e-11)


def test_clustered_eigenvalues():
    rng = np.random.default_rng(1)
    Q, _ = np.linalg.qr(rng.normal(size=(12, 12)))
    d = np.array([1.0] * 6 + [1.0 + 1e-13] * 3 + [4.0] * 3)
    a = Q @ np.diag(d) @ Q.T
    a = (a + a.T) / 2
    w, V = jacobi_eigh(a)
    assert w == pytest.approx(np.sort(d), abs=1e-12)
    _check(a, w, V, 1e-12)


def test_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_sweep_cap_raises():
    rng = np.random.default_rng(0)
    b = rng.normal(size=(20, 20))
    with pytest.raises(EigenConvergenceError):
        jacobi_eigh(b + b.T, max_sweeps=1)
