import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abloc import kernels
from abloc.kernels import _numpy


def _spd(rng, p):
    A = rng.standard_normal((p + 5, p))
    return A.T @ A + 0.1 * np.eye(p)


def test_backend_flag_is_reported():
    assert kernels.BACKEND in ("numba", "numpy")


@pytest.mark.parametrize("p", [1, 3, 10])
def test_cholesky_solve_matches_dense_solve(backend, rng, p):
    A = _spd(rng, p)
    B = rng.standard_normal((p, 3))
    x, ok = backend.cholesky_solve(A, B)
    assert ok
    np.testing.assert_allclose(x, np.linalg.solve(A, B), rtol=1e-10, atol=1e-12)


def test_cholesky_solve_flags_singular(backend):
    v = np.array([[1.0], [2.0], [3.0]])
    A = v @ v.T
    _, ok = backend.cholesky_solve(A, np.ones((3, 1)))
    assert not ok
    _, ok = backend.cholesky_solve(np.zeros((2, 2)), np.ones((2, 1)))
    assert not ok


@settings(max_examples=25, deadline=None)
@given(
    K=st.integers(1, 4),
    T=st.integers(12, 60),
    p=st.integers(1, 6),
    d=st.integers(1, 3),
    seed=st.integers(0, 2**16),
)
def test_numba_and_numpy_agree(K, T, p, d, seed):
    nb = pytest.importorskip("abloc.kernels._numba")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((K, T, p))
    R = rng.standard_normal((K, T, d))
    rows = np.sort(rng.choice(T, size=T // 2, replace=False)).astype(np.int64)
    th = rng.standard_normal((T, d))
    w = rng.dirichlet(np.ones(K))

    np.testing.assert_allclose(nb.gram(X, rows), _numpy.gram(X, rows), rtol=1e-12, atol=1e-12)
    xtr_nb, xtr_np = nb.cross_products(X, R, rows), _numpy.cross_products(X, R, rows)
    np.testing.assert_allclose(xtr_nb, xtr_np, rtol=1e-12, atol=1e-12)
    G = _numpy.gram(X, rows)
    c_nb, ok_nb = nb.batched_ridge_solve(G, xtr_np, 0.3)
    c_np, ok_np = _numpy.batched_ridge_solve(G, xtr_np, 0.3)
    assert ok_nb and ok_np
    np.testing.assert_allclose(c_nb, c_np, rtol=1e-9, atol=1e-11)
    np.testing.assert_allclose(nb.predict(X, c_np), _numpy.predict(X, c_np), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(nb.residual_power(R, th), _numpy.residual_power(R, th), rtol=1e-12)
    np.testing.assert_allclose(nb.weighted_sum(w, R), _numpy.weighted_sum(w, R), rtol=1e-12, atol=1e-14)


def test_residual_power_is_mean_of_squared_norms(backend, rng):
    Yt = rng.standard_normal((3, 40, 2))
    th = rng.standard_normal((40, 2))
    expected = [np.mean(np.sum((Yt[k] - th) ** 2, axis=1)) for k in range(3)]
    np.testing.assert_allclose(backend.residual_power(Yt, th), expected, rtol=1e-12)
