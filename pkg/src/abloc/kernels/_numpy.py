"""Pure-numpy implementations of the hot kernels."""
import numpy as np
from scipy.linalg import solve_triangular

PIVOT_RTOL = 1e-13


def cholesky_solve(A, B):
    """Solve ``A x = B`` for symmetric positive definite ``A``.

    Returns ``(x, ok)``; ``ok`` is False when a pivot falls below
    ``PIVOT_RTOL * max(diag(A))``.
    """
    scale = np.max(np.abs(np.diag(A)))
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        return np.zeros_like(B), False
    if scale <= 0 or np.min(np.diag(L)) ** 2 <= PIVOT_RTOL * scale:
        return np.zeros_like(B), False
    z = solve_triangular(L, B, lower=True)
    return solve_triangular(L.T, z, lower=False), True


def gram(X, rows):
    Xr = X[:, rows]
    return np.einsum("ktp,ktq->kpq", Xr, Xr)


def cross_products(X, R, rows):
    return np.einsum("ktp,ktj->kpj", X[:, rows], R[:, rows])


def batched_ridge_solve(G, XtR, alpha):
    K, p, _ = G.shape
    coef = np.empty_like(XtR)
    eye = np.eye(p)
    for k in range(K):
        coef[k], ok = cholesky_solve(G[k] + alpha * eye, XtR[k])
        if not ok:
            return coef, False
    return coef, True


def predict(X, coef):
    return np.einsum("ktp,kpj->ktj", X, coef)


def residual_power(Yt, theta_hat):
    diff = Yt - theta_hat[None]
    return np.einsum("ktj,ktj->k", diff, diff) / Yt.shape[1]


def weighted_sum(w, Yt):
    return np.tensordot(w, Yt, axes=1)
