"""Closed-form ridge regression.

The intercept is not treated specially: callers that want one supply a
constant column, and that column is penalised like any other.
"""
import numpy as np

from . import kernels
from .errors import SingularMatrixError


def _as_finite(name, a, ndim):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf")
    return a


def solve_spd(A, B):
    """Solve ``A x = B`` with a Cholesky factorisation of SPD ``A``.

    ``B`` may be a vector or a matrix of right-hand sides.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    vector = B.ndim == 1
    B2 = np.ascontiguousarray(B[:, None] if vector else B)
    x, ok = kernels.cholesky_solve(A, B2)
    if not ok:
        raise SingularMatrixError("system matrix is singular or not positive definite")
    return x[:, 0] if vector else x


def ridge_fit(X, y, alpha):
    """Minimise ``||y - X c||^2 + alpha ||c||^2`` over ``c``.

    Parameters
    ----------
    X : ndarray of shape (N, p)
    y : ndarray of shape (N,) or (N, m)
        With a 2-D ``y`` each column is fitted independently.
    alpha : float
        Nonnegative penalty. With ``alpha == 0`` the Gram matrix must be
        invertible, otherwise ``SingularMatrixError`` is raised.

    Returns
    -------
    ndarray of shape (p,) or (p, m)
    """
    X = _as_finite("X", X, 2)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim not in (1, 2):
        raise ValueError(f"y must be 1-D or 2-D, got shape {y.shape}")
    y = _as_finite("y", y, y.ndim)
    if X.shape[0] < 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if not np.isfinite(alpha) or alpha < 0:
        raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
    A = X.T @ X
    A[np.diag_indices_from(A)] += alpha
    return solve_spd(A, X.T @ y)


def ridge_predict(coef, X):
    coef = np.asarray(coef, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != coef.shape[0]:
        raise ValueError(f"shape mismatch: X {X.shape} vs coef {coef.shape}")
    return X @ coef


def ridge_objective(X, y, coef, alpha):
    r = np.asarray(y) - np.asarray(X) @ coef
    return float(np.sum(r * r) + alpha * np.sum(np.asarray(coef) ** 2))
