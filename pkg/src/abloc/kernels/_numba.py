"""Numba-compiled versions of the hot kernels.

Each function mirrors the signature and semantics of its counterpart in
``_numpy``; the test suite checks the two agree.
"""
import numpy as np
from numba import njit

from ._numpy import PIVOT_RTOL


@njit(cache=True)
def cholesky_solve(A, B):
    p = A.shape[0]
    m = B.shape[1]
    L = np.zeros((p, p))
    scale = 0.0
    for i in range(p):
        scale = max(scale, abs(A[i, i]))
    x = np.zeros((p, m))
    if scale <= 0.0:
        return x, False
    for j in range(p):
        s = A[j, j]
        for c in range(j):
            s -= L[j, c] * L[j, c]
        if s <= PIVOT_RTOL * scale:
            return x, False
        L[j, j] = np.sqrt(s)
        for i in range(j + 1, p):
            s = A[i, j]
            for c in range(j):
                s -= L[i, c] * L[j, c]
            L[i, j] = s / L[j, j]
    z = np.zeros((p, m))
    for col in range(m):
        for i in range(p):
            s = B[i, col]
            for c in range(i):
                s -= L[i, c] * z[c, col]
            z[i, col] = s / L[i, i]
        for i in range(p - 1, -1, -1):
            s = z[i, col]
            for c in range(i + 1, p):
                s -= L[c, i] * x[c, col]
            x[i, col] = s / L[i, i]
    return x, True


@njit(cache=True)
def gram(X, rows):
    K, _, p = X.shape
    G = np.zeros((K, p, p))
    for k in range(K):
        for r in rows:
            for a in range(p):
                xa = X[k, r, a]
                for b in range(a, p):
                    G[k, a, b] += xa * X[k, r, b]
        for a in range(p):
            for b in range(a):
                G[k, a, b] = G[k, b, a]
    return G


@njit(cache=True)
def cross_products(X, R, rows):
    K, _, p = X.shape
    d = R.shape[2]
    out = np.zeros((K, p, d))
    for k in range(K):
        for r in rows:
            for a in range(p):
                xa = X[k, r, a]
                for j in range(d):
                    out[k, a, j] += xa * R[k, r, j]
    return out


@njit(cache=True)
def batched_ridge_solve(G, XtR, alpha):
    K, p, _ = G.shape
    coef = np.zeros(XtR.shape)
    for k in range(K):
        A = G[k].copy()
        for a in range(p):
            A[a, a] += alpha
        x, ok = cholesky_solve(A, XtR[k])
        if not ok:
            return coef, False
        coef[k] = x
    return coef, True


@njit(cache=True)
def predict(X, coef):
    K, T, p = X.shape
    d = coef.shape[2]
    out = np.zeros((K, T, d))
    for k in range(K):
        for t in range(T):
            for a in range(p):
                xa = X[k, t, a]
                for j in range(d):
                    out[k, t, j] += xa * coef[k, a, j]
    return out


@njit(cache=True)
def residual_power(Yt, theta_hat):
    K, T, d = Yt.shape
    out = np.zeros(K)
    for k in range(K):
        s = 0.0
        for t in range(T):
            for j in range(d):
                e = Yt[k, t, j] - theta_hat[t, j]
                s += e * e
        out[k] = s / T
    return out


@njit(cache=True)
def weighted_sum(w, Yt):
    K, T, d = Yt.shape
    out = np.zeros((T, d))
    for k in range(K):
        wk = w[k]
        for t in range(T):
            for j in range(d):
                out[t, j] += wk * Yt[k, t, j]
    return out
