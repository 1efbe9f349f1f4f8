"""Symmetric eigenvalues without external linear-algebra routines.

Householder reduction to tridiagonal form followed by Sturm-count bisection
for the lowest eigenvalues.  Bisection is unconditionally convergent and
vectorizes over the requested eigenvalue indices, which keeps pure
Python/numpy fast enough for the matrix sizes used here (a few hundred up
to ~1500 rows).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ConvergenceError",
    "householder_tridiagonalize",
    "tridiagonal_lowest_eigenvalues",
    "lowest_eigenvalues",
]


class ConvergenceError(RuntimeError):
    """The eigenvalue iteration failed to converge."""


def householder_tridiagonalize(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a real symmetric matrix to tridiagonal form (d, e).

    Classic symmetric Householder reduction; the orthogonal transform is not
    accumulated since only eigenvalues are needed downstream.
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")
    if n == 0:
        return np.empty(0), np.empty(0)
    e = np.zeros(n - 1) if n > 1 else np.empty(0)
    for k in range(n - 2):
        x = a[k + 1:, k]
        if np.all(x[1:] == 0.0):
            e[k] = x[0]
            continue
        sigma = np.sqrt(np.dot(x, x))
        if x[0] < 0.0:
            sigma = -sigma
        u = x.copy()
        u[0] += sigma
        h = 0.5 * np.dot(u, u)
        sub = a[k + 1:, k + 1:]
        p = sub @ u / h
        q = p - (np.dot(u, p) / (2.0 * h)) * u
        sub -= np.outer(q, u) + np.outer(u, q)
        e[k] = -sigma
    if n > 1:
        e[n - 2] = a[n - 1, n - 2]
    return np.diagonal(a).copy(), e


def _sturm_counts(d: np.ndarray, e2: np.ndarray, shifts: np.ndarray, pivmin: float) -> np.ndarray:
    """Number of eigenvalues strictly below each shift (vectorized)."""
    q = d[0] - shifts
    count = (q < 0.0).astype(np.int64)
    for i in range(1, d.size):
        small = np.abs(q) < pivmin
        q = np.where(small, np.where(q < 0.0, -pivmin, pivmin), q)
        q = d[i] - shifts - e2[i - 1] / q
        count += q < 0.0
    return count


def tridiagonal_lowest_eigenvalues(
    d: np.ndarray, e: np.ndarray, count: int, max_iter: int = 120
) -> np.ndarray:
    """Lowest ``count`` eigenvalues of a symmetric tridiagonal matrix.

    Sturm-sequence bisection: the k-th eigenvalue is pinched between shifts
    whose negcount brackets k.  Converges to a few ulps of the Gershgorin
    span regardless of clustering.
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    n = d.size
    if count < 1 or count > n:
        raise ValueError(f"count must be in 1..{n} (got {count})")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise ConvergenceError("non-finite entries in tridiagonal matrix")
    e2 = e * e
    radius = np.zeros(n)
    if n > 1:
        radius[:-1] += np.abs(e)
        radius[1:] += np.abs(e)
    glo = float(np.min(d - radius))
    ghi = float(np.max(d + radius))
    span = max(ghi - glo, 1e-30)
    pivmin = max(np.max(e2, initial=0.0), 1.0) * np.finfo(float).eps ** 2

    lo = np.full(count, glo)
    hi = np.full(count, ghi)
    ks = np.arange(1, count + 1)
    tol = 4.0 * np.finfo(float).eps * max(abs(glo), abs(ghi)) + 1e-15
    for _ in range(max_iter):
        width = hi - lo
        if np.all(width <= tol):
            break
        mid = 0.5 * (lo + hi)
        c = _sturm_counts(d, e2, mid, pivmin)
        below = c >= ks
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
        if np.all(0.5 * (lo + hi) == mid):
            break
    else:
        if np.any(hi - lo > 1e3 * tol * span):
            raise ConvergenceError("bisection interval failed to contract")
    return 0.5 * (lo + hi)


def _is_tridiagonal(matrix: np.ndarray) -> bool:
    n = matrix.shape[0]
    if n <= 2:
        return True
    mask = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :]) > 1
    return not np.any(matrix[mask])


def lowest_eigenvalues(matrix: np.ndarray, count: int) -> np.ndarray:
    """Lowest ``count`` eigenvalues of a dense real symmetric matrix."""
    a = np.asarray(matrix, dtype=float)
    if _is_tridiagonal(a):
        d = np.diagonal(a).copy()
        e = np.diagonal(a, 1).copy()
    else:
        d, e = householder_tridiagonalize(a)
    return tridiagonal_lowest_eigenvalues(d, e, count)
