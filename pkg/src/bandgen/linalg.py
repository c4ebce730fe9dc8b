"""Symmetric eigensolver: Householder tridiagonalization + implicit QL.

Self-contained so spectra stay bit-reproducible across BLAS builds.  The
QL stage follows the classic tqli recurrence; an off-diagonal entry is
treated as zero once it drops below ``tol`` relative to its diagonal
neighbors, and each eigenvalue gets at most ``max_sweeps`` sweeps.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, NumericError

__all__ = ["symmetric_eigenvalues"]


def _tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a symmetric matrix to tridiagonal (diagonal, subdiagonal)."""
    n = a.shape[0]
    e = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1 :, k].copy()
        norm = float(np.sqrt((x * x).sum()))
        if norm == 0.0:
            e[k] = 0.0
            continue
        alpha = -np.copysign(norm, x[0]) if x[0] != 0.0 else -norm
        v = x
        v[0] -= alpha
        v /= np.sqrt((v * v).sum())
        sub = a[k + 1 :, k + 1 :]
        p = sub @ v
        q = p - (v @ p) * v
        sub -= 2.0 * np.outer(v, q) + 2.0 * np.outer(q, v)
        e[k] = alpha
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]
    return np.diagonal(a).copy(), e


def _ql_implicit(
    d: np.ndarray, e: np.ndarray, tol: float, max_sweeps: int
) -> np.ndarray:
    n = d.size
    e = np.append(e, 0.0)
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= tol * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise NumericError(
                    f"eigenvalue {l} did not converge in {max_sweeps} sweeps"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return np.sort(d)


def symmetric_eigenvalues(
    matrix: np.ndarray, tol: float = 1e-10, max_sweeps: int = 60
) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix."""
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-12):
        raise InputError("matrix is not symmetric")
    n = a.shape[0]
    if n == 0:
        return np.empty(0)
    if n == 1:
        return a[0, :1].copy()
    d, e = _tridiagonalize(a)
    return _ql_implicit(d, e, tol, max_sweeps)
