"""Small dense linear algebra helpers shared by the factorization modules."""

from __future__ import annotations

import numpy as np

PIVOT_RTOL = 1e-12


class NotPositiveDefinite(np.linalg.LinAlgError):
    """A Cholesky pivot fell below tolerance.

    `rank` is the absolute shortlex rank of the failing pivot.
    """

    def __init__(self, rank: int, pivot: float, message: str | None = None):
        self.rank = int(rank)
        self.pivot = float(pivot)
        super().__init__(message or f"pivot {pivot:.3e} at rank {rank} is not positive")


def cholesky_lower(A: np.ndarray, offset: int = 0, rtol: float = PIVOT_RTOL) -> np.ndarray:
    """Lower factor L with A = L L^*, positive real diagonal.

    Pivots at or below rtol * max(diag A) raise NotPositiveDefinite; `offset`
    shifts the reported rank so windows report absolute positions.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    if n == 0:
        return A
    tol = rtol * float(np.max(np.abs(A.diagonal().real)))
    L = np.zeros_like(A)
    # column-oriented, fixed elimination order
    for k in range(n):
        row = L[k, :k]
        pivot = A[k, k].real - float(np.vdot(row, row).real)
        if not pivot > tol:
            raise NotPositiveDefinite(offset + k, pivot)
        lkk = np.sqrt(pivot)
        L[k, k] = lkk
        if k + 1 < n:
            L[k + 1 :, k] = (A[k + 1 :, k] - L[k + 1 :, :k] @ row.conj()) / lkk
    return L


def cholesky_upper(A: np.ndarray, offset: int = 0, rtol: float = PIVOT_RTOL) -> np.ndarray:
    """Upper factor F with A = F^* F."""
    return cholesky_lower(A, offset, rtol).conj().T


def cholesky_lower_reversed(A: np.ndarray, offset: int = 0, rtol: float = PIVOT_RTOL) -> np.ndarray:
    """Lower-triangular G with A = G^* G, positive real diagonal.

    Obtained by factoring the order-reversed matrix, so the elimination runs
    from the last position back to the first.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    R = A[::-1, ::-1]
    try:
        L = cholesky_lower(R, 0, rtol)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(offset + n - 1 - exc.rank, exc.pivot) from None
    return L.conj().T[::-1, ::-1].copy()


def solve_lower(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Forward substitution for lower-triangular L."""
    b = np.array(b, dtype=complex)
    n = L.shape[0]
    x = np.zeros_like(b)
    for k in range(n):
        x[k] = (b[k] - L[k, :k] @ x[:k]) / L[k, k]
    return x


def solve_upper(U: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Back substitution for upper-triangular U."""
    b = np.array(b, dtype=complex)
    n = U.shape[0]
    x = np.zeros_like(b)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - U[k, k + 1 :] @ x[k + 1 :]) / U[k, k]
    return x


def triangular_inverse_upper(U: np.ndarray) -> np.ndarray:
    n = U.shape[0]
    return solve_upper(U, np.eye(n, dtype=complex))


def triangular_inverse_lower(L: np.ndarray) -> np.ndarray:
    n = L.shape[0]
    return solve_lower(L, np.eye(n, dtype=complex))


def logdet_from_factor(T: np.ndarray) -> float:
    """log det of T^* T for a triangular factor T with positive diagonal."""
    if T.shape[0] == 0:
        return 0.0
    return float(2.0 * np.sum(np.log(T.diagonal().real)))
