"""Windowed Cholesky factorizations, the Verblunsky table, and its inverse map.

All factorizations act on the monomial Gram matrix G = K^T (see
MomentKernel.gram), so that coefficient vectors pair with G as
<p_x, p_y> = y^* G x. For real kernels G and K coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import (
    NotPositiveDefinite,
    cholesky_lower,
    cholesky_lower_reversed,
    cholesky_upper,
    logdet_from_factor,
    solve_lower,
    solve_upper,
)
from .moments import MomentKernel
from .multiindex import as_index, shortlex_rank

__all__ = [
    "CholeskyWindow",
    "NotPositiveDefinite",
    "VerblunskyTable",
    "cholesky_window",
    "determinant_identity_residual",
    "reconstruct_kernel",
    "verblunsky",
    "verblunsky_modulus",
    "verblunsky_table",
    "window_logdet",
]


def _check_window(K: MomentKernel, i: int, j: int) -> None:
    if not 0 <= i <= j <= K.N:
        raise ValueError(f"window {i}..{j} is outside ranks 0..{K.N}")


@dataclass(frozen=True)
class CholeskyWindow:
    """Factorizations of the window of ranks i..j.

    F is upper triangular and G lower triangular, both with G_w = F^* F = G^* G
    for the Gram window G_w. P is the last column of F^{-1} and Psharp the
    first column of G^{-1}.
    """

    i: int
    j: int
    F: np.ndarray
    G: np.ndarray
    P: np.ndarray
    Psharp: np.ndarray

    @property
    def size(self) -> int:
        return self.j - self.i + 1

    def logdet(self) -> float:
        return logdet_from_factor(self.F)


def cholesky_window(K: MomentKernel, i: int, j: int) -> CholeskyWindow:
    _check_window(K, i, j)
    W = K.gram[i : j + 1, i : j + 1]
    n = W.shape[0]
    F = cholesky_upper(W, offset=i)
    G = cholesky_lower_reversed(W, offset=i)
    last = np.zeros(n, dtype=complex)
    last[-1] = 1.0
    first = np.zeros(n, dtype=complex)
    first[0] = 1.0
    P = solve_upper(F, last)
    Psharp = solve_lower(G, first)
    return CholeskyWindow(i, j, F, G, P, Psharp)


def window_logdet(K: MomentKernel, i: int, j: int) -> float:
    """log det of the window i..j; the empty window (j < i) has determinant 1."""
    if j < i:
        return 0.0
    _check_window(K, i, j)
    return logdet_from_factor(cholesky_lower(K.gram[i : j + 1, i : j + 1], offset=i))


def _last_pivot_sq(K: MomentKernel, i: int, j: int) -> float:
    # det[i..j] / det[i..j-1], read off the final Cholesky pivot
    L = cholesky_lower(K.gram[i : j + 1, i : j + 1], offset=i)
    return float(L[-1, -1].real ** 2)


def verblunsky_modulus(K: MomentKernel, i: int, j: int) -> float:
    """|gamma_{i,j}| from 1 - |gamma|^2 = det[i..j] det[i+1..j-1] / (det[i..j-1] det[i+1..j]).

    The two determinant ratios are taken as last Cholesky pivots so that a
    diagonal kernel gives exactly zero.
    """
    if not i < j:
        raise ValueError("need i < j")
    _check_window(K, i, j)
    ratio = _last_pivot_sq(K, i, j) / _last_pivot_sq(K, i + 1, j)
    return math.sqrt(min(1.0, max(0.0, 1.0 - ratio)))


def _normalized_gram(K: MomentKernel) -> np.ndarray:
    return K.normalized_kernel().gram


def verblunsky(K: MomentKernel, i: int, j: int) -> complex:
    """Partial correlation of positions i and j given the positions strictly between.

    gamma = <res_j, res_i> / (|res_i| |res_j|), residuals taken after projecting
    onto span(i+1..j-1) in the normalized inner product. For j = i + 1 this is
    the normalized Gram entry between the two monomials.
    """
    if not i < j:
        raise ValueError("need i < j")
    _check_window(K, i, j)
    G = _normalized_gram(K)
    S = G[np.ix_([i, j], [i, j])].copy()
    if j > i + 1:
        mid = slice(i + 1, j)
        L = cholesky_lower(G[mid, mid], offset=i + 1)
        X = solve_lower(L, G[mid, [i, j]])
        S -= X.conj().T @ X
    s00, s11 = S[0, 0].real, S[1, 1].real
    if not s00 > 0:
        raise NotPositiveDefinite(j, s00)
    if not s11 > 0:
        raise NotPositiveDefinite(j, s11)
    g = complex(S[0, 1] / math.sqrt(s00 * s11))
    return g if abs(g) <= 1.0 else g / abs(g)


@dataclass(frozen=True)
class VerblunskyTable:
    """gamma_{i,j} for 0 <= i < j <= N, stored in the strict upper triangle."""

    N: int
    d: int
    gamma: np.ndarray

    def __getitem__(self, key) -> complex:
        i, j = key
        if i == j:
            return 0j
        if not 0 <= i < j <= self.N:
            raise KeyError(key)
        return complex(self.gamma[i, j])

    @property
    def defect(self) -> np.ndarray:
        """d_{i,j} = sqrt(1 - |gamma_{i,j}|^2), with d_{i,i} = 1."""
        return np.sqrt(np.clip(1.0 - np.abs(self.gamma) ** 2, 0.0, 1.0))

    def row0(self) -> np.ndarray:
        """gamma_{0,r} for r = 0..N, with gamma_{0,0} = 0."""
        return self.gamma[0].copy()

    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.gamma))) if self.N > 0 else 0.0

    def pairs(self):
        for i in range(self.N + 1):
            for j in range(i + 1, self.N + 1):
                yield i, j, complex(self.gamma[i, j])

    def truncated(self, N: int) -> "VerblunskyTable":
        return VerblunskyTable(N, self.d, self.gamma[: N + 1, : N + 1].copy())


def verblunsky_table(K: MomentKernel, N: int | None = None) -> VerblunskyTable:
    """All partial correlations up to rank N.

    One Cholesky factor of the trailing block i+1..N per row i serves every
    j > i: its leading sub-blocks are the factors of the middle windows.
    """
    N = K.N if N is None else N
    _check_window(K, 0, N)
    G = _normalized_gram(K)
    gamma = np.zeros((N + 1, N + 1), dtype=complex)
    for i in range(N):
        rest = slice(i + 1, N + 1)
        L = cholesky_lower(G[rest, rest], offset=i + 1)
        u = solve_lower(L, G[rest, i])
        s00 = G[i, i].real
        for t in range(N - i):
            j = i + 1 + t
            s01 = G[i, j] - np.sum(np.conj(u[:t]) * np.conj(L[t, :t]))
            s11 = L[t, t].real ** 2
            if not s00 > 0:
                raise NotPositiveDefinite(j, s00)
            g = s01 / math.sqrt(s00 * s11)
            gamma[i, j] = g if abs(g) <= 1.0 else g / abs(g)
            s00 -= abs(u[t]) ** 2
    return VerblunskyTable(N, K.d, gamma)


def determinant_identity_residual(K: MomentKernel, table: VerblunskyTable, a) -> float:
    """Relative gap between det K[0..r] and prod K(b,b) * prod d_{b',a'}^2 over b' < a' <= r."""
    r = shortlex_rank(as_index(a))
    if r > table.N or r > K.N:
        raise ValueError(f"rank {r} is beyond the table")
    logdet = window_logdet(K, 0, r)
    diag = K.entries.diagonal().real[: r + 1]
    defects_sq = 1.0 - np.abs(table.gamma[: r + 1, : r + 1]) ** 2
    iu = np.triu_indices(r + 1, 1)
    logprod = float(np.sum(np.log(diag)) + np.sum(np.log(defects_sq[iu])))
    return abs(math.expm1(logdet - logprod))


def reconstruct_kernel(diag, table: VerblunskyTable, N: int | None = None, d: int | None = None) -> MomentKernel:
    """Rebuild the kernel from its diagonal and its Verblunsky table.

    Windows are filled by increasing width; the one new entry of window i..j
    is its projection part plus gamma_{i,j} times the geometric mean of the two
    residual norms.
    """
    N = table.N if N is None else N
    d = table.d if d is None else d
    diag = np.asarray(diag, dtype=float)[: N + 1]
    if diag.size != N + 1:
        raise ValueError(f"need {N + 1} diagonal entries, got {diag.size}")
    if np.any(diag <= 0):
        raise ValueError("diagonal entries must be positive")
    gam = table.gamma[: N + 1, : N + 1]
    if np.any(np.abs(gam) >= 1.0):
        raise ValueError("Verblunsky coefficients must lie in the open unit disc")
    G = np.diag(diag).astype(complex)
    for width in range(1, N + 1):
        for i in range(N + 1 - width):
            j = i + width
            if width == 1:
                base, s00, s11 = 0j, diag[i], diag[j]
            else:
                mid = slice(i + 1, j)
                L = cholesky_lower(G[mid, mid], offset=i + 1)
                X = solve_lower(L, G[mid, [i, j]])
                base = X[:, 0].conj() @ X[:, 1]
                s00 = diag[i] - float(np.vdot(X[:, 0], X[:, 0]).real)
                s11 = diag[j] - float(np.vdot(X[:, 1], X[:, 1]).real)
            G[i, j] = base + gam[i, j] * math.sqrt(s00 * s11)
            G[j, i] = np.conj(G[i, j])
    return MomentKernel(d, N, G.T.copy(), "reconstructed")
