"""Orthonormal, monic and sharp polynomials from Cholesky factors of the kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import cholesky_lower_reversed, cholesky_upper, solve_lower, triangular_inverse_upper
from .kernelfact import VerblunskyTable, cholesky_window
from .moments import MomentKernel
from .multiindex import MultiIndex, as_index, exponent_array, indices_upto, shortlex_rank

COEFF_EPS = 1e-14


@dataclass(frozen=True)
class BallPolynomial:
    """sum_r coeffs[r] z^{b_r}, with b_r the index of shortlex rank r."""

    d: int
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex).ravel())

    @property
    def degree_rank(self) -> int:
        """Highest rank carrying a coefficient above 1e-14 (-1 for the zero polynomial)."""
        nz = np.nonzero(np.abs(self.coeffs) > COEFF_EPS)[0]
        return int(nz[-1]) if nz.size else -1

    @property
    def multidegree(self) -> MultiIndex | None:
        r = self.degree_rank
        return None if r < 0 else indices_upto(r, self.d)[r]

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(size, dtype=complex)
        n = min(size, self.coeffs.size)
        out[:n] = self.coeffs[:n]
        if np.any(np.abs(self.coeffs[n:]) > 0):
            raise ValueError("polynomial does not fit in the requested size")
        return out

    def __call__(self, z) -> complex | np.ndarray:
        return evaluate(self, z)

    def __add__(self, other: "BallPolynomial") -> "BallPolynomial":
        n = max(self.coeffs.size, other.coeffs.size)
        return BallPolynomial(self.d, self.padded(n) + other.padded(n))

    def __sub__(self, other: "BallPolynomial") -> "BallPolynomial":
        n = max(self.coeffs.size, other.coeffs.size)
        return BallPolynomial(self.d, self.padded(n) - other.padded(n))

    def __mul__(self, c: complex) -> "BallPolynomial":
        return BallPolynomial(self.d, self.coeffs * c)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0


def evaluate(p: BallPolynomial, z) -> complex | np.ndarray:
    """Direct sum of c_r z^{b_r} with exact integer powers; z has shape (d,) or (..., d)."""
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != p.d:
        raise ValueError(f"expected points with {p.d} coordinates")
    n = p.coeffs.size
    if n == 0:
        return 0j if z.ndim == 1 else np.zeros(z.shape[:-1], dtype=complex)
    E = exponent_array(n - 1, p.d)
    flat = z.reshape(-1, p.d)
    V = np.ones((flat.shape[0], n), dtype=complex)
    for j in range(p.d):
        V *= flat[:, j][:, None] ** E[:, j][None, :]
    out = V @ p.coeffs
    if z.ndim == 1:
        return complex(out[0])
    return out.reshape(z.shape[:-1])


def monomial_vector(z, N: int, d: int) -> np.ndarray:
    """v(z) = (z^{b_0}, ..., z^{b_N})."""
    z = np.asarray(z, dtype=complex).ravel()
    E = exponent_array(N, d)
    return np.prod(z[None, :] ** E, axis=1)


def shift_succ(p: BallPolynomial) -> BallPolynomial:
    """sum c_b z^b -> sum c_b z^{succ(b)}; on rank-indexed coefficients a shift by one."""
    return BallPolynomial(p.d, np.concatenate([[0j], p.coeffs]))


@dataclass(frozen=True)
class OrthonormalSystem:
    K: MomentKernel
    N: int
    phi: tuple[BallPolynomial, ...]
    Phi: tuple[BallPolynomial, ...]
    phiSharp: tuple[BallPolynomial, ...]
    F: np.ndarray  # upper factor of the Gram window 0..N
    Finv: np.ndarray

    @property
    def d(self) -> int:
        return self.K.d

    def leading_coefficient(self, r: int) -> float:
        """a_{b_r, b_r}, the coefficient of z^{b_r} in phi_{b_r}."""
        return float(self.Finv[r, r].real)

    def coefficient_matrix(self) -> np.ndarray:
        """Columns are the orthonormal coefficient vectors."""
        return self.Finv

    def values_at(self, z, upto: int | None = None) -> np.ndarray:
        """(phi_0(z), ..., phi_upto(z))."""
        upto = self.N if upto is None else upto
        v = monomial_vector(z, upto, self.d)
        return v @ self.Finv[: upto + 1, : upto + 1]

    def gram_defect(self) -> float:
        C = self.Finv
        return float(np.max(np.abs(C.conj().T @ self.K.gram[: self.N + 1, : self.N + 1] @ C - np.eye(self.N + 1))))


def sharp_polys(K: MomentKernel, N: int | None = None) -> list[BallPolynomial]:
    """phi#_r from the first column of the inverse lower factor of the window 0..r."""
    N = K.N if N is None else N
    out = []
    for r in range(N + 1):
        G = cholesky_lower_reversed(K.gram[: r + 1, : r + 1])
        e0 = np.zeros(r + 1, dtype=complex)
        e0[0] = 1.0
        out.append(BallPolynomial(K.d, solve_lower(G, e0)))
    return out


def gram_schmidt(K: MomentKernel, N: int | None = None) -> OrthonormalSystem:
    """Orthonormalize the monomials in shortlex order.

    phi_r is the last column of the inverse upper factor of the window 0..r;
    nested windows share one factor, so a single factorization serves all r.
    """
    N = K.N if N is None else N
    F = cholesky_upper(K.gram[: N + 1, : N + 1])
    Finv = triangular_inverse_upper(F)
    phi, Phi = [], []
    for r in range(N + 1):
        c = Finv[: r + 1, r].copy()
        phi.append(BallPolynomial(K.d, c))
        Phi.append(BallPolynomial(K.d, c / Finv[r, r]))
    return OrthonormalSystem(K, N, tuple(phi), tuple(Phi), tuple(sharp_polys(K, N)), F, Finv)


def window_polynomial(K: MomentKernel, i: int, j: int) -> np.ndarray:
    """Coefficient vector P_{i,j} of the window i..j (entries for ranks i..j)."""
    return cholesky_window(K, i, j).P


def recurrence_residual(system: OrthonormalSystem, table: VerblunskyTable, a) -> tuple[float, float]:
    """Max-norm residuals of the two recurrences stepping from prec(a) to a.

    phi_a   = (1/d) S(w) - (gamma/d) phi#_prec(a)
    phi#_a  = -(conj(gamma)/d) S(w) + (1/d) phi#_prec(a)

    with gamma = gamma_{0, rank(a)}, d = sqrt(1 - |gamma|^2), w the coefficient
    vector of the window 1..rank(a) read from rank 0, and S = shift_succ.
    """
    r = shortlex_rank(as_index(a))
    if r < 1:
        raise ValueError("recurrences start at rank 1")
    if r > system.N or r > table.N:
        raise ValueError(f"rank {r} is beyond the system")
    K = system.K
    g = table[0, r]
    dd = math.sqrt(max(0.0, 1.0 - abs(g) ** 2))
    shifted = shift_succ(BallPolynomial(K.d, window_polynomial(K, 1, r)))
    prev_sharp = BallPolynomial(K.d, system.phiSharp[r - 1].padded(r + 1))
    rhs_phi = shifted * (1 / dd) - prev_sharp * (g / dd)
    rhs_sharp = shifted * (-np.conj(g) / dd) + prev_sharp * (1 / dd)
    res_phi = (system.phi[r] - rhs_phi).max_abs()
    res_sharp = (system.phiSharp[r] - rhs_sharp).max_abs()
    return res_phi, res_sharp
