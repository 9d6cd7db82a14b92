"""Christoffel-Darboux kernels and Christoffel approximates.

`n` in the level-based functions is a length: the truncation runs through
alpha(n) = n e_d, i.e. ranks 0..C(n+d, d) - 1. The `_rank` variants truncate
at an arbitrary shortlex rank instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import cholesky_lower, solve_lower
from .measure import MeasureSpec, normalize
from .moments import MomentKernel, entropy, kernel_window
from .multiindex import last_rank_of_level
from .orthopoly import BallPolynomial, OrthonormalSystem, monomial_vector


def _rank_of_level(system_d: int, n: int) -> int:
    if n < 0:
        raise ValueError("level must be nonnegative")
    return last_rank_of_level(n, system_d)


def cd_kernel_rank(system: OrthonormalSystem, r: int, z, w) -> complex:
    """sum_{k<=r} phi_k(z) conj(phi_k(w))."""
    if r > system.N:
        raise ValueError(f"system only reaches rank {system.N}")
    pz = system.values_at(z, r)
    pw = system.values_at(w, r)
    return complex(np.sum(pz * np.conj(pw)))


def cd_kernel(system: OrthonormalSystem, n: int, z, w) -> complex:
    return cd_kernel_rank(system, _rank_of_level(system.d, n), z, w)


def lambda_rank(system: OrthonormalSystem, r: int, z) -> float:
    """1 / sum_{k<=r} |phi_k(z)|^2."""
    if r > system.N:
        raise ValueError(f"system only reaches rank {system.N}")
    pz = system.values_at(z, r)
    return 1.0 / float(np.sum(np.abs(pz) ** 2))


def lambda_n(system: OrthonormalSystem, n: int, z) -> float:
    return lambda_rank(system, _rank_of_level(system.d, n), z)


def lambda_rank_via_inverse(K: MomentKernel, r: int, z) -> float:
    """1 / (v(z)^* K_r^{-1} v(z)), from a fresh factorization of the kernel window."""
    if r > K.N:
        raise ValueError(f"kernel only reaches rank {K.N}")
    L = cholesky_lower(K.entries[: r + 1, : r + 1])
    y = solve_lower(L, monomial_vector(z, r, K.d))
    return 1.0 / float(np.vdot(y, y).real)


def lambda_n_via_inverse(K: MomentKernel, n: int, z) -> float:
    return lambda_rank_via_inverse(K, _rank_of_level(K.d, n), z)


def minimizer_rank(system: OrthonormalSystem, r: int, z) -> BallPolynomial:
    """P = sum_k c_k phi_k with c_k = lambda conj(phi_k(z)); P(z) = 1 and int |P|^2 dmu = lambda."""
    pz = system.values_at(z, r)
    lam = 1.0 / float(np.sum(np.abs(pz) ** 2))
    c = lam * np.conj(pz)
    return BallPolynomial(system.d, system.Finv[: r + 1, : r + 1] @ c)


def minimizer(system: OrthonormalSystem, n: int, z) -> BallPolynomial:
    return minimizer_rank(system, _rank_of_level(system.d, n), z)


def energy(K: MomentKernel, p: BallPolynomial) -> float:
    """int |p|^2 dmu as the Gram quadratic form."""
    c = p.padded(K.N + 1)
    return float(np.vdot(c, K.gram @ c).real)


@dataclass(frozen=True)
class ChristoffelSequence:
    z: tuple[complex, ...]
    ranks: tuple[int, ...]
    values: tuple[float, ...]
    minimizers: tuple[BallPolynomial, ...] | None = None

    def is_nonincreasing(self, slack: float = 1e-12) -> bool:
        return all(b <= a + slack for a, b in zip(self.values, self.values[1:]))


def christoffel_sequence(system: OrthonormalSystem, z, levels: bool = True, with_minimizers: bool = False) -> ChristoffelSequence:
    """lambda at z for every level (or every rank) the system reaches."""
    if levels:
        ranks = []
        n = 0
        while last_rank_of_level(n, system.d) <= system.N:
            ranks.append(last_rank_of_level(n, system.d))
            n += 1
    else:
        ranks = list(range(system.N + 1))
    pz = system.values_at(z)
    partial = np.cumsum(np.abs(pz) ** 2)
    values = tuple(float(1.0 / partial[r]) for r in ranks)
    mins = tuple(minimizer_rank(system, r, z) for r in ranks) if with_minimizers else None
    zt = tuple(complex(x) for x in np.asarray(z, dtype=complex).ravel())
    return ChristoffelSequence(zt, tuple(ranks), values, mins)


@dataclass(frozen=True)
class TailBracket:
    """lambda_infinity(z) lies in [lower, upper]."""

    level: int
    rank: int
    upper: float
    lower: float
    log_entropy: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "rank": self.rank,
            "upper": self.upper,
            "lower": self.lower,
            "width": self.width,
            "log_integral": self.log_entropy if math.isfinite(self.log_entropy) else "neg_infinity",
        }


def lambda_tail_bracket(spec: MeasureSpec, z, N: int, resolution=None) -> TailBracket:
    """Bracket [exp(entropy), lambda_N] at the origin, [0, lambda_N] elsewhere.

    The lower edge comes from Jensen's inequality and only applies at z = 0;
    the upper edge is monotone in N.
    """
    spec = normalize(spec)
    r = last_rank_of_level(N, spec.d)
    K = kernel_window(spec, r, resolution=resolution)
    upper = lambda_rank_via_inverse(K, r, z)
    ent = entropy(spec)
    at_origin = not np.any(np.asarray(z, dtype=complex))
    lower = ent.exp_value if at_origin else 0.0
    return TailBracket(N, r, upper, lower, ent.log_integral)


__all__ = [
    "ChristoffelSequence",
    "TailBracket",
    "cd_kernel",
    "cd_kernel_rank",
    "christoffel_sequence",
    "energy",
    "lambda_n",
    "lambda_n_via_inverse",
    "lambda_rank",
    "lambda_rank_via_inverse",
    "lambda_tail_bracket",
    "minimizer",
    "minimizer_rank",
]
