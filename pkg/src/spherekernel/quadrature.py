"""Product quadrature on the unit sphere of C^d.

Under sigma, the squared moduli (|zeta_1|^2, ..., |zeta_d|^2) are uniform on
the probability simplex and the phases are independent and uniform. A rule is
therefore a simplex rule (collapsed to the cube) times a trapezoid rule in
each phase. Gauss-Legendre in the simplex coordinates is exact on the
phase-averaged polynomial moments; the tanh-sinh variant clusters nodes at the
faces and is used for logarithmic integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_RESOLUTION = {1: (64, 0), 2: (64, 64), 3: (16, 12), 4: (8, 6)}
TANH_SINH_HALF_WIDTH = 4.0


@dataclass(frozen=True)
class SphereRule:
    d: int
    points: np.ndarray  # (M, d) complex
    weights: np.ndarray  # (M,) real, sums to 1
    n_angle: int
    n_radial: int
    radial: str

    @property
    def size(self) -> int:
        return self.weights.size

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.dot(self.weights, values))


def default_resolution(d: int) -> tuple[int, int]:
    if d in DEFAULT_RESOLUTION:
        return DEFAULT_RESOLUTION[d]
    raise ValueError(f"no default quadrature for d = {d}; pass a resolution explicitly")


def resolve_resolution(d: int, resolution=None) -> tuple[int, int]:
    """Accept None, a single node count, or an (angular, radial) pair."""
    if resolution is None:
        return default_resolution(d)
    if isinstance(resolution, (int, np.integer)):
        n = int(resolution)
        return (n, 0 if d == 1 else n)
    n_angle, n_radial = resolution
    return int(n_angle), int(0 if d == 1 else n_radial)


def gauss_unit_interval(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gauss-Legendre on [0, 1]: nodes, complements 1 - t, weights."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (1 + x), 0.5 * (1 - x), 0.5 * w


def tanh_sinh_unit_interval(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tanh-sinh on [0, 1]; t and 1 - t are both formed without cancellation."""
    x = np.linspace(-TANH_SINH_HALF_WIDTH, TANH_SINH_HALF_WIDTH, n)
    h = x[1] - x[0] if n > 1 else 2 * TANH_SINH_HALF_WIDTH
    s = np.pi * np.sinh(x)
    t = 1.0 / (1.0 + np.exp(-s))
    c = 1.0 / (1.0 + np.exp(s))
    w = h * np.pi * np.cosh(x) * t * c
    return t, c, w


def trapezoid_phases(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def _simplex_rule(d: int, n_radial: int, radial: str):
    """Squared-modulus profiles u (m, d) with probability weights (m,)."""
    if d == 1:
        return np.ones((1, 1)), np.ones(1)
    one_d = gauss_unit_interval if radial == "gauss" else tanh_sinh_unit_interval
    t, c, w = one_d(n_radial)
    grids = np.meshgrid(*([np.arange(n_radial)] * (d - 1)), indexing="ij")
    idx = [g.ravel() for g in grids]
    m = idx[0].size
    u = np.empty((m, d))
    weight = np.full(m, float(math.factorial(d - 1)))
    # collapsed coordinates: u_k = t_k prod_{l<k} (1 - t_l), u_d = prod (1 - t_l)
    rest = np.ones(m)
    for k in range(d - 1):
        tk, ck, wk = t[idx[k]], c[idx[k]], w[idx[k]]
        u[:, k] = rest * tk
        weight *= wk * rest  # Jacobian du_k/dt_k
        rest = rest * ck
    u[:, d - 1] = rest
    return u, weight


def sphere_rule(d: int, resolution=None, radial: str = "gauss") -> SphereRule:
    if radial not in ("gauss", "tanh-sinh"):
        raise ValueError(f"unknown radial rule {radial!r}")
    n_angle, n_radial = resolve_resolution(d, resolution)
    if n_angle < 1 or (d > 1 and n_radial < 1):
        raise ValueError("quadrature needs at least one node per direction")
    u, wu = _simplex_rule(d, n_radial, radial)
    phases = trapezoid_phases(n_angle)
    pgrids = np.meshgrid(*([np.arange(n_angle)] * d), indexing="ij")
    ph = np.stack([phases[g.ravel()] for g in pgrids], axis=1)  # (n_angle^d, d)
    radii = np.sqrt(u)
    points = (radii[:, None, :] * ph[None, :, :]).reshape(-1, d)
    weights = np.repeat(wu, ph.shape[0]) / ph.shape[0]
    return SphereRule(d, points, weights, n_angle, n_radial, radial)

