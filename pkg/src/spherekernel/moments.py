"""Moment kernels K(a, b) = int zeta^a conj(zeta)^b dmu and entropy integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .measure import MeasureSpec
from .multiindex import MultiIndex, as_index, exponent_array, indices_upto, shortlex_rank
from .quadrature import resolve_resolution, sphere_rule

LOG_FLOOR = -1e6
# log singularities at the simplex faces need more radial nodes than moments do
ENTROPY_RESOLUTION = {1: (256, 0), 2: (64, 64), 3: (8, 40), 4: (4, 20)}
_CHUNK = 1 << 15


@lru_cache(maxsize=4096)
def _sigma_moment(entries: tuple[int, ...]) -> float:
    d = len(entries)
    num = math.factorial(d - 1)
    for e in entries:
        num *= math.factorial(e)
    den = math.factorial(d - 1 + sum(entries))
    return float(Fraction(num, den))


def sigma_monomial_moment(a) -> float:
    """int |zeta^a|^2 dsigma = (d-1)! a! / (d-1+|a|)!."""
    return _sigma_moment(as_index(a).entries)


@dataclass
class MomentKernel:
    """Dense window of K over shortlex ranks 0..N (row = first argument)."""

    d: int
    N: int
    entries: np.ndarray
    provenance: str = "exact"
    normalized: bool = False
    spec: MeasureSpec | None = field(default=None, repr=False)

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.shape != (self.N + 1, self.N + 1):
            raise ValueError(f"kernel window must be {(self.N + 1,) * 2}, got {self.entries.shape}")

    def __getitem__(self, key) -> complex:
        m, n = key
        return complex(self.entries[m, n])

    @property
    def indices(self) -> tuple[MultiIndex, ...]:
        return indices_upto(self.N, self.d)

    @property
    def gram(self) -> np.ndarray:
        """Gram matrix of the monomials, G[m, n] = <z^{b_n}, z^{b_m}>_mu = K(n, m).

        With this orientation y^* G x is the inner product of the polynomials
        with coefficient vectors x and y.
        """
        return self.entries.T

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def truncated(self, N: int) -> "MomentKernel":
        if N > self.N:
            raise ValueError(f"window only reaches rank {self.N}")
        return MomentKernel(self.d, N, self.entries[: N + 1, : N + 1].copy(), self.provenance, self.normalized, self.spec)

    def normalized_kernel(self) -> "MomentKernel":
        """K(m, n) / sqrt(K(m, m) K(n, n))."""
        from ._linalg import NotPositiveDefinite

        dg = self.entries.diagonal().real
        bad = np.nonzero(~(dg > 0))[0]
        if bad.size:
            raise NotPositiveDefinite(int(bad[0]), float(dg[bad[0]]), f"zero diagonal entry at rank {bad[0]}")
        diag = np.sqrt(dg)
        Kn = self.entries / np.outer(diag, diag)
        np.fill_diagonal(Kn, 1.0)
        return MomentKernel(self.d, self.N, Kn, self.provenance, True, self.spec)

    def is_nontrivial(self) -> bool:
        """All leading principal minors are positive, within the pivot tolerance."""
        from ._linalg import NotPositiveDefinite, cholesky_lower

        try:
            cholesky_lower(self.gram)
        except NotPositiveDefinite:
            return False
        return True

    def scaled(self, c: float) -> "MomentKernel":
        return MomentKernel(self.d, self.N, c * self.entries, self.provenance, self.normalized, None)


def _weight_moment(spec: MeasureSpec, a: MultiIndex, b: MultiIndex) -> complex:
    w = spec.weight
    if w.is_zero:
        return 0j
    total = 0j
    for gam, cg in w.g.terms:
        left = a + gam
        for dlt, cd in w.g.terms:
            if left == b + dlt:
                total += cg * np.conj(cd) * _sigma_moment(left.entries)
    return w.scale * total


def _atom_moment(spec: MeasureSpec, a: MultiIndex, b: MultiIndex) -> complex:
    total = 0j
    for atom in spec.atoms:
        term = complex(atom.mass)
        for z, ea, eb in zip(atom.point, a.entries, b.entries):
            term *= z**ea * np.conj(z) ** eb
        total += term
    return total


def moment(spec: MeasureSpec, a, b) -> complex:
    """K(a, b) for the measure; closed form when p = 2, quadrature otherwise."""
    a, b = as_index(a), as_index(b)
    if not spec.exact_moments:
        return quadrature_moment(spec, a, b)
    return _weight_moment(spec, a, b) + _atom_moment(spec, a, b)


def _hermitian_from_upper(K: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(K.shape[0], 1)
    K[(iu[1], iu[0])] = np.conj(K[iu])
    np.fill_diagonal(K, K.diagonal().real)
    return K


def _monomials(points: np.ndarray, E: np.ndarray) -> np.ndarray:
    """(M, R) matrix of z^{E[r]} at each point."""
    M, d = points.shape
    V = np.ones((M, E.shape[0]), dtype=complex)
    for j in range(d):
        top = int(E[:, j].max()) if E.size else 0
        powers = np.ones((M, top + 1), dtype=complex)
        for e in range(1, top + 1):
            powers[:, e] = powers[:, e - 1] * points[:, j]
        V *= powers[:, E[:, j]]
    return V


def _atom_kernel(spec: MeasureSpec, E: np.ndarray) -> np.ndarray:
    R = E.shape[0]
    K = np.zeros((R, R), dtype=complex)
    if not spec.atoms:
        return K
    pts = np.array([a.point for a in spec.atoms], dtype=complex)
    mass = np.array([a.mass for a in spec.atoms])
    V = _monomials(pts, E)
    return (V * mass[:, None]).T @ V.conj()


def quadrature_kernel_entries(spec: MeasureSpec, E: np.ndarray, resolution=None) -> np.ndarray:
    """Quadrature for the weight part plus exact atom sums, indices given as exponent rows."""
    R = E.shape[0]
    K = np.zeros((R, R), dtype=complex)
    if not spec.weight.is_zero:
        rule = sphere_rule(spec.d, resolution)
        # fixed chunk order keeps the sums bit-stable
        for start in range(0, rule.size, _CHUNK):
            pts = rule.points[start : start + _CHUNK]
            ww = rule.weights[start : start + _CHUNK] * spec.weight(pts)
            V = _monomials(pts, E)
            K += (V * ww[:, None]).T @ V.conj()
    K += _atom_kernel(spec, E)
    return _hermitian_from_upper(K)


def quadrature_moment(spec: MeasureSpec, a, b, resolution=None) -> complex:
    a, b = as_index(a), as_index(b)
    E = np.array([a.entries, b.entries], dtype=np.int64)
    return complex(quadrature_kernel_entries(spec, E, resolution)[0, 1])


def kernel_window(spec: MeasureSpec, N: int, method: str = "auto", resolution=None) -> MomentKernel:
    """Moment kernel over ranks 0..N.

    method is "exact", "quadrature" or "auto" (exact whenever p = 2).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if method == "auto":
        method = "exact" if spec.exact_moments else "quadrature"
    if method == "exact" and not spec.exact_moments:
        raise ValueError("closed-form moments need exponent 2")
    if method == "quadrature":
        K = quadrature_kernel_entries(spec, exponent_array(N, spec.d), resolution)
        return MomentKernel(spec.d, N, K, "quadrature", False, spec)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    idx = indices_upto(N, spec.d)
    K = np.zeros((N + 1, N + 1), dtype=complex)
    for m, a in enumerate(idx):
        for n in range(m, N + 1):
            K[m, n] = moment(spec, a, idx[n])
    return MomentKernel(spec.d, N, _hermitian_from_upper(K), "exact", False, spec)


def check_measure_condition(K: MomentKernel, spec: MeasureSpec | None = None, N: int | None = None) -> float:
    """max over ranks <= N of |K(a, b) - sum_j K(a + e_j, b + e_j)|.

    Shifted entries outside the window come from `spec` (normalized the same
    way as K); without a spec only pairs whose shifts stay inside are checked.
    """
    N = K.N if N is None else N
    if N > K.N:
        raise ValueError(f"kernel only reaches rank {K.N}")
    spec = spec if spec is not None else K.spec
    d = K.d
    units = [MultiIndex.unit(j, d) for j in range(d)]
    cache: dict[tuple[MultiIndex, MultiIndex], complex] = {}

    def raw(a: MultiIndex, b: MultiIndex) -> complex:
        key = (a, b)
        if key not in cache:
            cache[key] = moment(spec, a, b)
        return cache[key]

    def entry(a: MultiIndex, b: MultiIndex) -> complex | None:
        ra, rb = shortlex_rank(a), shortlex_rank(b)
        if ra <= K.N and rb <= K.N:
            return complex(K.entries[ra, rb])
        if spec is None:
            return None
        if K.normalized:
            return raw(a, b) / np.sqrt(raw(a, a).real * raw(b, b).real)
        return raw(a, b)

    idx = indices_upto(N, d)
    worst = 0.0
    for m, a in enumerate(idx):
        for n, b in enumerate(idx):
            total = 0j
            for e in units:
                v = entry(a + e, b + e)
                if v is None:
                    break
                total += v
            else:
                worst = max(worst, abs(K.entries[m, n] - total))
    return float(worst)


# entropy


@dataclass(frozen=True)
class EntropyResult:
    """int log w dsigma; `log_integral` is -inf when the integral diverges or may diverge."""

    log_integral: float
    method: str
    nodes: int | None = None
    possibly_neg_infinity: bool = False
    error_estimate: float = 0.0

    @property
    def finite(self) -> bool:
        return math.isfinite(self.log_integral)

    @property
    def exp_value(self) -> float:
        return math.exp(self.log_integral) if self.finite else 0.0

    def to_json(self) -> dict:
        return {
            "log_integral": self.log_integral if self.finite else "neg_infinity",
            "method": self.method,
            "nodes": self.nodes,
        }


def _harmonic(n: int) -> float:
    return float(sum(Fraction(1, k) for k in range(1, n + 1)))


def _entropy_monomial(spec: MeasureSpec) -> float:
    # int log|zeta_j|^2 dsigma = psi(1) - psi(d) = -H_{d-1}
    (gam, c), = spec.weight.g.terms
    p = spec.weight.exponent
    return math.log(spec.weight.scale) + p * math.log(abs(c)) - 0.5 * p * gam.length * _harmonic(spec.d - 1)


def _entropy_circle(spec: MeasureSpec) -> float:
    # Jensen: int log|g| dtheta/2pi = log|lead| + sum over roots of log max(1, |r|)
    g = spec.weight.g
    deg = g.degree
    coeffs = [g.coefficient((k,)) for k in range(deg, -1, -1)]
    lead = coeffs[0]
    roots = np.roots(coeffs) if deg > 0 else np.array([])
    mean_log = math.log(abs(lead)) + float(np.sum(np.log(np.maximum(1.0, np.abs(roots)))))
    return math.log(spec.weight.scale) + spec.weight.exponent * mean_log


def _entropy_quadrature(spec: MeasureSpec, resolution) -> tuple[float, int, bool]:
    rule = sphere_rule(spec.d, resolution, radial="tanh-sinh")
    with np.errstate(divide="ignore"):
        logw = math.log(spec.weight.scale) + spec.weight.exponent * np.log(np.abs(spec.weight.g(rule.points)))
    clipped = bool(np.any(logw < LOG_FLOOR))
    logw = np.maximum(logw, LOG_FLOOR)
    return float(np.dot(rule.weights, logw)), rule.size, clipped


def entropy(spec: MeasureSpec, method: str = "auto", resolution=None) -> EntropyResult:
    """int log w dsigma for the absolutely continuous part w = s|g|^p.

    "auto" takes a closed form when one exists (monomial g, or d = 1 via
    Jensen's formula) and tanh-sinh quadrature otherwise.
    """
    w = spec.weight
    if w.is_zero:
        return EntropyResult(float("-inf"), "exact", None, True)
    if method == "auto":
        method = "exact" if (w.g.is_monomial() or spec.d == 1) else "quadrature"
    if method == "exact":
        if w.g.is_monomial():
            return EntropyResult(_entropy_monomial(spec), "exact")
        if spec.d == 1:
            return EntropyResult(_entropy_circle(spec), "exact")
        raise ValueError("no closed form for this weight; use quadrature")
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    if resolution is None and spec.d in ENTROPY_RESOLUTION:
        resolution = ENTROPY_RESOLUTION[spec.d]
    n_angle, n_radial = resolve_resolution(spec.d, resolution)
    if spec.d == 1:
        n_radial = 0
    value, nodes, clipped = _entropy_quadrature(spec, (n_angle, n_radial))
    if clipped:
        return EntropyResult(float("-inf"), "quadrature", nodes, True)
    coarse, _, _ = _entropy_quadrature(spec, (max(n_angle // 2, 1), max(n_radial // 2, 1)))
    return EntropyResult(value, "quadrature", nodes, False, abs(value - coarse))
