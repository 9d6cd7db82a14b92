"""Summary report tying moments, factorizations, polynomials and entropy together.

The first list holds four expressions for |Phi_a|^2; the second list holds
four expressions for the truncated Christoffel value at the origin. Each list
is internally equal by theorem, so residuals measure numerical error only.
The entropy exp(int log w dsigma) bounds the second list from below; whether
the limit reaches it is what the verdict reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._linalg import NotPositiveDefinite
from .christoffel import energy, lambda_rank_via_inverse, minimizer_rank
from .kernelfact import VerblunskyTable, verblunsky_table, window_logdet
from .measure import MeasureSpec, Polynomial, counterexample_spec, normalize, spec_to_json
from .moments import EntropyResult, MomentKernel, entropy, kernel_window
from .multiindex import as_index, indices_upto, last_rank_of_level, level_of_rank, shortlex_rank
from .orthopoly import OrthonormalSystem, gram_schmidt
from .quadrature import sphere_rule

EQUALITY = "equality-certified"
STRICT_GAP = "strict-gap"
INEQUALITY = "inequality-only"

BUDGET_FLOOR = 1e-12
STABILITY_EPS = 1e-12


class StabilityError(ValueError):
    """A candidate's denominator vanishes (numerically) at a quadrature node."""


class CounterexampleFailure(AssertionError):
    """One of the counterexample assertions did not hold."""


# candidates for the hypothesis check


@dataclass(frozen=True)
class RationalCandidate:
    """f(z) = (g(0) / g(z))^(p/2), so that f(0) = 1."""

    g: Polynomial
    p: float
    g0: complex

    def __call__(self, z):
        return (self.g0 / self.g(z)) ** (self.p / 2)

    def modulus_sq(self, z):
        return np.abs(self.g0 / self.g(z)) ** self.p

    def at_origin(self) -> complex:
        return complex(self(np.zeros(self.g.d)))


def candidate_f_from_g(g: Polynomial, p: float = 2.0) -> RationalCandidate:
    g0 = complex(g(np.zeros(g.d)))
    if abs(g0) <= STABILITY_EPS:
        raise ValueError("g(0) = 0: no candidate with f(0) = 1 of this form")
    return RationalCandidate(g, float(p), g0)


def check_sv_hypothesis(
    spec: MeasureSpec,
    f: RationalCandidate,
    resolution=None,
    ent: EntropyResult | None = None,
) -> float:
    """exp(int log w dsigma) - int |f|^2 w dsigma; nonnegative certifies the hypothesis."""
    if abs(f.at_origin() - 1) > 1e-12:
        raise ValueError("candidate must satisfy f(0) = 1")
    ent = entropy(spec) if ent is None else ent
    w = spec.weight
    if w.is_zero:
        return ent.exp_value
    if f.g == w.g and f.p == w.exponent:
        # |f|^2 w is the constant s |g(0)|^p
        energy_f = w.scale * abs(f.g0) ** f.p
    else:
        rule = sphere_rule(spec.d, resolution)
        den = np.abs(f.g(rule.points))
        if np.min(den) <= STABILITY_EPS:
            raise StabilityError("candidate denominator vanishes at a quadrature node")
        energy_f = float(np.dot(rule.weights, (np.abs(f.g0) / den) ** f.p * w(rule.points)))
    return ent.exp_value - energy_f


def _unit_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def closed_ball_grid(d: int, grid: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic sample of the closed ball: radial shells times a simplex-phase sphere grid."""
    m = grid if d <= 2 else max(4, int(round((2e6 / grid) ** (1 / (2 * d - 1)))))
    t = _unit_grid(m)
    if d == 1:
        u = np.ones((1, 1))
    else:
        mesh = np.meshgrid(*([t] * (d - 1)), indexing="ij")
        cols, rest = [], np.ones(mesh[0].size)
        for k in range(d - 1):
            tk = mesh[k].ravel()
            cols.append(rest * tk)
            rest = rest * (1 - tk)
        cols.append(rest)
        u = np.stack(cols, axis=1)
    phases = np.exp(2j * np.pi * np.arange(m) / m)
    pm = np.meshgrid(*([phases] * d), indexing="ij")
    ph = np.stack([p.ravel() for p in pm], axis=1)
    sphere = (np.sqrt(u)[:, None, :] * ph[None, :, :]).reshape(-1, d)
    return sphere, _unit_grid(grid)


def stable_check(g: Polynomial, grid: int = 32) -> float:
    """Minimum of |g| over the sampled closed ball; a sampled certificate, not a proof."""
    sphere, shells = closed_ball_grid(g.d, grid)
    best = math.inf
    for r in shells:
        best = min(best, float(np.min(np.abs(g(r * sphere)))))
    return best


# summary report


def _relative_spread(values) -> float:
    v = np.asarray(values, dtype=float)
    top = float(np.max(np.abs(v)))
    return float((np.max(v) - np.min(v)) / top) if top > 0 else 0.0


def first_list_items(K: MomentKernel, table: VerblunskyTable, system: OrthonormalSystem, r: int) -> dict:
    """Four independent routes to |Phi_a|^2 at rank r."""
    G = K.gram
    Phi = system.Phi[r].coeffs
    norm_sq = float(np.vdot(Phi, G[: r + 1, : r + 1] @ Phi).real)
    lead = system.leading_coefficient(r)
    det_ratio = math.exp(window_logdet(K, 0, r) - window_logdet(K, 0, r - 1))
    defects = 1.0 - np.abs(table.gamma[:r, r]) ** 2
    prod = float(K.entries[r, r].real * np.prod(defects))
    items = {"norm_sq": norm_sq, "inv_lead_sq": 1.0 / lead**2, "det_ratio": det_ratio, "defect_product": prod}
    items["residual"] = _relative_spread(list(items.values()))
    return items


def second_list_items(K: MomentKernel, table: VerblunskyTable, system: OrthonormalSystem) -> list[dict]:
    """Four routes to lambda at the origin for every truncation rank 0..N."""
    zero = np.zeros(K.d)
    defects = np.cumprod(1.0 - np.abs(table.row0()) ** 2)
    phi0 = system.values_at(zero)
    partial = np.cumsum(np.abs(phi0) ** 2)
    out = []
    for r in range(system.N + 1):
        sharp0 = system.phiSharp[r](zero)
        vals = {
            "defect_product": float(defects[r]),
            "sharp_at_origin": 1.0 / abs(sharp0) ** 2,
            "cd_sum": 1.0 / float(partial[r]),
            "lambda_inverse": lambda_rank_via_inverse(K, r, zero),
        }
        vals["residual"] = float(max(vals.values()) - min(vals.values()))
        out.append(vals)
    return out


def first_list_residual(spec: MeasureSpec, a) -> float:
    r = shortlex_rank(as_index(a))
    if r < 1:
        raise ValueError("the first list starts at rank 1")
    K = kernel_window(normalize(spec), r)
    return first_list_items(K, verblunsky_table(K), gram_schmidt(K), r)["residual"]


@dataclass
class SzegoReport:
    N: int
    d: int
    spec: MeasureSpec
    first_list: list[dict]
    second_list: list[dict]
    entropy: EntropyResult
    first_residual: float
    second_residual: float
    szego_quantity: float
    lambda_upper: float
    entropy_rhs: float
    error_budget: float
    last_level_drop: float
    hypothesis_slack: float | None
    verdict: str
    absolutely_continuous: dict | None = None
    max_gamma_row0: float = 0.0
    max_gamma: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        return self.lambda_upper - self.entropy_rhs

    @property
    def below_entropy(self) -> float:
        """How far the second list dips under the entropy bound (should be <= 0)."""
        return max(0.0, self.entropy_rhs - min(v["lambda_inverse"] for v in self.second_list))

    def identities_hold(self, tol_first: float = 1e-8, tol_second: float = 1e-9) -> bool:
        return self.first_residual <= tol_first and self.second_residual <= tol_second and self.below_entropy <= 1e-9

    def to_json(self) -> dict:
        idx = indices_upto(self.N, self.d)
        return {
            "N": self.N,
            "d": self.d,
            "spec": spec_to_json(self.spec),
            "first_list": [dict(rank=r, index=idx[r].to_list(), **v) for r, v in enumerate(self.first_list, start=1)],
            "second_list": [dict(rank=r, index=idx[r].to_list(), **v) for r, v in enumerate(self.second_list)],
            "first_residual": self.first_residual,
            "second_residual": self.second_residual,
            "szego_quantity": self.szego_quantity,
            "lambda_upper": self.lambda_upper,
            "entropy": self.entropy.to_json(),
            "entropy_rhs": self.entropy_rhs,
            "entropy_finite": self.entropy.finite,
            "gap": self.gap,
            "bracket": {"lower": self.entropy_rhs, "upper": self.lambda_upper, "width": self.gap},
            "error_budget": self.error_budget,
            "last_level_drop": self.last_level_drop,
            "hypothesis_slack": self.hypothesis_slack,
            "max_gamma_row0": self.max_gamma_row0,
            "max_gamma": self.max_gamma,
            "absolutely_continuous": self.absolutely_continuous,
            "verdict": self.verdict,
            **self.extras,
        }


def decide_verdict(
    gap: float,
    budget: float,
    last_level_drop: float,
    slack: float | None,
    entropy_finite: bool,
    width_threshold: float = 1e-3,
    slack_tol: float = 1e-8,
) -> str:
    """Equality needs a hypothesis certificate and a narrow bracket; a strict gap
    needs the bracket to stay wide while the defect product has stopped moving."""
    if slack is not None and slack >= -slack_tol and gap <= width_threshold:
        return EQUALITY
    if entropy_finite and gap > 10 * budget and last_level_drop <= budget:
        return STRICT_GAP
    return INEQUALITY


def _hypothesis_slack(spec: MeasureSpec, ent: EntropyResult) -> float | None:
    w = spec.weight
    if w.is_zero:
        return None
    try:
        f = candidate_f_from_g(w.g, w.exponent)
        return check_sv_hypothesis(spec, f, ent=ent)
    except (ValueError, StabilityError):
        return None


def summary_report(
    spec: MeasureSpec,
    N: int = 27,
    method: str = "auto",
    resolution=None,
    entropy_method: str = "auto",
    width_threshold: float = 1e-3,
) -> SzegoReport:
    """Items of both lists up to rank N, the entropy bound, and a verdict.

    The spec is normalized to a probability measure first.
    """
    spec = normalize(spec)
    K = kernel_window(spec, N, method=method, resolution=resolution)
    table = verblunsky_table(K)
    system = gram_schmidt(K)
    first = [first_list_items(K, table, system, r) for r in range(1, N + 1)]
    second = second_list_items(K, table, system)
    ent = entropy(spec, method=entropy_method)

    first_res = max((v["residual"] for v in first), default=0.0)
    second_res = max(v["residual"] for v in second)
    upper = second[N]["lambda_inverse"]
    rhs = ent.exp_value

    level = level_of_rank(N, spec.d)
    prev = last_rank_of_level(level - 1, spec.d) if level > 0 else 0
    drop = second[prev]["defect_product"] - second[N]["defect_product"]
    budget = max(second_res, BUDGET_FLOOR) + ent.error_estimate
    slack = _hypothesis_slack(spec, ent)
    verdict = decide_verdict(upper - rhs, budget, drop, slack, ent.finite, width_threshold)

    ac = None
    if spec.atoms and not spec.weight.is_zero:
        K_ac = kernel_window(spec.without_atoms(), N, method=method, resolution=resolution)
        P = minimizer_rank(system, N, np.zeros(spec.d))
        try:
            lam_ac = lambda_rank_via_inverse(K_ac, N, np.zeros(spec.d))
        except NotPositiveDefinite:
            lam_ac = None
        ac = {"minimizer_energy": energy(K_ac, P), "lambda_ac": lam_ac}

    return SzegoReport(
        N=N,
        d=spec.d,
        spec=spec,
        first_list=first,
        second_list=second,
        entropy=ent,
        first_residual=first_res,
        second_residual=second_res,
        szego_quantity=second[N]["defect_product"],
        lambda_upper=upper,
        entropy_rhs=rhs,
        error_budget=budget,
        last_level_drop=drop,
        hypothesis_slack=slack,
        verdict=verdict,
        absolutely_continuous=ac,
        max_gamma_row0=float(np.max(np.abs(table.row0()))),
        max_gamma=table.max_modulus(),
    )


def counterexample_report(N: int = 27) -> SzegoReport:
    """Run 2|z1|^2 dsigma on the sphere of C^2 and assert the gap 1 - 2/e."""
    report = summary_report(counterexample_spec(), N)
    quad = entropy(report.spec, method="quadrature")
    target = 2 * math.exp(-1)
    report.extras["entropy_quadrature"] = quad.to_json()
    report.extras["entropy_rhs_quadrature"] = quad.exp_value
    checks = {
        "gamma_zero": report.max_gamma <= 1e-9,
        "product_one": abs(report.szego_quantity - 1) <= 1e-9,
        "entropy_exact": abs(report.entropy_rhs - target) <= 1e-8,
        "entropy_quadrature": abs(quad.exp_value - target) <= 1e-6,
        "gap": abs(report.gap - (1 - target)) <= 1e-6,
        "verdict": report.verdict == STRICT_GAP,
    }
    report.extras["checks"] = checks
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise CounterexampleFailure(
            f"counterexample checks failed: {failed}; max|gamma|={report.max_gamma:.3e}, "
            f"product={report.szego_quantity!r}, entropy_rhs={report.entropy_rhs!r}, "
            f"quadrature={quad.exp_value!r}, gap={report.gap!r}, verdict={report.verdict}"
        )
    return report
