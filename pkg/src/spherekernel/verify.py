"""Invariant suite run by the `verify` command."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .christoffel import lambda_rank, lambda_rank_via_inverse
from .kernelfact import determinant_identity_residual, reconstruct_kernel, verblunsky_table
from .measure import MeasureSpec, normalize
from .moments import check_measure_condition, kernel_window
from .orthopoly import gram_schmidt, recurrence_residual
from .szego import summary_report

ROUND_TRIP_MAX_RANK = 14
PROBE_POINT = (0.3, 0.1j, -0.2, 0.05j)

DEFAULT_TOLERANCES = {
    "hermitian": 1e-13,
    "measure_condition": 1e-11,
    "orthonormality": 1e-10,
    "gamma_in_disc": 0.0,
    "determinant_identity": 1e-8,
    "recurrence": 1e-9,
    "gamma_from_polynomials": 1e-9,
    "first_list": 1e-8,
    "second_list": 1e-9,
    "entropy_lower_bound": 1e-9,
    "christoffel_two_path": 1e-10,
    "christoffel_monotone": 1e-12,
    "round_trip": 1e-9,
}


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return bool(self.value <= self.tolerance)

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance, "ok": self.ok}


def run_invariant_suite(spec: MeasureSpec, N: int, tol: float | None = None, method: str = "auto", resolution=None) -> list[Check]:
    """Every identity the library can test for one spec, up to rank N."""
    tols = dict(DEFAULT_TOLERANCES)
    if tol is not None:
        tols.update({k: tol for k in tols if k != "gamma_in_disc"})
    spec = normalize(spec)
    K = kernel_window(spec, N, method=method, resolution=resolution)
    if K.provenance != "exact" and tol is None:
        tols["measure_condition"] = 1e-9
    table = verblunsky_table(K)
    system = gram_schmidt(K)
    zero = np.zeros(spec.d)
    probe = np.array(PROBE_POINT[: spec.d])
    out = [
        Check("hermitian", K.hermitian_defect(), tols["hermitian"]),
        Check("measure_condition", check_measure_condition(K, spec), tols["measure_condition"]),
        Check("orthonormality", system.gram_defect(), tols["orthonormality"]),
        Check("gamma_in_disc", max(0.0, table.max_modulus() - 1.0), tols["gamma_in_disc"]),
    ]
    det = max(determinant_identity_residual(K, table, K.indices[r]) for r in range(N + 1))
    out.append(Check("determinant_identity", det, tols["determinant_identity"]))
    if N >= 1:
        rec = max(max(recurrence_residual(system, table, K.indices[r])) for r in range(1, N + 1))
        g0 = max(abs(table[0, r] + system.phi[r](zero) / system.phiSharp[r](zero)) for r in range(1, N + 1))
        out.append(Check("recurrence", rec, tols["recurrence"]))
        out.append(Check("gamma_from_polynomials", g0, tols["gamma_from_polynomials"]))

    report = summary_report(spec, N, method=method, resolution=resolution)
    out.append(Check("first_list", report.first_residual, tols["first_list"]))
    out.append(Check("second_list", report.second_residual, tols["second_list"]))
    out.append(Check("entropy_lower_bound", report.below_entropy, tols["entropy_lower_bound"]))

    two_path = 0.0
    for z in (zero, probe):
        for r in range(N + 1):
            a, b = lambda_rank(system, r, z), lambda_rank_via_inverse(K, r, z)
            two_path = max(two_path, abs(a - b) / abs(b))
    out.append(Check("christoffel_two_path", two_path, tols["christoffel_two_path"]))
    rise = 0.0
    for z in (zero, probe):
        vals = [lambda_rank(system, r, z) for r in range(N + 1)]
        rise = max([rise] + [b - a for a, b in zip(vals, vals[1:])])
    out.append(Check("christoffel_monotone", rise, tols["christoffel_monotone"]))

    M = min(N, ROUND_TRIP_MAX_RANK)
    Km = K.truncated(M)
    tm = verblunsky_table(Km)
    R = reconstruct_kernel(Km.entries.diagonal().real, tm, d=spec.d)
    rt = max(float(np.max(np.abs(R.entries - Km.entries))), float(np.max(np.abs(verblunsky_table(R).gamma - tm.gamma))))
    out.append(Check("round_trip", rt, tols["round_trip"]))
    return out
