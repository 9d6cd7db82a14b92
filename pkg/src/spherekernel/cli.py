"""Command-line entry point.

Exit codes: 0 success, 2 identity violation, 3 positive-definiteness failure,
64 unreadable input or bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import NotPositiveDefinite
from .christoffel import christoffel_sequence
from .kernelfact import VerblunskyTable, reconstruct_kernel, verblunsky_table
from .measure import PRESETS, MeasureSpec, SpecError, load_spec, normalize, preset
from .moments import MomentKernel, entropy, kernel_window
from .multiindex import last_rank_of_level, shortlex_unrank
from .orthopoly import gram_schmidt
from .szego import CounterexampleFailure, counterexample_report, summary_report
from .verify import run_invariant_suite

EXIT_OK = 0
EXIT_IDENTITY = 2
EXIT_NOT_PD = 3
EXIT_USAGE = 64

COMMANDS = ("moments", "ops", "verblunsky", "christoffel", "szego", "verify", "reconstruct", "counterexample")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    spec_path: str | None = None
    preset: str | None = None
    N: int | None = None
    fmt: str = "json"
    nodes: int | None = None
    tol: float | None = None
    out: str | None = None
    method: str = "auto"
    gamma_path: str | None = None
    diag_path: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.N is not None and self.N < 0:
            raise UsageError("N must be nonnegative")
        if self.fmt not in ("json", "csv"):
            raise UsageError("format must be json or csv")


def default_N(d: int) -> int:
    if d == 1:
        return 20
    if d == 2:
        return 27
    return last_rank_of_level(4, d)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spherekernel", description="Moment kernels, Verblunsky coefficients and Christoffel values for measures on the complex sphere.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--spec", dest="spec_path", metavar="PATH", help="measure spec JSON file")
        src.add_argument("--preset", choices=sorted(PRESETS), help="built-in measure")
        p.add_argument("-N", type=int, default=None, help="last shortlex rank (default 27 for d=2)")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        p.add_argument("--nodes", type=int, default=None, help="quadrature nodes per direction")
        p.add_argument("--tol", type=float, default=None, help="override identity tolerances")
        p.add_argument("--out", metavar="DIR", default=None, help="write artifacts here instead of stdout")
        p.add_argument("--method", choices=("auto", "exact", "quadrature"), default="auto", help="moment engine")
        if name == "reconstruct":
            p.add_argument("--gamma", dest="gamma_path", metavar="PATH", help="gamma table CSV")
            p.add_argument("--diag", dest="diag_path", metavar="PATH", help="diagonal CSV")
    return parser


def parse_config(argv: Sequence[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(**{k: v for k, v in vars(ns).items()})


# formatting


def _num(x: float):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "neg_infinity"
    return x + 0.0  # drop negative zero


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, complex):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    return obj


def dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=False) + "\n"


def dump_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v) + 0.0) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _idx(r: int, d: int) -> str:
    return json.dumps(shortlex_unrank(r, d).to_list(), separators=(",", ":"))


def kernel_rows(K: MomentKernel):
    for m in range(K.N + 1):
        for n in range(K.N + 1):
            v = K.entries[m, n]
            yield m, n, _idx(m, K.d), _idx(n, K.d), float(v.real), float(v.imag)


KERNEL_HEADER = ("rank_row", "rank_col", "index_row", "index_col", "re", "im")
GAMMA_HEADER = ("i", "j", "index_i", "index_j", "re", "im", "defect")
DIAG_HEADER = ("rank", "index", "value")
CHRISTOFFEL_HEADER = ("n", "alpha_n", "lambda_upper", "lower_bound", "product_of_defects")


def gamma_rows(T: VerblunskyTable):
    D = T.defect
    for i, j, g in T.pairs():
        yield i, j, _idx(i, T.d), _idx(j, T.d), float(g.real), float(g.imag), float(D[i, j])


def read_gamma_csv(path: str) -> VerblunskyTable:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SpecError(f"{path}: empty gamma table")
    try:
        d = len(json.loads(rows[0]["index_i"]))
        N = max(int(r["j"]) for r in rows)
        gamma = np.zeros((N + 1, N + 1), dtype=complex)
        for r in rows:
            i, j = int(r["i"]), int(r["j"])
            if not 0 <= i < j:
                raise SpecError(f"{path}: bad pair ({i}, {j})")
            gamma[i, j] = complex(float(r["re"]), float(r["im"]))
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise SpecError(f"{path}: {exc}") from exc
    return VerblunskyTable(N, d, gamma)


def read_diag_csv(path: str) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    try:
        ordered = sorted(rows, key=lambda r: int(r["rank"]))
        if [int(r["rank"]) for r in ordered] != list(range(len(ordered))):
            raise SpecError(f"{path}: ranks must run 0..N without gaps")
        return np.array([float(r["value"]) for r in ordered])
    except (KeyError, ValueError) as exc:
        raise SpecError(f"{path}: {exc}") from exc


# commands


class Output:
    """Collects named artifacts; writes them to --out or concatenates to stdout."""

    def __init__(self, out_dir: str | None, stream=None):
        self.out_dir = out_dir
        self.stream = stream or sys.stdout

    def emit(self, name: str, text: str, primary: bool = True):
        if self.out_dir:
            os.makedirs(self.out_dir, exist_ok=True)
            with open(os.path.join(self.out_dir, name), "w", newline="") as fh:
                fh.write(text)
        elif primary:
            self.stream.write(text)


def _load(cfg: RunConfig) -> MeasureSpec:
    if cfg.spec_path:
        return load_spec(cfg.spec_path)
    return preset(cfg.preset or "lebesgue")


def _resolution(cfg: RunConfig):
    return cfg.nodes


def cmd_moments(cfg, spec, N, out: Output) -> int:
    K = kernel_window(normalize(spec), N, method=cfg.method, resolution=_resolution(cfg))
    if cfg.fmt == "csv":
        out.emit("kernel.csv", dump_csv(KERNEL_HEADER, kernel_rows(K)))
    else:
        rows = [dict(zip(KERNEL_HEADER, r)) for r in kernel_rows(K)]
        out.emit("kernel.json", dump_json({"d": K.d, "N": K.N, "provenance": K.provenance, "entries": rows}))
    return EXIT_OK


def cmd_ops(cfg, spec, N, out: Output) -> int:
    K = kernel_window(normalize(spec), N, method=cfg.method, resolution=_resolution(cfg))
    system = gram_schmidt(K)
    families = (("phi", system.phi), ("Phi", system.Phi), ("phi_sharp", system.phiSharp))
    if cfg.fmt == "csv":
        header = ["family", "rank", "index"]
        for k in range(N + 1):
            header += [f"c{k}_re", f"c{k}_im"]
        rows = []
        for fam, polys in families:
            for r, p in enumerate(polys):
                c = p.padded(N + 1)
                row = [fam, r, _idx(r, K.d)]
                for v in c:
                    row += [float(v.real), float(v.imag)]
                rows.append(row)
        out.emit("polynomials.csv", dump_csv(header, rows))
    else:
        data = {
            fam: [{"rank": r, "index": shortlex_unrank(r, K.d).to_list(), "coefficients": [[float(v.real), float(v.imag)] for v in p.coeffs]} for r, p in enumerate(polys)]
            for fam, polys in families
        }
        out.emit("polynomials.json", dump_json({"d": K.d, "N": N, **data}))
    return EXIT_OK


def cmd_verblunsky(cfg, spec, N, out: Output) -> int:
    K = kernel_window(normalize(spec), N, method=cfg.method, resolution=_resolution(cfg))
    T = verblunsky_table(K)
    diag_rows = [(r, _idx(r, K.d), float(K.entries[r, r].real)) for r in range(N + 1)]
    if cfg.fmt == "csv":
        out.emit("gamma.csv", dump_csv(GAMMA_HEADER, gamma_rows(T)))
    else:
        out.emit("gamma.json", dump_json({"d": K.d, "N": N, "gamma": [dict(zip(GAMMA_HEADER, r)) for r in gamma_rows(T)]}))
    out.emit("diag.csv", dump_csv(DIAG_HEADER, diag_rows), primary=False)
    return EXIT_OK


def cmd_christoffel(cfg, spec, N, out: Output) -> int:
    spec = normalize(spec)
    K = kernel_window(spec, N, method=cfg.method, resolution=_resolution(cfg))
    T = verblunsky_table(K)
    system = gram_schmidt(K)
    seq = christoffel_sequence(system, np.zeros(spec.d))
    lower = entropy(spec).exp_value
    prod = np.cumprod(1.0 - np.abs(T.row0()) ** 2)
    rows = []
    for n, (r, lam) in enumerate(zip(seq.ranks, seq.values)):
        rows.append((n, _idx(r, spec.d), lam, lower, float(prod[r])))
    if cfg.fmt == "csv":
        out.emit("christoffel.csv", dump_csv(CHRISTOFFEL_HEADER, rows))
    else:
        upper = rows[-1][2]
        out.emit(
            "christoffel.json",
            dump_json({
                "levels": [dict(zip(CHRISTOFFEL_HEADER, r)) for r in rows],
                "bracket": {"lower": lower, "upper": upper, "width": upper - lower},
            }),
        )
    return EXIT_OK


def cmd_szego(cfg, spec, N, out: Output) -> int:
    report = summary_report(spec, N, method=cfg.method, resolution=_resolution(cfg))
    if cfg.fmt == "csv":
        header = ("rank", "index", "defect_product", "sharp_at_origin", "cd_sum", "lambda_inverse", "residual")
        rows = [(r, _idx(r, spec.d), *(v[k] for k in header[2:])) for r, v in enumerate(report.second_list)]
        out.emit("szego.csv", dump_csv(header, rows))
    else:
        out.emit("szego.json", dump_json(report.to_json()))
    tol1 = 1e-8 if cfg.tol is None else cfg.tol
    tol2 = 1e-9 if cfg.tol is None else cfg.tol
    return EXIT_OK if report.identities_hold(tol1, tol2) else EXIT_IDENTITY


def cmd_verify(cfg, spec, N, out: Output) -> int:
    checks = run_invariant_suite(spec, N, cfg.tol, method=cfg.method, resolution=_resolution(cfg))
    ok = all(c.ok for c in checks)
    if cfg.fmt == "csv":
        out.emit("verify.csv", dump_csv(("name", "value", "tolerance", "ok"), [(c.name, c.value, c.tolerance, c.ok) for c in checks]))
    else:
        out.emit("verify.json", dump_json({"N": N, "ok": ok, "checks": [c.to_json() for c in checks]}))
    return EXIT_OK if ok else EXIT_IDENTITY


def cmd_reconstruct(cfg, spec, N, out: Output) -> int:
    tol = 1e-9 if cfg.tol is None else cfg.tol
    if cfg.gamma_path or cfg.diag_path:
        if not (cfg.gamma_path and cfg.diag_path):
            raise UsageError("reconstruct needs both --gamma and --diag")
        T = read_gamma_csv(cfg.gamma_path)
        diag = read_diag_csv(cfg.diag_path)
        N = T.N if cfg.N is None else min(cfg.N, T.N)
        if diag.size < N + 1:
            raise SpecError(f"diagonal has {diag.size} entries, need {N + 1}")
        try:
            K = reconstruct_kernel(diag[: N + 1], T.truncated(N), d=T.d)
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        error = float(np.max(np.abs(verblunsky_table(K).gamma - T.gamma[: N + 1, : N + 1])))
    else:
        K0 = kernel_window(normalize(spec), N, method=cfg.method, resolution=_resolution(cfg))
        T = verblunsky_table(K0)
        K = reconstruct_kernel(K0.entries.diagonal().real, T, d=K0.d)
        error = float(np.max(np.abs(K.entries - K0.entries)))
    if cfg.fmt == "csv":
        out.emit("kernel.csv", dump_csv(KERNEL_HEADER, kernel_rows(K)))
    else:
        rows = [dict(zip(KERNEL_HEADER, r)) for r in kernel_rows(K)]
        out.emit("kernel.json", dump_json({"d": K.d, "N": K.N, "provenance": K.provenance, "round_trip_error": error, "entries": rows}))
    return EXIT_OK if error <= tol else EXIT_IDENTITY


def cmd_counterexample(cfg, spec, N, out: Output) -> int:
    try:
        report = counterexample_report(N)
        code = EXIT_OK
        data = report.to_json()
    except CounterexampleFailure as exc:
        code = EXIT_IDENTITY
        data = {"ok": False, "error": str(exc)}
    out.emit("counterexample.json", dump_json(data))
    return code


HANDLERS = {
    "moments": cmd_moments,
    "ops": cmd_ops,
    "verblunsky": cmd_verblunsky,
    "christoffel": cmd_christoffel,
    "szego": cmd_szego,
    "verify": cmd_verify,
    "reconstruct": cmd_reconstruct,
    "counterexample": cmd_counterexample,
}


def run(cfg: RunConfig, stream=None) -> int:
    out = Output(cfg.out, stream)
    if cfg.command == "counterexample":
        spec = preset("counterexample")
    elif cfg.command == "reconstruct" and cfg.gamma_path:
        spec = None
    else:
        spec = _load(cfg)
    if spec is not None:
        N = default_N(spec.d) if cfg.N is None else cfg.N
    else:
        N = cfg.N
    return HANDLERS[cfg.command](cfg, spec, N, out)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        return run(cfg)
    except (UsageError, SpecError, OSError) as exc:
        print(f"spherekernel: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotPositiveDefinite as exc:
        print(f"spherekernel: kernel is not positive definite at rank {exc.rank} ({exc})", file=sys.stderr)
        return EXIT_NOT_PD


if __name__ == "__main__":
    sys.exit(main())
