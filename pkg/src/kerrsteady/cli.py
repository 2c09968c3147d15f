"""Command-line front end for the steady-state solvers.

Five subcommands: meanfield-sweep and exact-sweep walk a drive grid,
resonance-scan walks a detuning grid, residual certifies a closed-form
steady state against the doubled-space generator, and validate compares
exact moments against the density-matrix oracle over a manifest of
parameter points.

Outputs are deterministic to the byte: floats are printed with 17
significant digits, every table carries a single metadata comment line
with sorted JSON keys, and grid rows are assembled in grid order no
matter how many workers computed them.

Parameters arrive either as explicit flags (absolute frequencies, or
ratios of a declared unit via --unit) or as a JSON config file; the two
styles cannot be mixed in one invocation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from .errors import KerrSteadyError
from .exact_linear import correlation_linear, exact_drive_point
from .exact_twophoton import (
    correlation_twophoton,
    scan_point,
    strict_local_maxima,
    wavefunction_twophoton,
)
from .keldysh_ops import build_generalized_hamiltonian_clq, steady_residual
from .lindblad_oracle import adaptive_cutoff
from .meanfield import classify_stability, photon_number_branches
from .model import ModelParams, params_from_dict

_PARAM_FLAGS = (
    ("delta_c", "--delta-c", "cavity detuning"),
    ("chi", "--chi", "Kerr coefficient"),
    ("gamma", "--gamma", "one-photon loss rate"),
    ("omega", "--omega", "coherent drive amplitude"),
    ("lambda_re", "--lambda2", "two-photon pump, real part"),
    ("lambda_im", "--lambda2-im", "two-photon pump, imaginary part"),
    ("kappa", "--kappa", "two-photon loss rate"),
)


class _UsageError(Exception):
    """Bad invocation; reported on stderr with exit status 2."""


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path} is not valid JSON: {exc}") from exc


def _add_param_flags(parser: argparse.ArgumentParser, names: tuple[str, ...]) -> None:
    group = parser.add_argument_group("model parameters")
    group.add_argument(
        "--unit",
        choices=("gamma", "chi"),
        help="interpret parameter and grid values as ratios of this rate "
        "(whose own flag then gives its absolute value, default 1)",
    )
    group.add_argument(
        "--config",
        metavar="FILE",
        help="JSON config file instead of parameter flags",
    )
    for name, flag, help_text in _PARAM_FLAGS:
        if name in names:
            group.add_argument(flag, dest=f"p_{name}", type=float, help=help_text)


def _resolve_params(
    args, names: tuple[str, ...], inject: dict | None = None
) -> tuple[ModelParams, float]:
    """Build ModelParams from flags or config; return it with the unit anchor.

    The anchor is what one grid unit is worth in absolute frequency: the
    declared unit's absolute value under --unit, and 1 otherwise.
    inject supplies placeholder values for quantities the grid will
    overwrite per point (so the config contract stays satisfied).
    """
    given = {}
    for name in names:
        value = getattr(args, f"p_{name}", None)
        if value is not None:
            given[name] = value
    if args.config is not None:
        if given or args.unit is not None:
            raise _UsageError("--config cannot be combined with parameter flags")
        raw = dict(_load_json(args.config))
        anchor = 1.0
        if isinstance(raw.get("unit"), str):
            anchor_value = raw.get(raw["unit"], 1.0)
            anchor = float(anchor_value) if isinstance(anchor_value, (int, float)) else 1.0
        for key, value in (inject or {}).items():
            ratio_key = f"{key}_over_{raw['unit']}" if "unit" in raw else key
            if key not in raw and ratio_key not in raw:
                raw[ratio_key] = value
        return params_from_dict(raw), anchor
    if args.unit is None:
        d = dict(given)
        for key, value in (inject or {}).items():
            d.setdefault(key, value)
        return params_from_dict(d), 1.0
    unit = args.unit
    anchor = given.pop(unit, 1.0)
    d: dict = {"unit": unit, unit: anchor}
    for name, value in given.items():
        d[f"{name}_over_{unit}"] = value
    for key, value in (inject or {}).items():
        d.setdefault(f"{key}_over_{unit}", value)
    return params_from_dict(d), anchor


def _grid(start: float, stop: float, step: float, what: str) -> list[float]:
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise _UsageError(f"{what} grid bounds must be finite")
    if step <= 0.0:
        raise _UsageError(f"{what} grid step must be > 0, got {step}")
    if stop < start:
        raise _UsageError(f"{what} grid is empty: from {start} to {stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _json_params(params: ModelParams) -> dict:
    return {
        "delta_c": params.delta_c,
        "chi": params.chi,
        "omega": params.omega,
        "gamma": params.gamma,
        "lambda_re": params.lambda_2ph.real,
        "lambda_im": params.lambda_2ph.imag,
        "kappa": params.kappa,
    }


def _write_table(out, meta: dict, header: list[str], rows: list[list]) -> None:
    out.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _emit(args, write_body) -> None:
    if args.output is None:
        write_body(sys.stdout)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_body(fh)


def _map_grid(task, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [task(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(items) // (4 * workers))
        return list(pool.map(task, items, chunksize=chunk))


def _meanfield_task(item) -> list[list]:
    params, omega = item
    at_om = params.replace(omega=omega)
    rows = []
    for idx, branch in enumerate(photon_number_branches(at_om)):
        branch = classify_stability(branch, at_om)
        rows.append(
            [omega, idx, branch.n, branch.a0.real, branch.a0.imag,
             bool(branch.stable), branch.degenerate]
        )
    return rows


def _exact_task(item) -> tuple:
    params, omega, l, k = item
    row = exact_drive_point(params, omega)
    extra = None
    if (l, k) != (1, 1):
        extra = correlation_linear(params.replace(omega=omega), l, k).value
    return row, extra


def _scan_task(item) -> tuple[float, float]:
    params, delta_c = item
    return scan_point(params, delta_c)


def _cmd_meanfield_sweep(args) -> int:
    params, anchor = _resolve_params(args, ("delta_c", "chi", "gamma"), inject={"omega": 0.0})
    grid = _grid(args.omega_from, args.omega_to, args.omega_step, "omega")
    items = [(params, g * anchor) for g in grid]
    per_point = _map_grid(_meanfield_task, items, args.workers)
    meta = {
        "command": "meanfield-sweep",
        "grid": {"from": args.omega_from, "to": args.omega_to, "step": args.omega_step,
                 "unit": args.unit or "absolute"},
        "params": _json_params(params),
    }
    rows = [row for chunk in per_point for row in chunk]
    _emit(args, lambda out: _write_table(
        out, meta,
        ["omega", "branch_index", "n", "re_a0", "im_a0", "stable", "degenerate"],
        rows,
    ))
    return 0


def _cmd_exact_sweep(args) -> int:
    if args.l < 0 or args.k < 0:
        raise _UsageError("moment orders --l and --k must be >= 0")
    params, anchor = _resolve_params(args, ("delta_c", "chi", "gamma"), inject={"omega": 0.0})
    grid = _grid(args.omega_from, args.omega_to, args.omega_step, "omega")
    items = [(params, g * anchor, args.l, args.k) for g in grid]
    results = _map_grid(_exact_task, items, args.workers)
    custom = (args.l, args.k) != (1, 1)
    header = ["omega", "n_exact", "re_a", "im_a", "g2"]
    if custom:
        header += ["value_re", "value_im"]
    rows = []
    for point, extra in results:
        row = [point.omega, point.n, point.amplitude.real, point.amplitude.imag, point.g2]
        if custom:
            row += [extra.real, extra.imag]
        rows.append(row)
    meta = {
        "command": "exact-sweep",
        "grid": {"from": args.omega_from, "to": args.omega_to, "step": args.omega_step,
                 "unit": args.unit or "absolute"},
        "moment": {"l": args.l, "k": args.k},
        "params": _json_params(params),
    }
    _emit(args, lambda out: _write_table(out, meta, header, rows))
    return 0


def _cmd_resonance_scan(args) -> int:
    params, anchor = _resolve_params(
        args,
        ("chi", "gamma", "omega", "lambda_re", "lambda_im", "kappa"),
        inject={"delta_c": 0.0},
    )
    if params.chi == 0.0:
        raise _UsageError("resonance-scan needs a nonzero --chi")
    grid = _grid(args.delta_from, args.delta_to, args.delta_step, "detuning")
    items = [(params, g * anchor) for g in grid]
    pairs = _map_grid(_scan_task, items, args.workers)
    peaks = set(strict_local_maxima([n for n, _ in pairs]))
    rows = [
        [(g * anchor) / params.chi, n, g2, i in peaks]
        for i, (g, (n, g2)) in enumerate(zip(grid, pairs))
    ]
    meta = {
        "command": "resonance-scan",
        "grid": {"from": args.delta_from, "to": args.delta_to, "step": args.delta_step,
                 "unit": args.unit or "absolute"},
        "params": _json_params(params),
    }
    _emit(args, lambda out: _write_table(
        out, meta, ["delta_c_over_chi", "n_exact", "g2", "is_peak"], rows
    ))
    return 0


def _cmd_residual(args) -> int:
    params, _ = _resolve_params(
        args,
        ("delta_c", "chi", "gamma", "omega", "lambda_re", "lambda_im", "kappa"),
    )
    psi = wavefunction_twophoton(params, truncation=args.cutoff_cl)
    ham = build_generalized_hamiltonian_clq(params, (args.cutoff_cl, args.cutoff_q))
    report = steady_residual(ham, psi, args.interior)
    payload = {
        "residual_norm": report.residual_norm,
        "edge_norm": report.edge_norm,
        "interior_cut": report.interior_cut,
        "cutoffs": [args.cutoff_cl, args.cutoff_q],
    }
    _emit(args, lambda out: out.write(json.dumps(payload, sort_keys=True) + "\n"))
    return 0


def _cmd_validate(args) -> int:
    manifest = _load_json(args.manifest)
    if isinstance(manifest, dict):
        manifest = manifest.get("cases")
    if not isinstance(manifest, list) or not manifest:
        raise _UsageError("manifest must be a nonempty JSON list of cases")
    rows = []
    all_pass = True
    for idx, case in enumerate(manifest):
        if not isinstance(case, dict) or "params" not in case:
            raise _UsageError(f"case {idx} must be an object with a 'params' entry")
        params = params_from_dict(case["params"])
        l = int(case.get("l", 1))
        k = int(case.get("k", 1))
        point_id = str(case.get("id", idx))
        if params.is_two_photon:
            exact = correlation_twophoton(params, l, k).value
        else:
            exact = correlation_linear(params, l, k).value
        cutoff, oracle = adaptive_cutoff(params, observable=(l, k), tol=args.oracle_tol)
        oracle = complex(oracle)
        diff = abs(exact - oracle)
        rel_err = float(diff / abs(oracle)) if abs(oracle) > 1e-12 else float(diff)
        ok = bool(rel_err <= args.tol)
        all_pass = all_pass and ok
        rows.append(
            [point_id, f"corr_l{l}_k{k}", _fmt_complex(exact), _fmt_complex(oracle),
             rel_err, cutoff, ok]
        )
    meta = {
        "command": "validate",
        "manifest": args.manifest,
        "oracle_tol": args.oracle_tol,
        "tol": args.tol,
    }
    _emit(args, lambda out: _write_table(
        out, meta,
        ["point_id", "observable", "exact", "oracle", "rel_err", "cutoff", "pass"],
        rows,
    ))
    return 0 if all_pass else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrsteady",
        description="Exact steady states of driven-dissipative Kerr resonators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, workers: bool = True):
        p.add_argument("-o", "--output", metavar="FILE",
                       help="write here instead of stdout")
        if workers:
            p.add_argument("--workers", type=int, default=1,
                           help="worker processes for grid points (default 1)")

    p = sub.add_parser("meanfield-sweep", help="semiclassical branches across a drive grid")
    _add_param_flags(p, ("delta_c", "chi", "gamma"))
    p.add_argument("--omega-from", type=float, required=True)
    p.add_argument("--omega-to", type=float, required=True)
    p.add_argument("--omega-step", type=float, required=True)
    add_common(p)
    p.set_defaults(run=_cmd_meanfield_sweep)

    p = sub.add_parser("exact-sweep", help="exact response across a drive grid")
    _add_param_flags(p, ("delta_c", "chi", "gamma"))
    p.add_argument("--omega-from", type=float, required=True)
    p.add_argument("--omega-to", type=float, required=True)
    p.add_argument("--omega-step", type=float, required=True)
    p.add_argument("--l", type=int, default=1, help="extra moment order, creation side")
    p.add_argument("--k", type=int, default=1, help="extra moment order, annihilation side")
    add_common(p)
    p.set_defaults(run=_cmd_exact_sweep)

    p = sub.add_parser("resonance-scan", help="photon number across a detuning grid")
    _add_param_flags(p, ("chi", "gamma", "omega", "lambda_re", "lambda_im", "kappa"))
    p.add_argument("--delta-from", type=float, required=True)
    p.add_argument("--delta-to", type=float, required=True)
    p.add_argument("--delta-step", type=float, required=True)
    add_common(p)
    p.set_defaults(run=_cmd_resonance_scan)

    p = sub.add_parser("residual", help="doubled-space certificate of a closed-form state")
    _add_param_flags(p, ("delta_c", "chi", "gamma", "omega", "lambda_re", "lambda_im", "kappa"))
    p.add_argument("--cutoff-cl", type=int, default=60, help="classical-mode Fock cutoff")
    p.add_argument("--cutoff-q", type=int, default=4, help="quantum-mode Fock cutoff")
    p.add_argument("--interior", type=int, default=50, help="classical-mode interior cut")
    add_common(p, workers=False)
    p.set_defaults(run=_cmd_residual)

    p = sub.add_parser("validate", help="compare exact moments against the oracle")
    p.add_argument("--manifest", required=True, metavar="FILE",
                   help="JSON list of cases: {params, l, k, id}")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="relative disagreement that fails a case (default 1e-6)")
    p.add_argument("--oracle-tol", type=float, default=1e-8,
                   help="oracle cutoff-doubling convergence tolerance (default 1e-8)")
    add_common(p, workers=False)
    p.set_defaults(run=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KerrSteadyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
