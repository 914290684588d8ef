"""Command-line front end: ``fccs <subcommand> ...``.

Exit status is 0 on success, 1 when a checked tolerance fails or the numerics
break down, and 2 for usage errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .adaptive import adaptive_integrate
from .cheb1d import MIDPOINT, TWO_POINT
from .fcc1d import build_rule, integrate_1d
from .fem import fem_solve
from .fields import builtin_model, constant_field, linear_source, model_from_config, sine_field, zero_source
from .filon_weights import moments, oracle_weight
from .hna import HelmholtzProblem, ResonanceError, SpatialMesh, assemble_u1, solve
from .integrands import UnknownIntegrandError, get_integrand
from .sparse import fccs_integrate, make_plan
from .tables import GatedTableError, run_table
from .uq import Adaptive, expectation_u1, parse_method

ORACLE_TOL = 1e-12
LEVEL1 = {"midpoint": MIDPOINT, "cc2": TWO_POINT}


class UsageError(ValueError):
    pass


# -- serialization ------------------------------------------------------------------


def _scalar(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def _json_value(v):
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _scalar(v.real), "im": _scalar(v.imag)}
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return _scalar(v)


def _flatten(record: dict) -> dict:
    out = {}
    for key, v in record.items():
        if isinstance(v, (complex, np.complexfloating)):
            out[f"{key}_re"] = _scalar(v.real)
            out[f"{key}_im"] = _scalar(v.imag)
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(_json_value(v))
        elif v is None:
            out[key] = ""
        else:
            out[key] = _scalar(v)
    return out


def _csv_field(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def emit(records: Iterable[dict], fmt: str, stream: IO[str] | None = None) -> None:
    """Write records losslessly: complex as separate re/im parts, NaN as ``"nan"``."""
    stream = stream or sys.stdout
    records = list(records)
    if fmt == "json":
        payload = _json_value(records[0] if len(records) == 1 else records)
        stream.write(json.dumps(payload, allow_nan=False) + "\n")
        return
    rows = [_flatten(r) for r in records]
    header: list[str] = []
    for r in rows:
        header += [h for h in r if h not in header]
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(_csv_field(r.get(h, "")) for h in header)


# -- argument helpers ---------------------------------------------------------------


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _selector(fn: str, params: str | None) -> str:
    return f"{fn}:{params}" if params else fn


def _errors(value: complex, ref: complex | None) -> dict:
    if ref is None:
        return {"abs_err": None, "rel_err": None}
    err = abs(value - ref)
    return {"abs_err": err, "rel_err": err / abs(ref) if ref != 0 else math.inf}


def _mesh(args) -> SpatialMesh:
    return SpatialMesh(args.M, args.L, args.MG)


def _model(name: str, d: int):
    if name == "builtin":
        return builtin_model(d)
    if Path(name).suffix == ".json":
        return model_from_config(name, d)
    raise UsageError(f"unknown field {name!r}; use builtin or a .json config")


# -- subcommands --------------------------------------------------------------------


def cmd_weights(args) -> tuple[list[dict], int]:
    W = moments(args.omega, args.max_degree)
    rows, status = [], 0
    for n, w in enumerate(W):
        row = {"n": n, "W": complex(w)}
        if args.check_oracle:
            diff = abs(w - oracle_weight(args.omega, n))
            row["oracle_diff"] = diff
            status |= diff > ORACLE_TOL
        rows.append(row)
    return rows, int(status)


def cmd_quad1d(args) -> tuple[list[dict], int]:
    f = get_integrand(_selector(args.fn, args.params))
    value = integrate_1d(lambda y: f(np.asarray(y)[:, None]), args.omega, args.level, LEVEL1[args.level1])
    ref = f.exact(args.omega, (1.0,)) if f.exact else None
    nodes = len(build_rule(args.omega, args.level, LEVEL1[args.level1]).nodes)
    return [{"value": value, "nodes": nodes, **_errors(value, ref)}], 0


def cmd_fccs(args) -> tuple[list[dict], int]:
    f = get_integrand(_selector(args.fn, args.params))
    variant = LEVEL1[args.level1]
    value = fccs_integrate(f, args.k, args.a, args.r, variant)
    if args.ref_r is not None:
        ref = fccs_integrate(f, args.k, args.a, args.ref_r, variant)
    else:
        ref = f.exact(args.k, args.a) if f.exact else None
    nodes = make_plan(args.k, args.a, args.r, variant).num_nodes
    return [{"value": value, "nodes": nodes, **_errors(value, ref)}], 0


def cmd_adaptive(args) -> tuple[list[dict], int]:
    f = get_integrand(_selector(args.fn, args.params))
    res = adaptive_integrate(f, args.k, args.a, args.tol, args.budget, LEVEL1[args.level1], args.max_level_sum)
    ref = f.exact(args.k, args.a) if f.exact else None
    return [{
        "value": res.value, "status": res.status, "evals": res.evals, "max_profit": res.max_profit,
        **_errors(res.value, ref), "indices": [list(i) for i in res.indices],
    }], 0


def cmd_helmholtz(args) -> tuple[list[dict], int]:
    if args.field == "constant":
        field = constant_field(1.0)
    elif args.field == "perturbed":
        field = sine_field(1.0, [0.3])
    else:
        field = _model(args.field, len(args.y)).at(args.y)
    source = linear_source() if args.source == "linear" else zero_source()
    problem = HelmholtzProblem(args.k, field, source, args.u_left, args.n_inf)
    sol = solve(problem, _mesh(args))
    row = {"k": args.k, "u1": assemble_u1(sol, 1.0), "cond": sol.cond}
    if args.fem:
        u_fem = fem_solve(problem, args.fem_h).at(1.0)
        row.update(u_fem=u_fem, diff=abs(row["u1"] - u_fem))
    return [row], 0


def cmd_uq(args) -> tuple[list[dict], int]:
    try:
        method = parse_method(args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if isinstance(method, Adaptive):
        method = Adaptive(method.tol, args.budget)
    model = _model(args.field, args.d)
    res = expectation_u1(args.x, args.k, model, method, mesh=_mesh(args), jobs=args.jobs)
    n_mu, n_nu, n_F = res.nodes
    return [{
        "k": args.k, "d": args.d, "x": args.x, "method": res.method, "value": res.value,
        "mu_part": res.parts[0], "nu_part": res.parts[1], "F_part": res.parts[2],
        "N_mu": n_mu, "N_nu": n_nu, "N_F": n_F, "N_tot": res.n_total, "solves": res.solves,
    }], 0


def cmd_table(args) -> tuple[list[dict], int]:
    try:
        result = run_table(args.id, args.jobs, args.expensive)
    except GatedTableError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    names = result.param_names()
    rows = []
    for c in result.cells:
        row = {"table": result.id}
        row.update({n: c.params.get(n, "") for n in names})
        row.update(
            quantity=c.quantity, computed=c.computed, expected=c.expected,
            policy=str(c.policy), **{"pass": c.passed},
        )
        rows.append(row)
    return rows, 0 if result.passed else 1


# -- parser -------------------------------------------------------------------------


def _common(suppress: bool) -> argparse.ArgumentParser:
    # registered on the top-level parser and on every subcommand so the global
    # flags may appear on either side of the subcommand name
    p = argparse.ArgumentParser(add_help=False)
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("csv", "json"), default=dflt(None),
                   help="output format (default: csv for weights and table, json otherwise)")
    p.add_argument("--jobs", type=int, default=dflt(1), help="worker threads (default: 1)")
    p.add_argument("--expensive", action="store_true", default=dflt(False),
                   help="allow tables in the expensive tier (default: off)")
    return p


def _integrand_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fn", required=True,
                   help="integrand: const, squares, cosprod, cospairs, cosdecay, nhalf (param via NAME:P or --params)")
    p.add_argument("--params", default=None, help="integrand parameter (default: none)")
    p.add_argument("--level1", choices=tuple(LEVEL1), default="midpoint",
                   help="level-1 rule (default: midpoint)")


def _mesh_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--M", type=int, default=1, help="coarse cells (default: 1)")
    p.add_argument("--L", type=int, default=1024, help="fine cells per coarse cell (default: 1024)")
    p.add_argument("--MG", type=int, default=10, help="Gauss points per fine cell (default: 10)")


def build_parser() -> argparse.ArgumentParser:
    common = _common(suppress=True)
    parser = argparse.ArgumentParser(prog="fccs", description=__doc__.splitlines()[0], parents=[_common(False)])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("weights", parents=[common], help="Filon moments W_n(omega)")
    p.add_argument("--omega", type=float, required=True, help="frequency")
    p.add_argument("--max-degree", type=int, required=True, help="largest n")
    p.add_argument("--check-oracle", action="store_true", help="compare against brute-force quadrature (default: off)")
    p.set_defaults(run=cmd_weights, natural="csv")

    p = sub.add_parser("quad1d", parents=[common], help="1D Filon-Clenshaw-Curtis rule")
    p.add_argument("--omega", type=float, required=True, help="frequency")
    p.add_argument("--level", type=int, required=True, help="grid level (>= 1)")
    _integrand_args(p)
    p.set_defaults(run=cmd_quad1d, natural="json")

    p = sub.add_parser("fccs", parents=[common], help="sparse-grid oscillatory quadrature")
    p.add_argument("--k", type=float, required=True, help="wavenumber")
    p.add_argument("--a", type=_floats, required=True, help="phase direction a1,a2,...")
    p.add_argument("--r", type=int, required=True, help="sparse-grid level (>= 1)")
    p.add_argument("--ref-r", type=int, default=None, help="reference level for errors (default: closed form if any)")
    _integrand_args(p)
    p.set_defaults(run=cmd_fccs, natural="json")

    p = sub.add_parser("adaptive", parents=[common], help="dimension-adaptive quadrature")
    p.add_argument("--k", type=float, required=True, help="wavenumber")
    p.add_argument("--a", type=_floats, required=True, help="phase direction a1,a2,...")
    p.add_argument("--tol", type=float, required=True, help="profit tolerance")
    p.add_argument("--budget", type=int, default=10_000, help="evaluation budget (default: 10000)")
    p.add_argument("--max-level-sum", type=int, default=None, help="cap on |l| (default: none)")
    _integrand_args(p)
    p.set_defaults(run=cmd_adaptive, natural="json")

    p = sub.add_parser("helmholtz", parents=[common], help="asymptotic solution u1(1) of the 1D Helmholtz problem")
    p.add_argument("--k", type=float, required=True, help="wavenumber")
    p.add_argument("--field", default="builtin",
                   help="builtin, constant, perturbed (1 + 0.3 sin(pi x)) or a .json config (default: builtin)")
    p.add_argument("--y", type=_floats, default=[], help="parameter sample y1,y2,... (default: empty)")
    p.add_argument("--source", choices=("linear", "zero"), default="linear", help="F(x) = x or 0 (default: linear)")
    p.add_argument("--u-left", type=float, default=1.0, help="Dirichlet value at x=0 (default: 1)")
    p.add_argument("--n-inf", type=float, default=1.0, help="exterior index (default: 1)")
    _mesh_args(p)
    p.add_argument("--fem", action="store_true", help="also solve with finite elements (default: off)")
    p.add_argument("--fem-h", type=float, default=2.0**-14, help="finite-element mesh width (default: 2^-14)")
    p.set_defaults(run=cmd_helmholtz, natural="json")

    p = sub.add_parser("uq", parents=[common], help="expectation of u1(x) over the random medium")
    p.add_argument("--k", type=float, required=True, help="wavenumber")
    p.add_argument("--d", type=int, required=True, help="number of random modes")
    p.add_argument("--x", type=float, default=1.0, help="evaluation point, a coarse node (default: 1)")
    p.add_argument("--method", required=True, help="standard:R or adaptive:TAU")
    p.add_argument("--budget", type=int, default=10_000, help="adaptive evaluation budget (default: 10000)")
    p.add_argument("--field", default="builtin", help="builtin or a .json config (default: builtin)")
    _mesh_args(p)
    p.set_defaults(run=cmd_uq, natural="json")

    p = sub.add_parser("table", parents=[common], help="recompute a reference table (T1..T15)")
    p.add_argument("id", help="table id, e.g. T2")
    p.add_argument("--out", default=None, help="write to this file instead of stdout (default: stdout)")
    p.set_defaults(run=cmd_table, natural="csv")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        print("fccs: error: --jobs must be >= 1", file=sys.stderr)
        return 2
    fmt = args.format or args.natural
    try:
        records, status = args.run(args)
    except (UsageError, UnknownIntegrandError) as exc:
        print(f"fccs: error: {exc}", file=sys.stderr)
        return 2
    except ResonanceError as exc:
        print(f"fccs: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"fccs: error: {exc}", file=sys.stderr)
        return 2
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", newline="") as fh:
            emit(records, fmt, fh)
    else:
        emit(records, fmt)
    return status


if __name__ == "__main__":
    sys.exit(main())
