"""Command-line entry point.

JSON reports go to stdout and short summaries to stderr. Exit codes: 0 for
passing checks or completed runs, 1 for usage/config/parse errors, 2 for
failed checks or a blowup verdict.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .constitutive import check_material, construct_null_material, dump_spec, load_spec, standard_materials
from .errors import NullwaveError
from .verify import DEFAULT_TRIALS, SUITES, run_suites

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, default=_jsonable)
    sys.stdout.write("\n")


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _note(msg):
    print(msg, file=sys.stderr)


def resolve_material(ref):
    """A material file, or the name of a built-in material."""
    if ref is None:
        raise UsageError("--material is required")
    path = Path(ref)
    if path.exists():
        return load_spec(path)
    builtin = standard_materials()
    if ref in builtin:
        return builtin[ref]
    raise UsageError(f"no material file {ref!r} (built-in names: {', '.join(builtin)})")


# ---------------------------------------------------------------- commands

def cmd_material_check(args):
    model = resolve_material(args.spec)
    rows = [check_material(model, lam).to_dict() for lam in args.lambdas]
    ok = all(r["hyperbolic"] for r in rows)
    _emit({"material": model.name, "rows": rows, "hyperbolic_everywhere": ok})
    for r in rows:
        _note(f"lambda={r['lambda']:g}  c1^2={r['c1_sq']:.6g}  c2^2={r['c2_sq']:.6g}  "
              f"hyperbolic={r['hyperbolic']}  null={r['null']}  tau111={r['tau111']:.3e}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_material_construct(args):
    lo, hi = args.interval
    model = construct_null_material(args.bulk, args.c2sq, (lo, hi), args.name or "")
    text = dump_spec(model, args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        _emit({"written": str(args.out), "f": model.f.to_text(), "g": model.g.to_text(), "h": model.h.to_text()})
    return EXIT_OK


def cmd_tensor_dump(args):
    from .tensors import material_tensors

    model = resolve_material(args.spec)
    T = material_tensors(model, args.lam)
    report = {
        "material": model.name, "lambda": T.lam, "c1_sq": T.c1_sq, "c2_sq": T.c2_sq,
        "A_index_order": ["i", "j", "l", "m"], "A": T.A.entries,
        "B_index_order": ["i", "j", "k", "l", "m", "n"], "B": T.B.entries,
        "B_raw_asymmetry": T.B.raw_asymmetry,
    }
    if args.out is not None:
        Path(args.out).write_text(json.dumps(report, default=_jsonable) + "\n")
        _emit({"written": str(args.out)})
    else:
        _emit(report)
    return EXIT_OK


def cmd_verify(args):
    model = resolve_material(args.material) if args.material else None
    try:
        results = run_suites(args.suites, model, args.lam, args.trials, args.seed)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    ok = all(r.passed for r in results)
    _emit({"passed": ok, "seed": args.seed, "suites": [r.to_dict() for r in results]})
    for r in results:
        _note(f"{r.suite:<11} {'pass' if r.passed else 'FAIL'}  max residual {r.max_residual:.2e}  ({r.seconds:.1f}s)")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simulate(args):
    from .simulator import InitialSpec, SimConfig, run_box3d, run_planewave_1d
    from .tensors import material_tensors

    model = resolve_material(args.material)
    direction = np.asarray(args.direction, dtype=float)
    if not np.linalg.norm(direction) > 0:
        raise UsageError("--direction must be nonzero")
    direction = tuple(direction / np.linalg.norm(direction))
    defaults = SimConfig()
    n = args.n if args.n is not None else (defaults.n if args.mode == "planewave" else 48)
    L = args.L if args.L is not None else defaults.L
    cfg = SimConfig(
        lam=args.lam, mode=args.mode, n=n, L=L, cfl=args.cfl, t_end=args.t_end,
        diagnostics_every=args.diagnostics_every, blowup_factor=args.blowup_factor,
        initial=InitialSpec(args.initial, args.eps, args.width, direction, args.center),
        nonlinear=not args.linear, periodic=args.periodic, with_x2=args.x2,
        snapshot_every=args.snapshot_every,
    ).validate()
    T = material_tensors(model, args.lam)
    if args.mode == "planewave":
        if args.snapshots:
            raise UsageError("--snapshots needs --mode box3d")
        rep = run_planewave_1d(cfg, T)
    else:
        rep = run_box3d(cfg, T, snapshot_dir=args.snapshots)
    if args.out:
        rep.write_csv(args.out)
    out = rep.to_dict()
    out.update({"material": model.name, "lambda": args.lam, "c1_sq": T.c1_sq, "c2_sq": T.c2_sq})
    if args.out:
        out["csv"] = str(args.out)
    _emit(out)
    _note(f"{rep.verdict} after {rep.steps} steps"
          + (f", t* = {rep.t_star:.4g}" if rep.t_star is not None else ""))
    return rep.exit_code


# ---------------------------------------------------------------- parser

def _triple(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}") from exc
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nullwave", description="Null-condition analysis and simulation "
                                "of isotropic hyperelastic materials around a prestressed dilation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized trials (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    mat = sub.add_parser("material", help="check or construct materials")
    msub = mat.add_subparsers(dest="action", required=True)
    chk = msub.add_parser("check", help="speeds, hyperbolicity and null flag per lambda")
    chk.add_argument("spec", help="material file (JSON) or built-in name")
    chk.add_argument("--lambda", dest="lambdas", type=float, nargs="+", default=[1.0])
    chk.set_defaults(func=cmd_material_check)
    con = msub.add_parser("construct", help="build the null material for a bulk modulus and shear speed")
    con.add_argument("--bulk", required=True, help="expression in x for c1^2 - 4/3 c2^2")
    con.add_argument("--c2sq", required=True, help="expression in x for c2^2")
    con.add_argument("--out", type=Path, help="output material file (stdout if omitted)")
    con.add_argument("--name", default="")
    con.add_argument("--interval", type=float, nargs=2, default=(0.25, 4.0), metavar=("LO", "HI"))
    con.set_defaults(func=cmd_material_construct)

    ten = sub.add_parser("tensor", help="coefficient tensors")
    tsub = ten.add_subparsers(dest="action", required=True)
    dump = tsub.add_parser("dump", help="emit A and B as JSON arrays")
    dump.add_argument("spec")
    dump.add_argument("--lambda", dest="lam", type=float, default=1.0)
    dump.add_argument("--out", type=Path)
    dump.set_defaults(func=cmd_tensor_dump)

    ver = sub.add_parser("verify", help="run property suites")
    ver.add_argument("suites", nargs="*", default=["all"], help=f"any of {', '.join(SUITES)}, or all")
    ver.add_argument("--material", help="material for the tensor suites (default: built-in null material)")
    ver.add_argument("--lambda", dest="lam", type=float, default=1.5)
    ver.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    ver.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    ver.set_defaults(func=cmd_verify)

    sim = sub.add_parser("simulate", help="integrate the truncated equations of motion")
    sim.add_argument("--material", required=True)
    sim.add_argument("--lambda", dest="lam", type=float, default=1.5)
    sim.add_argument("--mode", choices=("planewave", "box3d"), default="planewave")
    sim.add_argument("--n", type=int, help="grid points per axis (default 2048 planewave, 48 box3d)")
    sim.add_argument("--L", type=float, help="half-width of the domain (default 10)")
    sim.add_argument("--cfl", type=float, default=0.4)
    sim.add_argument("--eps", type=float, default=0.05)
    sim.add_argument("--width", type=float, default=1.0)
    sim.add_argument("--center", type=float, default=0.0)
    sim.add_argument("--initial", default="longitudinal_pulse",
                     choices=("longitudinal_pulse", "transverse_pulse", "dilation_perturbation"))
    sim.add_argument("--direction", type=_triple, default=[1.0, 0.0, 0.0], help="propagation direction x,y,z")
    sim.add_argument("--t-end", dest="t_end", type=float, default=10.0)
    sim.add_argument("--diagnostics-every", type=int, default=10)
    sim.add_argument("--blowup-factor", type=float, default=10.0)
    sim.add_argument("--linear", action="store_true", help="drop the quadratic nonlinearity")
    sim.add_argument("--periodic", action="store_true", help="periodic box (box3d)")
    sim.add_argument("--x2", action="store_true", help="record the weighted norm X2 (box3d)")
    sim.add_argument("--out", type=Path, help="CSV time series")
    sim.add_argument("--snapshots", type=Path, help="directory for binary snapshots (box3d)")
    sim.add_argument("--snapshot-every", type=int, default=0)
    sim.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; this tool reserves 2 for failures
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, NullwaveError, OSError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
