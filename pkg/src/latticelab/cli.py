"""Command-line front end.

Commands:

* ``check``: run property checkers on a registry space or a space file and
  emit text plus optional CSV moduli curves.
* ``bpb``: run one of the correction variants on a user-supplied pair.
* ``reproduce``: the full regression over the built-in registry (witness
  re-verification, dual-formula cross-check, classification match).
* ``export``: write a registry space to the space-definition JSON format.

Exit codes: 0 all holds / contracts met, 2 fails-witnessed or a contract
bound missed, 3 inconclusive, 64 malformed space file, 65 dimension guard
exceeded, 66 precondition violated.

Output is byte-deterministic given (command, space, seed, tolerances);
floats print with 12 significant digits and seeds echo in the header.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import registry as reg
from ._kernels import BACKEND
from .bpb import (PreconditionError, bpb_pair, modulus_identity,
                  positive_bpb_pair, sm_hnap_correction, umoe_strong_correction)
from .monotonicity import (EPS_GRID_DEFAULT, FAILS, HNAP, INCONCLUSIVE, SM, UM,
                           UMOE, WM, PropertyReport, classify, hnap_check,
                           sm_check, strict_monotonicity_check, um_modulus,
                           umoe_modulus, wm_check)
from .norms import DimensionGuardError, NormSpecError, absolute_check
from .riesz import as_vector
from .spacefile import SpaceFileError, load_space, save_space

EXIT_OK = 0
EXIT_FAILS = 2
EXIT_INCONCLUSIVE = 3
EXIT_BADFILE = 64
EXIT_DIMGUARD = 65
EXIT_PRECONDITION = 66

CSV_HEADER = "space,property,eps,delta_hat,witness_norm_plus,witness_norm_minus,verdict"


def f12(x) -> str:
    return f"{float(x):.12g}"


def _vec12(v) -> str:
    return "(" + ", ".join(f12(c) for c in v) + ")"


def _load(args):
    if args.registry:
        rs = reg.get(args.registry)
        return rs.name, rs.spec, rs
    name, spec, _ = load_space(args.file)
    return name, spec, None


def _guard_dims(spec) -> None:
    if spec.dim > 16:
        raise DimensionGuardError(f"dimension {spec.dim} exceeds the CLI guard (16)")


def _csv_rows(space: str, report: PropertyReport):
    rows = []
    wit = report.witness or {}
    wp = f12(wit["norm_plus"]) if "norm_plus" in wit else ""
    wm = f12(wit["norm_minus"]) if "norm_minus" in wit else ""
    if report.curve is not None:
        for eps, dh in report.curve.samples:
            rows.append(f"{space},{report.property},{f12(eps)},{f12(dh)},{wp},{wm},{report.verdict}")
    else:
        rows.append(f"{space},{report.property},,,{wp},{wm},{report.verdict}")
    return rows


def _print_report(space: str, report: PropertyReport) -> None:
    print(f"property {report.property}: {report.verdict}")
    if report.curve is not None:
        for eps, dh in report.curve.samples:
            print(f"  eps={f12(eps)}  delta_hat={f12(dh)}  [{report.curve.method}]")
    if report.witness:
        parts = []
        for key, val in sorted(report.witness.items()):
            if isinstance(val, np.ndarray):
                parts.append(f"{key}={_vec12(val)}")
            elif isinstance(val, (int, float)):
                parts.append(f"{key}={f12(val)}")
        print("  witness: " + ", ".join(parts))
    if report.notes:
        print(f"  note: {report.notes}")


def cmd_check(args) -> int:
    try:
        space, spec, rs = _load(args)
        _guard_dims(spec)
    except SpaceFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BADFILE
    except DimensionGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMGUARD
    eps_grid = tuple(args.eps) if args.eps else EPS_GRID_DEFAULT
    print(f"# latticelab check space={space} property={args.property} "
          f"seed={args.seed} tol={f12(args.tol)} kernels={BACKEND}")
    print(f"# eps grid: {', '.join(f12(e) for e in eps_grid)}")
    rep = absolute_check(spec, seed=args.seed, tol=args.tol)
    if not rep.ok:
        print(f"absoluteness check failed: {rep}")
        if rep.witness is not None:
            print(f"  witness x = {_vec12(rep.witness)}")
        return EXIT_FAILS
    print("absoluteness check: passed (flagged absolute)")
    seeds = rs.checker_seeds if rs else {}
    kw = dict(seed=args.seed)
    reports = []
    if args.property == "all":
        result = classify(spec, eps_grid, witnesses=seeds,
                          asymptotic_wm_family=bool(rs and rs.asymptotic_wm_family),
                          asymptotic_sm_family=bool(rs and rs.asymptotic_sm_family),
                          **kw)
        reports = list(result["reports"].values())
        for msg in result["inconsistencies"]:
            print(f"WARNING: {msg}")
    elif args.property == "hnap":
        reports = [hnap_check(spec, witnesses=seeds.get(HNAP, ()),
                              exact=args.exact, **kw)]
    elif args.property == "um":
        reports = [um_modulus(spec, eps_grid, witnesses=seeds.get(UM, ()), **kw)]
    elif args.property == "umoe":
        reports = [umoe_modulus(spec, eps_grid, witnesses=seeds.get(UMOE, ()), **kw)]
    elif args.property == "sm":
        reports = [sm_check(spec, eps_grid, witnesses=seeds.get(SM, ()),
                            asymptotic_family=bool(rs and rs.asymptotic_sm_family), **kw)]
    elif args.property == "wm":
        reports = [wm_check(spec, eps_grid, witnesses=seeds.get(WM, ()),
                            asymptotic_family=bool(rs and rs.asymptotic_wm_family), **kw)]
    elif args.property == "strictmono":
        reports = [strict_monotonicity_check(spec, seed=args.seed)]
    for r in reports:
        _print_report(space, r)
    if args.csv:
        os.makedirs(args.csv, exist_ok=True)
        path = os.path.join(args.csv, f"{space}_{args.property}.csv")
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in reports:
                for row in _csv_rows(space, r):
                    fh.write(row + "\n")
        print(f"# csv written: {path}")
    if any(r.verdict == FAILS for r in reports):
        return EXIT_FAILS
    if any(r.verdict == INCONCLUSIVE for r in reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _parse_vec(text: str, exact: bool):
    toks = [c.strip() for c in text.split(",")]
    if not exact:
        toks = [t if "/" in t else float(t) for t in toks]
    return as_vector(toks, exact=exact)


def cmd_bpb(args) -> int:
    try:
        space, spec, rs = _load(args)
        _guard_dims(spec)
    except SpaceFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BADFILE
    except DimensionGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMGUARD
    print(f"# latticelab bpb space={space} variant={args.variant} eps={f12(args.eps)} "
          f"seed={args.seed} tol={f12(args.tol)} kernels={BACKEND}")
    x = _parse_vec(args.x, args.exact)
    f = _parse_vec(args.f, args.exact)
    delta = rs.delta if rs else modulus_identity
    try:
        if args.variant == "classic":
            corr = bpb_pair(spec, x, f, args.eps, tol=args.tol)
        elif args.variant == "positive":
            corr = positive_bpb_pair(spec, x, f, args.eps, tol=args.tol)
        elif args.variant == "sm-hnap":
            corr = sm_hnap_correction(spec, x, f, args.eps, delta=delta, tol=args.tol)
        else:
            corr = umoe_strong_correction(spec, x, f, args.eps, delta=delta, tol=args.tol)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(f"y    = {_vec12(corr.y)}")
    print(f"fhat = {_vec12(corr.f)}")
    print(f"dist_primal = {f12(corr.dist_primal)}")
    print(f"dist_dual   = {f12(corr.dist_dual)}")
    print(f"residual    = {f12(corr.residual)}")
    print(f"positive    = (y: {corr.y_positive}, fhat: {corr.f_positive})")
    if corr.note:
        print(f"note        = {corr.note}")
    ok = corr.found and corr.residual <= max(args.tol, 1e-9)
    print(f"contract    = {'met' if ok else 'NOT MET'}")
    return EXIT_OK if ok else EXIT_FAILS


def cmd_reproduce(args) -> int:
    print(f"# latticelab reproduce seed={args.seed} kernels={BACKEND}")
    rows = []
    all_ok = True

    def row(space, prop, expected, got, detail=""):
        nonlocal all_ok
        ok = expected == got
        all_ok = all_ok and ok
        rows.append((space, prop, expected, got, "ok" if ok else "MISMATCH", detail))

    for name in reg.names():
        try:
            rs = reg.get(name)
        except reg.RegistryError as exc:
            row(name, "load+witnesses", "verified", "FAILED", str(exc))
            continue
        row(name, "load+witnesses", "verified", "verified",
            f"{len(rs.claims)} claims at 1e-9")
        if name == "example-sm-3d":
            rng = np.random.Generator(np.random.PCG64(args.seed))
            F = rng.standard_normal((1000, 3))
            dev = 0.0
            for fv in F:
                dev = max(dev, abs(reg.sm3d_dual_closed_form(fv)
                                   - reg.sm3d_support_oracle(fv)))
            row(name, "dual-formula-vs-sampling",
                "dev<=1e-4", "dev<=1e-4" if dev <= 1e-4 else f"dev={f12(dev)}",
                f"max deviation {f12(dev)} over 1000 functionals")
        result = rs.classify(seed=args.seed)
        for prop, want in sorted(rs.expected.items()):
            got = result["reports"][prop].verdict_class()
            detail = ""
            wit = result["reports"][prop].witness
            if prop == HNAP and wit and "split_sum" in wit:
                detail = f"split sum {f12(wit['split_sum'])}"
            elif wit and "norm_minus" in wit:
                detail = f"||x-|| = {f12(wit['norm_minus'])}"
            elif wit and "admissible_gap" in wit:
                detail = f"gap {f12(wit['admissible_gap'])}"
            row(name, prop, want, got, detail)
        for msg in result["inconsistencies"]:
            row(name, "chain-consistency", "consistent", "violated", msg)
        if args.csv:
            os.makedirs(args.csv, exist_ok=True)
            path = os.path.join(args.csv, f"{name}_moduli.csv")
            with open(path, "w") as fh:
                fh.write(CSV_HEADER + "\n")
                for prop_rep in result["reports"].values():
                    for line in _csv_rows(name, prop_rep):
                        fh.write(line + "\n")
    width = max(len(r[0]) for r in rows)
    pwidth = max(len(r[1]) for r in rows)
    for space, prop, want, got, ok, detail in rows:
        line = f"{space:<{width}} | {prop:<{pwidth}} | expect {want:<9} | got {got:<9} | {ok}"
        if detail:
            line += f" | {detail}"
        print(line)
    print(f"# reproduce: {'all classifications match' if all_ok else 'MISMATCHES FOUND'}")
    return EXIT_OK if all_ok else EXIT_FAILS


def cmd_export(args) -> int:
    try:
        rs = reg.get(args.registry)
    except reg.RegistryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BADFILE
    save_space(args.out, rs.name, rs.spec, asserted_absolute=True)
    print(f"# exported {rs.name} -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="latticelab",
        description="finite-dimensional Banach lattice laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_space_source(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--registry", help="built-in space name")
        src.add_argument("--file", help="space-definition JSON path")

    def add_common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--exact", action="store_true",
                       help="evaluate vectors in exact rational arithmetic")

    pc = sub.add_parser("check", help="run property checkers")
    add_space_source(pc)
    add_common(pc)
    pc.add_argument("--property", default="all",
                    choices=["hnap", "um", "umoe", "sm", "wm", "strictmono", "all"])
    pc.add_argument("--eps", type=float, action="append",
                    help="eps grid point (repeatable; default grid otherwise)")
    pc.add_argument("--csv", help="directory for CSV output")
    pc.set_defaults(func=cmd_check)

    pb = sub.add_parser("bpb", help="run a correction variant")
    add_space_source(pb)
    add_common(pb)
    pb.add_argument("--x", required=True, help="comma-separated coordinates")
    pb.add_argument("--f", required=True, help="comma-separated coordinates")
    pb.add_argument("--eps", type=float, required=True)
    pb.add_argument("--variant", default="classic",
                    choices=["classic", "positive", "sm-hnap", "umoe-strong"])
    pb.set_defaults(func=cmd_bpb)

    pr = sub.add_parser("reproduce", help="full registry regression")
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--csv", help="directory for per-space moduli CSVs")
    pr.set_defaults(func=cmd_reproduce)

    pe = sub.add_parser("export", help="write a registry space to JSON")
    pe.add_argument("--registry", required=True)
    pe.add_argument("--out", required=True)
    pe.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "tol") and not (1e-14 <= args.tol <= 1e-2):
        print("error: --tol must lie in [1e-14, 1e-2]", file=sys.stderr)
        return EXIT_PRECONDITION
    if hasattr(args, "eps") and args.command == "bpb" and not (0 < args.eps < 1):
        print("error: --eps must lie in (0, 1)", file=sys.stderr)
        return EXIT_PRECONDITION
    try:
        return args.func(args)
    except NormSpecError as exc:
        if isinstance(exc, DimensionGuardError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DIMGUARD
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
