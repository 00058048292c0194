"""Command-line entry point.

Subcommands
-----------
solve            one preconditioned GMRES solve, JSON report
bench            full iteration-count table (CSV + PNG figure)
spectra          dense spectra of M and the preconditioned operators
check-stability  scheme derivation + root-splitting grid verdicts

Benchmark CSVs are deterministic across runs except for the CPU columns.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import FracbvmError
from .experiments import (PRECOND_LABELS, RunConfig, check_stability,
                          dump_spectra, run_table, solve_single,
                          write_benchmark_csv, write_residual_csv)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fracbvm",
        description="Block boundary-value-method solver for two-sided "
                    "space-fractional diffusion, with circulant-family "
                    "preconditioned GMRES.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="single preconditioned solve")
    sp.add_argument("--alpha", type=float, required=True,
                    help="fractional order in (1,2)")
    sp.add_argument("--nx", type=int, required=True,
                    help="number of interior space points N")
    sp.add_argument("--ns", type=int, required=True,
                    help="number of time steps s")
    sp.add_argument("--precond", choices=sorted(PRECOND_LABELS),
                    default="strang")
    sp.add_argument("--restart", type=int, default=20)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--assembly", choices=("auxiliary", "uniform"),
                    default="auxiliary")
    sp.add_argument("--out", default=None,
                    help="write the JSON report here (default: stdout)")
    sp.add_argument("--residuals", default=None,
                    help="optional CSV of per-iteration residual history")

    bp = sub.add_parser("bench", help="full benchmark table")
    bp.add_argument("--table", type=int, choices=(1, 2), required=True,
                    help="1: alpha=1.2, 2: alpha=1.5")
    bp.add_argument("--out", required=True, help="output CSV path")
    bp.add_argument("--assembly", choices=("auxiliary", "uniform"),
                    default="uniform")
    bp.add_argument("--no-figures", action="store_true",
                    help="skip the PNG chart next to the CSV")

    xp = sub.add_parser("spectra", help="dense operator spectra")
    xp.add_argument("--nx", type=int, default=48)
    xp.add_argument("--ns", type=int, default=64)
    xp.add_argument("--alpha", type=float, default=1.2)
    xp.add_argument("--out", required=True, help="output directory")
    xp.add_argument("--assembly", choices=("auxiliary", "uniform"),
                    default="auxiliary")
    xp.add_argument("--no-figures", action="store_true")

    cp = sub.add_parser("check-stability", help="scheme stability report")
    cp.add_argument("--mu", type=int, default=4, choices=(2, 4))
    return p


def _cmd_solve(args) -> int:
    cfg = RunConfig(alpha=args.alpha, N=args.nx, s=args.ns,
                    preconditioner=args.precond, restart=args.restart,
                    tol=args.tol, assembly=args.assembly, out=args.out)
    report, raw = solve_single(cfg)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    if args.residuals:
        write_residual_csv(args.residuals, raw)
        print(f"wrote {args.residuals}")
    return 0 if report["converged"] else 1


def _cmd_bench(args) -> int:
    rows = run_table(args.table, assembly=args.assembly)
    write_benchmark_csv(rows, args.out)
    print(f"wrote {args.out}")
    if not args.no_figures:
        from .figures import render_benchmark_figure
        alpha = 1.2 if args.table == 1 else 1.5
        png = os.path.splitext(args.out)[0] + ".png"
        render_benchmark_figure(
            rows, png, title=f"benchmark table {args.table} (alpha={alpha})")
        print(f"wrote {png}")
    bad = [r for r in rows if not r.converged]
    for r in bad:
        print(f"not converged: N={r.N} s={r.s} {r.label} "
              f"({r.iterations} iterations)", file=sys.stderr)
    return 1 if bad else 0


def _cmd_spectra(args) -> int:
    spectra = dump_spectra(args.nx, args.ns, args.alpha, args.out,
                           assembly=args.assembly)
    for label in spectra:
        print(f"wrote {os.path.join(args.out, f'spectrum_{label}.csv')}")
    if not args.no_figures:
        from .figures import render_spectra_figure
        png = os.path.join(args.out, "spectra.png")
        render_spectra_figure(
            spectra, png,
            title=f"N={args.nx}, s={args.ns}, alpha={args.alpha}")
        print(f"wrote {png}")
    return 0


def _cmd_check_stability(args) -> int:
    rep = check_stability(args.mu)
    print(f"mu = {rep['mu']}")
    print(f"candidate nu verdicts (root splitting on the grid): "
          f"{rep['candidates']}")
    print(f"chosen nu = {rep['chosen_nu']}  (order {rep['order']})")
    print(f"rho coefficients (alpha_0..alpha_mu): {rep['main_alpha']}")
    print(f"sigma coefficients (beta, exact):     {rep['main_beta_exact']}")
    print(f"grid: {rep['grid']}")
    return 0 if rep["candidates"].get(rep["chosen_nu"], False) else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "spectra": _cmd_spectra,
        "check-stability": _cmd_check_stability,
    }
    try:
        return handlers[args.command](args)
    except FracbvmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
