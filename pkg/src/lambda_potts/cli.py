"""Command-line interface: ``lambda-potts <command> [options]``.

Couplings are given as ``--a`` (a_bar), ``--b`` (b_frak), ``--c`` (b_cal),
``--J`` and ``--beta``; they are parsed as exact rationals so boundary ties
are detected exactly.  ``--config FILE`` reads a flat JSON object whose keys
are the option names with dashes replaced by underscores; flags given on the
command line win over the file.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import finite_validation as fv
from . import gibbs_recursion as gr
from . import ground_states as gs
from .model import ModelParams, energy_table
from .tree_group import SUBGROUPS

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2

PHASE_HEADER = [
    "a_bar", "b_frak", "b_cal", "J", "beta", "alpha", "upsilon",
    "zeta1", "zeta2", "n_solutions", "phase_transition",
]
MAX_GRID = 10**6

DEFAULTS = {
    "a": "0", "b": "0", "c": "0", "J": "0", "beta": "1",
    "format": "table", "seed": 0, "depth": 3, "k": 2, "starts": 64,
    "h": "solution", "h11": 0.0, "workers": 0,
}


class UsageError(Exception):
    pass


class NumericalFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x) -> str:
    """17 significant digits, enough to round-trip a double."""
    if x is None:
        return ""
    return format(float(x), ".17g")


def _number(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a number: {text!r}") from exc


def _add_couplings(p):
    p.add_argument("--a", help="a_bar, lambda for |i-j| = 2")
    p.add_argument("--b", help="b_frak, lambda for |i-j| = 1")
    p.add_argument("--c", help="b_cal, lambda for i = j")
    p.add_argument("--J", help="next-nearest-neighbour Potts coupling")
    p.add_argument("--beta", help="inverse temperature")


def _add_sampling(p):
    p.add_argument("--sample-region", type=int, help="draw a point of region A_m instead of --a/--b/--c/--J")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lambda-potts", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="flat JSON file of option values")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("energy-table", help="the twelve ball-energy classes")
    _add_couplings(p)
    p.add_argument("--format", choices=["table", "csv"])

    p = sub.add_parser("classify", help="regions A_m containing a parameter point")
    _add_couplings(p)
    _add_sampling(p)

    p = sub.add_parser("ground-states", help="search and count ground states")
    _add_couplings(p)
    _add_sampling(p)
    p.add_argument("--subgroup", choices=sorted(SUBGROUPS), help="count periodic ground states for this subgroup")
    p.add_argument("--depth", type=int)
    p.add_argument("--classes", help="comma-separated energy classes allowed on balls (default: argmin)")

    p = sub.add_parser("fixed-points", help="translation-invariant boundary laws")
    _add_couplings(p)
    p.add_argument("--k", type=int)
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["table", "csv"])

    p = sub.add_parser("phase-diagram", help="sweep a grid and write the phase flag per point")
    p.add_argument("--a", help="a_bar = b_frak shared by all grid points")
    p.add_argument("--beta")
    p.add_argument("--J-range", nargs=3, metavar=("MIN", "MAX", "N"))
    p.add_argument("--c-range", nargs=3, metavar=("MIN", "MAX", "N"), help="b_cal axis")
    p.add_argument("--d-range", nargs=3, metavar=("MIN", "MAX", "N"), help="d = exp(beta J) axis")
    p.add_argument("--alpha-range", nargs=3, metavar=("MIN", "MAX", "N"), help="alpha axis")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.add_argument("--workers", type=int, help="worker processes (0 = all cores)")

    p = sub.add_parser("validate", help="compatibility residuals by exact enumeration")
    _add_couplings(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--h", choices=["solution", "zero"])
    p.add_argument("--h11", type=float, help="gauge for the boundary field")
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int)
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    config = {}
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(config, dict):
            raise UsageError("config file must hold a flat JSON object")
    known = vars(args)
    unknown = set(config) - set(known)
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {sorted(unknown)}")
    for key, value in known.items():
        if value is None:
            known[key] = config.get(key, DEFAULTS.get(key))
    return args


def _params(args) -> ModelParams:
    if getattr(args, "sample_region", None) is not None:
        if args.sample_region not in gs.REGIONS:
            raise UsageError("--sample-region must be in 1..12")
        return gs.sample_region(args.sample_region, args.seed)
    beta = _number(args.beta)
    if beta <= 0:
        raise UsageError("--beta must be positive")
    return ModelParams(_number(args.a), _number(args.b), _number(args.c), _number(args.J), beta)


def _show_params(p: ModelParams) -> str:
    return "a_bar={} b_frak={} b_cal={} J={} beta={}".format(*(str(v) for v in (*p.couplings(), p.beta)))


def _regions(found) -> str:
    return ", ".join(f"A_{m}" for m in sorted(found))


# commands -------------------------------------------------------------------


def cmd_energy_table(args, out) -> int:
    p = _params(args)
    table = energy_table(p)
    lowest = gs.classify_region(p)
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["class", "energy", "minimal"])
        for m, e in enumerate(table, 1):
            w.writerow([m, fmt(e), int(m in lowest)])
        return EXIT_OK
    for m, e in enumerate(table, 1):
        flag = "  *" if m in lowest else ""
        out.write(f"U_{m:<3d}{str(e):>24s}{flag}\n")
    out.write(f"minimum: {_regions(lowest)}\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    p = _params(args)
    found = gs.classify_region(p)
    out.write(_show_params(p) + "\n")
    out.write(f"regions: {_regions(found)}\n")
    out.write(f"gap to next class: {fmt(gs.region_gap(p))}\n")
    return EXIT_OK


def _classes(args, p: ModelParams):
    if args.classes:
        try:
            return frozenset(int(x) for x in args.classes.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --classes {args.classes!r}") from exc
    m = args.sample_region
    if m is not None and gs.classify_region(p) != {m}:
        # A_4 and A_12 only exist on boundaries; use the symbolic class
        return frozenset({m})
    return None


def cmd_ground_states(args, out) -> int:
    if args.depth < 2:
        raise UsageError("--depth must be at least 2")
    p = _params(args)
    classes = _classes(args, p)
    out.write(_show_params(p) + "\n")
    out.write(f"regions: {_regions(gs.classify_region(p))}\n")
    if classes is not None:
        out.write(f"allowed ball classes: {', '.join(f'U_{m}' for m in sorted(classes))}\n")
    search = gs.ground_state_exists(p, args.depth, classes=classes)
    out.write(search.describe() + "\n")
    if args.subgroup:
        H = SUBGROUPS[args.subgroup]
        states = gs.periodic_ground_states(p, H, args.depth, classes=classes)
        label = "translation-invariant" if H.index == 1 else f"{H.name}-periodic"
        out.write(f"{len(states)} {label} ground states\n")
        for spec in states:
            out.write(f"  cosets -> spins {spec.assignment}\n")
    return EXIT_OK


def cmd_fixed_points(args, out) -> int:
    p = _params(args)
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    sols = gr.fixed_points_TI(p, k=args.k, starts=args.starts, seed=args.seed)
    if not sols:
        raise NumericalFailure("no start converged")
    w = csv.writer(out, lineterminator="\n") if args.format == "csv" else None
    if w:
        w.writerow([f"u{i}" for i in range(1, 9)] + ["residual", "in_set_A"])
    for u in sols:
        res = gr.residual(u, p, args.k)
        if w:
            w.writerow([fmt(x) for x in u] + [fmt(res), int(gr.in_set_A(u))])
        else:
            tag = "  [set A]" if gr.in_set_A(u) else ""
            out.write(" ".join(f"{x:.10g}" for x in u) + f"  residual={res:.2e}{tag}\n")
    if not w:
        out.write(f"{len(sols)} translation-invariant solutions\n")
    return EXIT_OK


def _axis(spec, name):
    try:
        lo, hi, n = float(spec[0]), float(spec[1]), int(spec[2])
    except ValueError as exc:
        raise UsageError(f"bad --{name}-range {spec}") from exc
    if n < 1 or (n > 1 and not hi > lo) or (n == 1 and hi != lo):
        raise UsageError(f"--{name}-range needs N >= 1 and MAX > MIN (or MIN == MAX with N = 1)")
    return np.linspace(lo, hi, n)


def phase_row(point) -> list[str]:
    a_bar, b_cal, J, beta = point
    p = ModelParams(a_bar, a_bar, b_cal, J, beta)
    diag = gr.phase_transition(p)
    return [
        fmt(a_bar), fmt(a_bar), fmt(b_cal), fmt(J), fmt(beta),
        fmt(diag.alpha), fmt(diag.upsilon), fmt(diag.zeta1), fmt(diag.zeta2),
        str(diag.n_solutions), "true" if diag.phase_transition else "false",
    ]


def phase_grid(args) -> list[tuple[float, float, float, float]]:
    a_bar, beta = float(_number(args.a)), float(_number(args.beta))
    if beta <= 0:
        raise UsageError("--beta must be positive")
    if args.J_range and args.c_range:
        Js, cs = _axis(args.J_range, "J"), _axis(args.c_range, "c")
        pts = [(a_bar, c, J, beta) for J in Js for c in cs]
    elif args.d_range and args.alpha_range:
        ds, alphas = _axis(args.d_range, "d"), _axis(args.alpha_range, "alpha")
        if ds.min() <= 0 or alphas.min() <= 0:
            raise UsageError("d and alpha must be positive")
        pts = []
        for d in ds:
            for al in alphas:
                q = gr.params_for(al, d, beta, a_bar)
                pts.append((a_bar, q.b_cal, q.J, beta))
    else:
        raise UsageError("give --J-range with --c-range, or --d-range with --alpha-range")
    if len(pts) > MAX_GRID:
        raise UsageError(f"grid has {len(pts)} points, limit is {MAX_GRID}")
    return pts


def cmd_phase_diagram(args, out) -> int:
    pts = phase_grid(args)
    workers = args.workers or os.cpu_count() or 1
    if workers > 1 and len(pts) >= 4096:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(phase_row, pts, chunksize=1024))
    else:
        rows = [phase_row(pt) for pt in pts]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PHASE_HEADER)
    w.writerows(rows)
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(buf.getvalue())
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
        out.write(f"wrote {len(rows)} rows to {args.out}\n")
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_validate(args, out) -> int:
    p = _params(args)
    if args.depth < 2:
        raise UsageError("--depth must be at least 2")
    if 1 + sum(2**i for i in range(1, args.depth + 1)) > fv.MAX_VERTICES:
        raise UsageError(f"depth {args.depth} exceeds the enumeration cap")
    if args.h == "zero":
        res = fv.compatibility_residual(p, fv.BoundaryField.zero(), args.depth)
        out.write(f"h=0: compatibility residual {res:.3e}\n")
        return EXIT_OK
    sols = gr.fixed_points_TI(p, starts=args.starts, seed=args.seed)
    if not sols:
        raise NumericalFailure("no start converged")
    for i, u in enumerate(sols, 1):
        h = fv.h_from_u(u, args.h11)
        res = fv.compatibility_residual(p, h, args.depth)
        nec = fv.check_necessary_system(p, h)
        out.write(f"solution {i}: compatibility residual {res:.3e}, system mismatch {nec:.3e}\n")
    return EXIT_OK


COMMANDS = {
    "energy-table": cmd_energy_table,
    "classify": cmd_classify,
    "ground-states": cmd_ground_states,
    "fixed-points": cmd_fixed_points,
    "phase-diagram": cmd_phase_diagram,
    "validate": cmd_validate,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = _merge_config(parser.parse_args(argv))
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NumericalFailure as exc:
        err.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except (ValueError, ArithmeticError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
