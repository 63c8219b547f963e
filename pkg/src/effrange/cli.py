"""Command-line interface.

Exit status: 0 success, 1 usage error, 2 numerical precondition violation,
3 improved-versus-basic ordering violation in ``fig`` mode.

Expansion tokens: er1 textbook k cot(delta) = -1/a + r0 k^2/2; er2 -delta/k
parametrization; er18/er19 lowest-order forms with the range R; er22
tan(delta)/k = -a + r0^3 k^2/6; er23 improved small-a form; er24 improved
large-a form; inv4 reciprocal of er1.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, figures, radial, squarewell
from .errors import ScatteringError
from .expansions import ErParams, ExpansionKind, eval_expansion
from .potentials import SquareWell, parse_potential
from .records import PhaseRecord

EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_ORDERING = 3

RECORD_HEADER = ["k", "delta", "tan_delta_over_k", "k_cot_delta", "pole_near_kcot", "pole_near_tan"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return float(lo), float(hi)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--out", type=Path, help="output CSV path (default: stdout)")
    g.add_argument("--kk-min", type=float, help="smallest (kR)^2 (default 0.005)")
    g.add_argument("--kk-max", type=float, help="largest (kR)^2 (default 0.5)")
    g.add_argument("--n", type=int, help="number of (kR)^2 points (default 100)")
    g.add_argument("--window", type=_pair, metavar="LO:HI", help="(kR)^2 window, alternative to --kk-min/--kk-max")
    g.add_argument("--step", type=float, help="Numerov step in units of R (default 1e-4)")
    return p


def _well_args(p):
    p.add_argument("--potential", help="e.g. squarewell:R=1,beta=4.4934")
    p.add_argument("--R", type=float, default=1.0, help="well range (default 1)")
    p.add_argument("--beta", type=float, help="square-well depth parameter")


def build_parser():
    common = _common()
    parser = _Parser(prog="effrange", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("scatlen", parents=[common], help="square-well scattering length")
    _well_args(p)

    p = sub.add_parser("phase", parents=[common], help="Numerov phase shifts on a (kR)^2 grid")
    _well_args(p)

    p = sub.add_parser("exact", parents=[common], help="closed-form square-well phase shifts")
    _well_args(p)

    p = sub.add_parser("identity", parents=[common], help="integral identity against the solver")
    _well_args(p)

    p = sub.add_parser("coeffs", parents=[common], help="threshold k^2 coefficients of the square well")
    _well_args(p)

    p = sub.add_parser("expand", parents=[common], help="tabulate an effective-range expansion")
    p.add_argument("--kind", required=True, help="er1, er2, er18, er19, er22, er23, er24 or inv4")
    p.add_argument("--a", type=float, required=True, help="scattering length")
    p.add_argument("--r0", type=float, required=True, help="effective range")
    p.add_argument("--R", type=float, default=1.0, help="length unit for the (kR)^2 grid")

    p = sub.add_parser("fit", parents=[common], help="fit an expansion to phase-shift records")
    p.add_argument("--in", dest="infile", type=Path, required=True,
                   help="CSV with columns (k, delta) or (k, tan_delta_over_k)")
    p.add_argument("--kind", required=True)
    p.add_argument("--R", type=float, default=1.0, help="length unit for the (kR)^2 window")

    p = sub.add_parser("compare", parents=[common], help="expansion-vs-exact deviation report")
    _well_args(p)
    p.add_argument("--kinds", default="er22,er23", help="comma-separated expansion tokens")
    p.add_argument("--policy", choices=[analysis.USE_RANGE_R, analysis.USE_FITTED],
                   default=analysis.USE_RANGE_R)

    p = sub.add_parser("beta-for-a", parents=[common], help="well depth for a target scattering length")
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--a", type=float, required=True, help="target scattering length")
    p.add_argument("--bracket", type=_pair, required=True, metavar="LO:HI", help="beta*R search interval")

    p = sub.add_parser("fig", parents=[common], help="tabulate one figure as CSV")
    p.add_argument("figure_id", choices=figures.FIGURES)
    return parser


# -- helpers -------------------------------------------------------------------

def _window(args, default=analysis.DEFAULT_WINDOW):
    lo, hi = args.window if args.window else default
    if args.kk_min is not None:
        lo = args.kk_min
    if args.kk_max is not None:
        hi = args.kk_max
    n = args.n if args.n is not None else analysis.DEFAULT_N
    if not (0 <= lo <= hi and hi > 0) or n < 1:
        raise UsageError(f"invalid (kR)^2 window {lo}:{hi} with n={n}")
    return (lo, hi), n


def _spec(args, square_only=False):
    if args.potential:
        try:
            spec = parse_potential(args.potential)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif args.beta is not None:
        spec = SquareWell(args.R, args.beta)
    else:
        raise UsageError("give --potential or --beta")
    if square_only and not isinstance(spec, SquareWell):
        raise UsageError("this command needs a square well")
    return spec


def _solver_cfg(args, R):
    return radial.SolverConfig(step=args.step * R if args.step else None)


def _momenta(args, R):
    window, n = _window(args)
    return [math.sqrt(s) / R for s in analysis.ksq_grid(window, n)]


def _emit(args, header, rows, comments=()):
    if args.out:
        figures.write_csv(args.out, header, rows, comments)
        return
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([figures.fmt(v) for v in row])
    sys.stdout.write(buf.getvalue())


def _record_row(rec):
    return (rec.k, rec.delta, rec.tan_delta_over_k, rec.k_cot_delta, rec.pole_near_kcot, rec.pole_near_tan)


def read_records(path):
    """Read PhaseRecords from CSV with (k, delta) or (k, tan_delta_over_k) columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = csv.DictReader(lines)
    fields = reader.fieldnames or []
    if "k" not in fields:
        raise UsageError(f"{path}: record CSV needs a 'k' column")
    if "tan_delta_over_k" in fields:
        build = lambda row: PhaseRecord.from_tan_delta_over_k(float(row["k"]), float(row["tan_delta_over_k"]))
    elif "delta" in fields:
        build = lambda row: PhaseRecord.from_delta(float(row["k"]), float(row["delta"]))
    else:
        raise UsageError(f"{path}: need a 'delta' or 'tan_delta_over_k' column")
    return [build(row) for row in reader]


# -- commands ------------------------------------------------------------------

def cmd_scatlen(args):
    spec = _spec(args, square_only=True)
    print(figures.fmt(squarewell.scattering_length(spec)))


def cmd_phase(args):
    spec = _spec(args)
    cfg = _solver_cfg(args, spec.R)
    rows = [_record_row(radial.solve_phase(spec, k, cfg)) for k in _momenta(args, spec.R)]
    _emit(args, RECORD_HEADER, rows)


def cmd_exact(args):
    well = _spec(args, square_only=True)
    rows = [_record_row(squarewell.exact_phase_record(well, k)) for k in _momenta(args, well.R)]
    _emit(args, RECORD_HEADER, rows)


def cmd_identity(args):
    spec = _spec(args)
    cfg = _solver_cfg(args, spec.R)
    rows = []
    for k in _momenta(args, spec.R):
        rec = radial.solve_phase(spec, k, cfg)
        value = radial.integral_identity(spec, k, cfg)
        rows.append((k, rec.tan_delta_over_k, value, abs(value - rec.tan_delta_over_k)))
    _emit(args, ["k", "tan_delta_over_k", "identity", "abs_diff"], rows)


def cmd_coeffs(args):
    well = _spec(args, square_only=True)
    c = squarewell.taylor_coefficients(well)
    slope = analysis.ksq_slope_at_threshold(well)
    _emit(args, ["a", "b_small", "c_large", "r0_full", "b_small_fd"],
          [(c.a, c.b_small, c.c_large, c.r0_full, slope)])


def _kind(token):
    try:
        return ExpansionKind.from_token(token)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_expand(args):
    kind = _kind(args.kind)
    params = ErParams(args.a, args.r0)
    window, n = _window(args)
    grid = analysis.ksq_grid(window, n) / args.R**2
    values = eval_expansion(kind, params, np.sqrt(grid))
    _emit(args, ["k_sq", kind.token], list(zip(grid, values)))


def cmd_fit(args):
    kind = _kind(args.kind)
    (lo, hi), _ = _window(args)
    records = read_records(args.infile)
    res = analysis.fit_effective_range(records, kind, (lo / args.R**2, hi / args.R**2))
    _emit(args, ["kind", "a", "r0", "intercept", "slope", "rms_residual", "n_points"],
          [(kind.token, res.params.a, res.params.r0, res.intercept, res.slope,
            res.rms_residual, res.n_points)])


def cmd_compare(args):
    well = _spec(args, square_only=True)
    kinds = [_kind(t.strip()) for t in args.kinds.split(",") if t.strip()]
    (lo, hi), n = _window(args)
    reports = analysis.compare_expansions(well, kinds, args.policy,
                                          (lo / well.R**2, hi / well.R**2), n)
    rows = [(r.kind.token, r.params.a, r.params.r0, r.max_abs_dev, r.mean_abs_dev, r.n_flagged)
            for r in reports]
    _emit(args, ["kind", "a", "r0", "max_abs_dev", "mean_abs_dev", "n_flagged"], rows)


def cmd_beta_for_a(args):
    beta = analysis.solve_beta_for_target_a(args.R, args.a, args.bracket)
    print(figures.fmt(beta))


def cmd_fig(args):
    overrides = {}
    if args.window or args.kk_min is not None or args.kk_max is not None:
        overrides["window"], _ = _window(args)
    if args.n is not None:
        overrides["n"] = args.n
    out = args.out or Path(f"{args.figure_id}.csv")
    job = figures.FigureJob(args.figure_id, out, overrides)
    result = figures.run_figure(job, check_ordering=False)
    print(result.summary())
    if result.violations:
        for c in result.violations:
            print(f"ordering violation: {c.label}: {c.improved} max_abs_dev "
                  f"{c.max_abs_dev[c.improved]:.6g} > {c.basic} {c.max_abs_dev[c.basic]:.6g}",
                  file=sys.stderr)
        return EXIT_ORDERING
    return 0


COMMANDS = {
    "scatlen": cmd_scatlen,
    "phase": cmd_phase,
    "exact": cmd_exact,
    "identity": cmd_identity,
    "coeffs": cmd_coeffs,
    "expand": cmd_expand,
    "fit": cmd_fit,
    "compare": cmd_compare,
    "beta-for-a": cmd_beta_for_a,
    "fig": cmd_fig,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args) or 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"effrange {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScatteringError, ValueError) as exc:
        print(f"effrange {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
