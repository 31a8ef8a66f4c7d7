"""Command-line front end: ``tmrvoter <command> ...``.

Exit status is 0 on success, 1 on a domain error (unknown voter, unreadable
or malformed file, undefined result) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import dsl, faults, metrics, report, voters
from .errors import DomainError, TmrError, UsageError
from .netlist import Netlist, truth_table


class CliFailure(Exception):
    """Domain-level failure; reported on stderr with exit status 1."""


def _load_source(arg: str) -> Netlist:
    """A positional names a builtin voter unless it looks like a path."""
    if "." in arg or os.sep in arg or "/" in arg:
        try:
            with open(arg, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise CliFailure(f"cannot read {arg}: {e.strerror or e}") from None
        try:
            return dsl.parse(text)
        except dsl.ParseError as e:
            raise CliFailure(f"{arg}:{e.line}:{e.column}: {e.kind}: {e.message}") from None
    try:
        return voters.builtin(arg)
    except UsageError as e:
        raise CliFailure(str(e)) from None


def _max_faults(text: str):
    if text.lower() == "all":
        return None
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'all', got {text!r}")
    if k < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return k


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as e:
            raise CliFailure(f"cannot write {args.out}: {e.strerror or e}") from None
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------

def cmd_list(args):
    _emit(args, "".join(f"{n}\n" for n in voters.VOTER_NAMES))


def cmd_show(args):
    _emit(args, dsl.serialize(_load_source(args.voter)))


def cmd_truth(args):
    n = _load_source(args.voter)
    head = " ".join(n.primary_inputs) + " | " + n.output
    lines = [head]
    for vec, out in truth_table(n):
        lines.append(" ".join(str(b) for b in vec) + " | " + str(out))
    _emit(args, "\n".join(lines) + "\n")


def cmd_enumerate(args):
    n = _load_source(args.voter)
    rows = faults.enumerate_rows(n, args.semantics, args.max_faults, workers=args.workers)
    title = report.table_title(n.name, args.semantics, args.max_faults)
    _emit(args, report.emit_table(rows, args.format, title))


def cmd_fmr(args):
    n = _load_source(args.voter)
    rep = metrics.fmr(n, args.semantics, args.max_faults, workers=args.workers)
    _emit(args, report.emit_analysis(rep, "json") if args.json else report.emit_fmr_summary(rep))


def cmd_reliability(args):
    _emit(args, report.emit_curve(metrics.reliability_curve(args.step)))


def cmd_rank(args):
    path = args.metrics or metrics.table5_path()
    try:
        entries = metrics.load_metrics(path)
        ranked = metrics.rank(entries)
    except OSError as e:
        raise CliFailure(f"cannot read {path}: {e.strerror or e}") from None
    except UsageError as e:
        raise CliFailure(f"{path}: {e}") from None
    claims = metrics.paper_ratio_claims(ranked)
    _emit(args, report.emit_ranking(ranked, claims, args.format))


def cmd_parse(args):
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliFailure(f"cannot read {args.file}: {e.strerror or e}") from None
    try:
        dsl.parse(text)
    except dsl.ParseError as e:
        raise CliFailure(f"{args.file}:{e.line}:{e.column}: {e.kind}: {e.message}") from None
    _emit(args, "ok\n")


def cmd_compare(args):
    head = ["voter", "internal nodes", "FMR (assign, all)", "FMR (propagate, all)", "paper-reported FMR"]
    lines = ["| " + " | ".join(head) + " |", "|" + "|".join("---" for _ in head) + "|"]
    for name in voters.VOTER_NAMES:
        n = voters.builtin(name)
        a = metrics.fmr(n, "assign")
        p = metrics.fmr(n, "propagate")
        lines.append("| " + " | ".join([
            name, str(len(n.internal_nodes)),
            f"{a.masked}/{a.total} = {a.fmr_decimal}",
            f"{p.masked}/{p.total} = {p.fmr_decimal}",
            metrics.PAPER_FMR[name],
        ]) + " |")
    _emit(args, "\n".join(lines) + "\n")


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmrvoter",
        description="Fault masking analysis of TMR majority voters.")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    def voter_arg(p):
        p.add_argument("voter", help="builtin voter name (classical, kp, bn, proposed) or a .voter file")

    def out_arg(p):
        p.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    def fault_args(p):
        p.add_argument("--semantics", choices=("assign", "propagate"), default="assign",
                       help="fault injection semantics: force every internal node (assign) "
                            "or flip a set of nodes and propagate (propagate); default assign")
        p.add_argument("--max-faults", type=_max_faults, default=None, metavar="K|all",
                       help="largest number of simultaneous internal faults; default all")
        p.add_argument("--workers", type=int, default=None, metavar="N",
                       help="evaluate input vectors on N threads; output order is unaffected")

    p = add("list", cmd_list, "list the builtin voters")
    out_arg(p)

    p = add("show", cmd_show, "print a voter in canonical .voter form")
    voter_arg(p)
    out_arg(p)

    p = add("truth", cmd_truth, "print the fault-free truth table")
    voter_arg(p)
    out_arg(p)

    p = add("enumerate", cmd_enumerate, "print the truth-cum-fault enumeration table")
    voter_arg(p)
    fault_args(p)
    p.add_argument("--format", choices=report.FORMATS_TABLE, default="md",
                   help="output format: Markdown (md) or CSV (csv); default md")
    out_arg(p)

    p = add("fmr", cmd_fmr, "compute the fault masking ratio")
    voter_arg(p)
    fault_args(p)
    p.add_argument("--json", action="store_true", help="emit the full analysis as JSON")
    out_arg(p)

    p = add("reliability", cmd_reliability, "TMR vs. simplex reliability curve as CSV")
    p.add_argument("--step", default="0.01", metavar="S",
                   help="module reliability increment; 1/S must be an integer; default 0.01")
    out_arg(p)

    p = add("rank", cmd_rank, "rank voters by FT-FOM from a metrics CSV")
    p.add_argument("--metrics", metavar="FILE",
                   help="CSV with header voter,power_uw,delay_ns,area_um2,fmr_percent; "
                        "default: the bundled table5.csv")
    p.add_argument("--format", choices=("md", "csv"), default="md",
                   help="output format; default md")
    out_arg(p)

    p = add("parse", cmd_parse, "check a .voter file and report the first error")
    p.add_argument("file", help=".voter file to check")
    out_arg(p)

    p = add("compare", cmd_compare, "FMR summary of all builtin voters")
    out_arg(p)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except CliFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (DomainError, TmrError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
