"""Markdown / CSV / JSON rendering. Every emitter is byte-deterministic."""
from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from .errors import UsageError
from .faults import EnumerationRow, ExternalFaultLabel, InjectionSemantics
from .metrics import (FmrReport, RankedEntry, RatioClaim, ReliabilityPoint,
                      decimal_places, significant)

FORMATS_TABLE = ("md", "csv")


def _csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _md_row(cells) -> str:
    return "| " + " | ".join(cells) + " |"


def table_title(name: str, semantics, max_cardinality=None) -> str:
    sem = InjectionSemantics.parse(semantics).value
    mf = "all" if max_cardinality in (None, "all") else max_cardinality
    return f"Truth-cum-fault enumeration of {name} ({sem}, max faults {mf})"


def emit_table(rows: Sequence[EnumerationRow], fmt: str = "md", title: str | None = None) -> str:
    """Render a truth-cum-fault enumeration.

    Markdown mirrors the published layout: a section row per input vector
    carrying the external fault label, input bits only on the group's first
    row, and faulted cells written as ``1 (0→1)``. CSV repeats the inputs on
    every row and splits each node into a value column and a ``_fault``
    column holding ``0->1``, ``1->0`` or nothing.
    """
    if not rows:
        raise UsageError("no rows to render")
    layout = rows[0].layout
    if any(r.layout != layout for r in rows):
        raise UsageError("rows come from different netlists")
    first = rows[0]
    nodes = [v.net for v in first.internal]

    if fmt == "csv":
        head = [n.lower() for n in first.input_names]
        for n in nodes:
            head += [n.lower(), f"{n.lower()}_fault"]
        head += [first.output_name.lower(), "state", "external_label"]
        body = [head]
        for r in rows:
            line = [str(b) for b in r.inputs]
            for v in r.internal:
                line += [str(v.bit), v.fault.value if v.fault else ""]
            line += [str(r.output), r.state.value, r.external_label.value]
            body.append(line)
        return _csv_text(body)
    if fmt != "md":
        raise UsageError(f"unknown table format {fmt!r}; use md or csv")

    head = [*first.input_names, *nodes, first.output_name, "State"]
    out = [f"# {title or f'Truth-cum-fault enumeration of {first.netlist}'}", ""]
    out.append(_md_row(head))
    out.append("|" + "|".join("---" for _ in head) + "|")
    current = None
    for r in rows:
        lead = [""] * len(r.inputs)
        if r.inputs != current:
            current = r.inputs
            out.append(_md_row([f"*{r.external_label.value}*"] + [""] * (len(head) - 1)))
            lead = [str(b) for b in r.inputs]
        cells = [f"{v.bit} ({v.fault.arrow})" if v.fault else str(v.bit) for v in r.internal]
        out.append(_md_row(lead + cells + [str(r.output), r.state.value]))
    return "\n".join(out) + "\n"


def _bits(vec) -> str:
    return "".join(str(b) for b in vec)


def analysis_dict(report: FmrReport) -> dict:
    p, q = report.total, report.masked
    doc = {
        "voter": report.voter,
        "semantics": report.semantics.value,
        "max_cardinality": "all" if report.max_cardinality is None else report.max_cardinality,
        "totals": {"p": p, "q": q},
        "fmr": {"numerator": q, "denominator": p, "decimal": report.fmr_decimal},
        "exposure": {"numerator": p - q, "denominator": p, "decimal": report.exposure_decimal},
        "per_input": [{"input": _bits(v), "faulty": f, "masked": m} for v, f, m in report.per_input],
    }
    if report.paper_reported is not None:
        doc["paper_comparison"] = {
            "computed": report.fmr_decimal,
            "paper_reported": report.paper_reported,
            "agrees": report.paper_agrees,
        }
    return doc


def emit_analysis(report: FmrReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(analysis_dict(report), separators=(",", ":"), ensure_ascii=False) + "\n"
    if fmt == "csv":
        rows = [["input", "faulty", "masked"]]
        rows += [[_bits(v), str(f), str(m)] for v, f, m in report.per_input]
        rows.append(["total", str(report.total), str(report.masked)])
        return _csv_text(rows)
    raise UsageError(f"unknown analysis format {fmt!r}; use json or csv")


def parse_analysis_json(text: str) -> dict:
    return json.loads(text)


def parse_analysis_csv(text: str) -> tuple[list[tuple[str, int, int]], tuple[int, int]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["input", "faulty", "masked"] or rows[-1][0] != "total":
        raise UsageError("not an analysis CSV")
    per_input = [(r[0], int(r[1]), int(r[2])) for r in rows[1:-1]]
    return per_input, (int(rows[-1][1]), int(rows[-1][2]))


CURVE_HEADER = ("r_m", "r_simplex", "r_tmr")


def emit_curve(points: Sequence[ReliabilityPoint], fmt: str = "csv") -> str:
    if fmt != "csv":
        raise UsageError(f"unknown curve format {fmt!r}; only csv is supported")
    if not points:
        raise UsageError("no reliability points to render")
    rows = [list(CURVE_HEADER)]
    rows += [[f"{p.r_m:.6f}", f"{p.r_simplex:.6f}", f"{p.r_tmr:.6f}"] for p in points]
    return _csv_text(rows)


def parse_curve_csv(text: str) -> list[tuple[float, float, float]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CURVE_HEADER:
        raise UsageError("not a reliability curve CSV")
    return [tuple(float(c) for c in r) for r in rows[1:]]


def emit_ranking(ranked: Sequence[RankedEntry], claims: Sequence[RatioClaim] = (), fmt: str = "md") -> str:
    """FT-FOM ranking, pairwise ratio matrix, and published multipliers beside recomputed ones."""
    names = [r.entry.voter for r in ranked]
    if fmt == "csv":
        rows = [["rank", "voter", "pdap", "fom", "ft_fom", "ratio_to_best"]]
        for r in ranked:
            e = r.entry
            rows.append([str(r.rank), e.voter, significant(e.pdap), significant(e.fom),
                         significant(e.ft_fom), significant(r.ratio_to_best)])
        return _csv_text(rows)
    if fmt != "md":
        raise UsageError(f"unknown ranking format {fmt!r}; use md or csv")

    out = ["# FT-FOM ranking", "",
           "FT-FOM = FMR (%) / (power * delay * area), units (uW * ns * um^2)^-1.", ""]
    head = ["rank", "voter", "PDAP", "FOM", "FT-FOM", "ratio to best"]
    out += [_md_row(head), "|" + "|".join("---" for _ in head) + "|"]
    for r in ranked:
        e = r.entry
        out.append(_md_row([str(r.rank), e.voter, significant(e.pdap), significant(e.fom),
                            significant(e.ft_fom), significant(r.ratio_to_best)]))
    if len(ranked) > 1:
        out += ["", "## FT-FOM ratios (row / column)", ""]
        head = ["", *names]
        out += [_md_row(head), "|" + "|".join("---" for _ in head) + "|"]
        for r in ranked:
            cells = [significant(r.ratios[n]) if n in r.ratios else "1.00" for n in names]
            out.append(_md_row([r.entry.voter, *cells]))
    if claims:
        out += ["", "## Published multipliers vs. computed", ""]
        head = ["ratio", "computed", "paper-reported"]
        out += [_md_row(head), "|" + "|".join("---" for _ in head) + "|"]
        for c in claims:
            out.append(_md_row([f"{c.numerator}/{c.denominator}", significant(c.computed), c.paper_reported]))
    return "\n".join(out) + "\n"


def emit_fmr_summary(report: FmrReport) -> str:
    mf = "all" if report.max_cardinality is None else report.max_cardinality
    lines = [
        f"voter: {report.voter}",
        f"semantics: {report.semantics.value}, max faults: {mf}",
        f"FMR = {report.masked}/{report.total} = {report.fmr_decimal}",
        f"exposure = {report.total - report.masked}/{report.total} = {report.exposure_decimal}",
    ]
    if report.paper_reported is not None:
        lines.append(f"paper: {report.paper_reported}")
        if report.paper_agrees:
            lines.append("computed value agrees with the paper-reported value")
        else:
            lines.append(f"computed {report.fmr_decimal} differs from paper-reported {report.paper_reported}")
    return "\n".join(lines) + "\n"


__all__ = [
    "emit_table", "table_title", "emit_analysis", "analysis_dict", "parse_analysis_json",
    "parse_analysis_csv", "emit_curve", "parse_curve_csv", "emit_ranking", "emit_fmr_summary",
    "ExternalFaultLabel",
]
