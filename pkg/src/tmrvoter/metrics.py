"""Fault masking ratio, TMR reliability, and FT-FOM ranking."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, UsageError
from .faults import InjectionSemantics, resolve_cardinality, tally
from .netlist import Netlist
from .voters import is_builtin

# FMR values as published for the four builtin voters (all fault cardinalities).
PAPER_FMR = {"classical": "0.4286", "kp": "0.7083", "bn": "0.5", "proposed": "0.75"}

# Published FT-FOM multipliers, (numerator voter, denominator voter) -> ratio.
PAPER_FTFOM_RATIOS = {
    ("classical", "bn"): "1.306",
    ("classical", "kp"): "3.5",
    ("proposed", "classical"): "2.9",
    ("proposed", "kp"): "16.9",
    ("proposed", "bn"): "4.1",
}


def decimal_places(x, places: int) -> str:
    """Render a Fraction/number with round-half-even to a fixed number of places."""
    q = Decimal(1).scaleb(-places)
    d = Decimal(x.numerator) / Decimal(x.denominator) if isinstance(x, Fraction) else Decimal(str(x))
    return str(d.quantize(q, rounding=ROUND_HALF_EVEN))


def significant(x, digits: int = 3) -> str:
    """Round to ``digits`` significant figures, always in positional notation."""
    x = Fraction(x)
    if x == 0:
        return "0"
    d = Decimal(x.numerator) / Decimal(x.denominator)
    exp = d.adjusted()
    q = d.quantize(Decimal(1).scaleb(exp - digits + 1), rounding=ROUND_HALF_EVEN)
    if q.adjusted() != exp:  # rounding carried into a new digit, e.g. 9.995 -> 10.0
        q = d.quantize(Decimal(1).scaleb(exp - digits + 2), rounding=ROUND_HALF_EVEN)
    return f"{q:f}"


# -- fault masking ratio ------------------------------------------------------

@dataclass(frozen=True)
class FmrReport:
    voter: str
    semantics: InjectionSemantics
    max_cardinality: int | None  # None means every cardinality
    total: int  # p: faulty scenarios over all inputs
    masked: int  # q: scenarios whose output stays correct
    per_input: tuple[tuple[tuple[int, ...], int, int], ...]
    paper_reported: str | None = None

    @property
    def fmr(self) -> Fraction:
        return Fraction(self.masked, self.total)

    @property
    def exposure(self) -> Fraction:
        return 1 - self.fmr

    @property
    def fmr_decimal(self) -> str:
        return decimal_places(self.fmr, 4)

    @property
    def exposure_decimal(self) -> str:
        return decimal_places(self.exposure, 4)

    @property
    def paper_agrees(self) -> bool | None:
        if self.paper_reported is None:
            return None
        return decimal_places(Fraction(self.paper_reported), 4) == self.fmr_decimal


def fmr(netlist: Netlist, semantics="assign", max_cardinality=None, workers: int | None = None) -> FmrReport:
    """Pool every faulty scenario over all input vectors (uniform inputs) and count the masked ones."""
    netlist.check()
    semantics = InjectionSemantics.parse(semantics)
    n = len(netlist.internal_nodes)
    if n == 0:
        raise DomainError(f"no fault sites: {netlist.name} has no internal nodes")
    limit = resolve_cardinality(netlist, max_cardinality)
    counts = tally(netlist, semantics, limit, workers=workers)
    p = sum(c.faulty for c in counts)
    q = sum(c.masked for c in counts)
    paper = PAPER_FMR.get(netlist.name) if limit == n and is_builtin(netlist) else None
    return FmrReport(
        voter=netlist.name,
        semantics=semantics,
        max_cardinality=None if max_cardinality in (None, "all") else int(max_cardinality),
        total=p,
        masked=q,
        per_input=tuple((c.inputs, c.faulty, c.masked) for c in counts),
        paper_reported=paper,
    )


# -- reliability -------------------------------------------------------------

@dataclass(frozen=True)
class ReliabilityPoint:
    r_m: float
    r_simplex: float
    r_tmr: float
    r_voter: float = 1.0  # perfect voter


def _tmr(r):
    return r ** 3 + 3 * (1 - r) * r ** 2


def tmr_reliability(r_m) -> ReliabilityPoint:
    """TMR system reliability for module reliability ``r_m``, with a perfect voter."""
    try:
        ok = 0 <= r_m <= 1
    except TypeError:
        ok = False
    if not ok:
        raise UsageError(f"module reliability must lie in [0, 1], got {r_m!r}")
    return ReliabilityPoint(float(r_m), float(r_m), float(_tmr(r_m)))


def reliability_curve(step) -> list[ReliabilityPoint]:
    """Points r_m = 0, step, 2*step, ..., 1. ``step`` must divide 1 exactly."""
    try:
        s = Fraction(str(step))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"invalid step {step!r}") from None
    if not 0 < s <= 1:
        raise UsageError(f"step must lie in (0, 1], got {step}")
    count = 1 / s
    if count.denominator != 1:
        raise UsageError(f"1/step must be an integer, got step {step}")
    n = int(count)
    points = []
    for i in range(n + 1):
        r = Fraction(i, n)
        points.append(ReliabilityPoint(float(r), float(r), float(_tmr(r))))
    return points


# -- FT-FOM ------------------------------------------------------------------

def _exact(value, field):
    try:
        return Fraction(str(value).strip()) if not isinstance(value, Fraction) else value
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{field}: not a number: {value!r}") from None


@dataclass(frozen=True)
class MetricsEntry:
    voter: str
    power_uw: Fraction
    delay_ns: Fraction
    area_um2: Fraction
    fmr_percent: Fraction

    def __post_init__(self):
        for name in ("power_uw", "delay_ns", "area_um2", "fmr_percent"):
            object.__setattr__(self, name, _exact(getattr(self, name), name))
        for name in ("power_uw", "delay_ns", "area_um2"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{self.voter}: {name} must be positive")
        if not 0 <= self.fmr_percent <= 100:
            raise UsageError(f"{self.voter}: fmr_percent must lie in [0, 100]")


@dataclass(frozen=True)
class FtFomEntry:
    voter: str
    pdap: Fraction
    fom: Fraction
    ft_fom: Fraction


def ft_fom(entry: MetricsEntry) -> FtFomEntry:
    """FOM = 1/(power*delay*area); FT-FOM = FMR% * FOM, in (uW*ns*um^2)^-1."""
    if entry.fmr_percent <= 0:
        raise UsageError(f"{entry.voter}: FT-FOM needs a positive FMR")
    pdap = entry.power_uw * entry.delay_ns * entry.area_um2
    fom = 1 / pdap
    return FtFomEntry(entry.voter, pdap, fom, entry.fmr_percent * fom)


@dataclass(frozen=True)
class RankedEntry:
    rank: int
    entry: FtFomEntry
    ratio_to_best: Fraction
    ratios: dict  # other voter -> this ft_fom / other ft_fom


@dataclass(frozen=True)
class RatioClaim:
    numerator: str
    denominator: str
    computed: Fraction
    paper_reported: str


def rank(entries: Sequence[MetricsEntry]) -> list[RankedEntry]:
    if not entries:
        raise UsageError("rank needs at least one metrics entry")
    names = [e.voter for e in entries]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise UsageError(f"duplicate voter names: {', '.join(dupes)}")
    scored = sorted((ft_fom(e) for e in entries), key=lambda f: (-f.ft_fom, f.voter))
    best = scored[0].ft_fom
    out = []
    for i, f in enumerate(scored, 1):
        ratios = {o.voter: f.ft_fom / o.ft_fom for o in scored if o.voter != f.voter}
        out.append(RankedEntry(i, f, f.ft_fom / best, ratios))
    return out


def paper_ratio_claims(ranked: Sequence[RankedEntry]) -> list[RatioClaim]:
    """Published FT-FOM multipliers next to the ratios recomputed from the inputs."""
    by_name = {r.entry.voter: r.entry.ft_fom for r in ranked}
    claims = []
    for (a, b), reported in PAPER_FTFOM_RATIOS.items():
        if a in by_name and b in by_name:
            claims.append(RatioClaim(a, b, by_name[a] / by_name[b], reported))
    return claims


METRICS_HEADER = ("voter", "power_uw", "delay_ns", "area_um2", "fmr_percent")


def read_metrics(text: str) -> list[MetricsEntry]:
    """Parse a metrics CSV (header ``voter,power_uw,delay_ns,area_um2,fmr_percent``)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise UsageError("metrics file is empty") from None
    if tuple(h.strip() for h in header) != METRICS_HEADER:
        raise UsageError(f"metrics header must be {','.join(METRICS_HEADER)}")
    entries = []
    for lineno, row in enumerate(reader, 2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(METRICS_HEADER):
            raise UsageError(f"line {lineno}: expected {len(METRICS_HEADER)} fields, got {len(row)}")
        voter, *nums = (c.strip() for c in row)
        entries.append(MetricsEntry(voter, *nums))
    return entries


def load_metrics(path) -> list[MetricsEntry]:
    with open(path, encoding="utf-8", newline="") as fh:
        return read_metrics(fh.read())


def table5_path():
    from importlib.resources import files
    return files("tmrvoter").joinpath("data", "table5.csv")


__all__ = [
    "FmrReport", "fmr", "ReliabilityPoint", "tmr_reliability", "reliability_curve",
    "MetricsEntry", "FtFomEntry", "ft_fom", "RankedEntry", "rank", "RatioClaim",
    "paper_ratio_claims", "read_metrics", "load_metrics", "decimal_places", "significant",
    "PAPER_FMR", "PAPER_FTFOM_RATIOS",
]
