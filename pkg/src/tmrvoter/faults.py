"""Exhaustive internal fault injection with external (function module) labelling.

Two injection semantics are supported:

``ASSIGNMENT``
    every internal node is forced to a chosen bit; the output gate reads the
    forced values. One scenario per assignment of all internal nodes.
``PROPAGATION``
    a set of nodes is flipped; gates are evaluated in order from possibly
    disturbed upstream values and each flip site is inverted after evaluation.

Rows come out grouped by input vector (ascending); within a group the Actual
row is first, then scenarios by ascending cardinality, ties broken by the
binary encoding of the disturbance with the first internal node as the most
significant bit.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping

import numpy as np

from .errors import UsageError
from .netlist import InputVector, Netlist, input_env, input_vectors


class InjectionSemantics(enum.Enum):
    ASSIGNMENT = "assign"
    PROPAGATION = "propagate"

    @classmethod
    def parse(cls, value) -> "InjectionSemantics":
        if isinstance(value, cls):
            return value
        aliases = {"assign": cls.ASSIGNMENT, "assignment": cls.ASSIGNMENT,
                   "propagate": cls.PROPAGATION, "propagation": cls.PROPAGATION}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise UsageError(f"unknown semantics {value!r}; use 'assign' or 'propagate'") from None


class FaultDirection(enum.Enum):
    ZERO_TO_ONE = "0->1"
    ONE_TO_ZERO = "1->0"

    @property
    def arrow(self) -> str:
        return self.value.replace("->", "→")

    @classmethod
    def towards(cls, bit: int) -> "FaultDirection":
        return cls.ZERO_TO_ONE if bit else cls.ONE_TO_ZERO


class ExternalFaultLabel(enum.Enum):
    NO_MODULE_FAULT = "No function module fault/failure"
    MODULE_FAULTS = "Single/multiple function module faults/failures"

    @classmethod
    def of(cls, vector) -> "ExternalFaultLabel":
        return cls.NO_MODULE_FAULT if len(set(vector)) <= 1 else cls.MODULE_FAULTS


class RowState(enum.Enum):
    ACTUAL = "Actual"
    CORRECT = "Correct"
    ERROR = "Error"


@dataclass(frozen=True)
class FaultScenario:
    semantics: InjectionSemantics
    forced: tuple[tuple[str, int], ...] = ()
    flips: frozenset[str] = frozenset()

    @classmethod
    def assign(cls, forced: Mapping[str, int]) -> "FaultScenario":
        return cls(InjectionSemantics.ASSIGNMENT, forced=tuple(forced.items()))

    @classmethod
    def flip(cls, sites: Iterable[str] = ()) -> "FaultScenario":
        return cls(InjectionSemantics.PROPAGATION, flips=frozenset(sites))


@dataclass(frozen=True)
class NodeValue:
    net: str
    bit: int
    fault: FaultDirection | None = None


@dataclass(frozen=True)
class EnumerationRow:
    netlist: str
    input_names: tuple[str, ...]
    inputs: tuple[int, ...]
    internal: tuple[NodeValue, ...]
    output_name: str
    output: int
    state: RowState
    external_label: ExternalFaultLabel
    cardinality: int

    @property
    def layout(self):
        """Identifies the column layout; rows with different layouts cannot share a table."""
        return (self.netlist, self.input_names, tuple(v.net for v in self.internal), self.output_name)


def fault_free_internal(netlist: Netlist, vector: InputVector) -> tuple[int, ...]:
    values = _fault_free(netlist, vector)
    return tuple(values[n] for n in netlist.internal_nodes)


def _fault_free(netlist, vector):
    values = input_env(netlist, vector)
    for g in netlist.gates:
        values[g.output] = g.apply(values)
    return values


def apply_scenario(netlist: Netlist, vector: InputVector, scenario: FaultScenario) -> EnumerationRow:
    netlist.check()
    nodes = netlist.internal_nodes
    ff = _fault_free(netlist, vector)
    env = input_env(netlist, vector)
    inputs = tuple(env[p] for p in netlist.primary_inputs)

    if scenario.semantics is InjectionSemantics.ASSIGNMENT:
        forced = dict(scenario.forced)
        _check_sites(netlist, forced)
        if any(b not in (0, 1) for b in forced.values()):
            raise UsageError("forced values must be 0 or 1")
        values = dict(env)
        for n in nodes:
            values[n] = int(forced.get(n, ff[n]))
        out = netlist.output_gate.apply(values)
        internal = tuple(
            NodeValue(n, values[n], FaultDirection.towards(values[n]) if values[n] != ff[n] else None)
            for n in nodes)
        card = sum(1 for v in internal if v.fault)
        actual = card == 0
    else:
        flips = scenario.flips
        _check_sites(netlist, flips)
        values = dict(env)
        marks = {}
        for g in netlist.gates:
            v = g.apply(values)
            if g.output in flips:
                v ^= 1
                # the arrow records this site's own upset, ending at the shown bit
                marks[g.output] = FaultDirection.towards(v)
            values[g.output] = v
        out = values[netlist.output]
        internal = tuple(NodeValue(n, values[n], marks.get(n)) for n in nodes)
        card = len(flips)
        actual = card == 0

    if actual:
        state = RowState.ACTUAL
    elif out == ff[netlist.output]:
        state = RowState.CORRECT
    else:
        state = RowState.ERROR
    return EnumerationRow(netlist.name, netlist.primary_inputs, inputs, internal, netlist.output,
                          out, state, ExternalFaultLabel.of(inputs), card)


def _check_sites(netlist, sites):
    unknown = [s for s in sites if s not in netlist.internal_nodes]
    if unknown:
        raise UsageError(f"not internal nodes of {netlist.name}: {', '.join(sorted(unknown))}")


def resolve_cardinality(netlist: Netlist, max_cardinality) -> int:
    """Map ``None``/``"all"`` or a positive int onto a concrete bound (at most n)."""
    n = len(netlist.internal_nodes)
    if max_cardinality is None or max_cardinality == "all":
        return n
    if isinstance(max_cardinality, bool) or not isinstance(max_cardinality, int):
        raise UsageError(f"max_cardinality must be a positive integer or 'all', got {max_cardinality!r}")
    if max_cardinality < 1:
        raise UsageError("max_cardinality must be at least 1")
    return min(max_cardinality, n)


def scenarios(netlist: Netlist, vector: InputVector, semantics, max_cardinality=None):
    """Yield the faulty scenarios for one input vector in canonical order."""
    return _scenarios(netlist, vector, InjectionSemantics.parse(semantics),
                      resolve_cardinality(netlist, max_cardinality))


def _scenarios(netlist, vector, semantics, limit):
    nodes = netlist.internal_nodes
    n = len(nodes)
    if semantics is InjectionSemantics.ASSIGNMENT:
        ff = fault_free_internal(netlist, vector)
        keyed = []
        for forced in product((0, 1), repeat=n):
            card = sum(a != b for a, b in zip(forced, ff))
            if 1 <= card <= limit:
                keyed.append(((card, forced), forced))
        for _, forced in sorted(keyed):
            yield FaultScenario.assign(dict(zip(nodes, forced)))
    else:
        for card in range(1, limit + 1):
            masks = sorted((tuple(int(i in c) for i in range(n)) for c in combinations(range(n), card)))
            for mask in masks:
                yield FaultScenario.flip(nodes[i] for i in range(n) if mask[i])


def _group(netlist, vector, semantics, limit):
    rows = [apply_scenario(netlist, vector, FaultScenario.flip())]
    rows.extend(apply_scenario(netlist, vector, s) for s in _scenarios(netlist, vector, semantics, limit))
    return rows


def enumerate_rows(netlist: Netlist, semantics, max_cardinality=None, workers: int | None = None):
    """Truth-cum-fault enumeration: every input vector, its Actual row and each fault scenario.

    ``workers`` > 1 spreads input vectors over a thread pool; the row order is
    the same either way.
    """
    netlist.check()
    semantics = InjectionSemantics.parse(semantics)
    limit = resolve_cardinality(netlist, max_cardinality)
    vectors = list(input_vectors(len(netlist.primary_inputs)))
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            groups = list(pool.map(lambda v: _group(netlist, v, semantics, limit), vectors))
    else:
        groups = [_group(netlist, v, semantics, limit) for v in vectors]
    return [row for g in groups for row in g]


# -- bit-parallel counting ---------------------------------------------------

@dataclass(frozen=True)
class InputTally:
    inputs: tuple[int, ...]
    faulty: int
    masked: int


CHUNK_BITS = 18


def _tally_vector(netlist, vector, semantics, limit):
    nodes = netlist.internal_nodes
    n = len(nodes)
    ff = _fault_free(netlist, vector)
    ref = ff[netlist.output]
    ff_code = 0
    for node in nodes:
        ff_code = (ff_code << 1) | ff[node]
    env = input_env(netlist, vector)
    total = 1 << n
    step = 1 << min(n, CHUNK_BITS)
    faulty = masked = 0
    for start in range(0, total, step):
        s = np.arange(start, min(start + step, total), dtype=np.uint64)
        bits = {node: ((s >> np.uint64(n - 1 - i)) & np.uint64(1)).astype(np.uint8)
                for i, node in enumerate(nodes)}
        values = dict(env)
        if semantics is InjectionSemantics.ASSIGNMENT:
            values.update(bits)
            out = netlist.output_gate.apply(values)
            card = np.bitwise_count(s ^ np.uint64(ff_code))
        else:
            for g in netlist.gates:
                v = g.apply(values)
                if g.output in bits:
                    v = v ^ bits[g.output]
                values[g.output] = v
            out = values[netlist.output]
            card = np.bitwise_count(s)
        valid = (card >= 1) & (card <= limit)
        faulty += int(np.count_nonzero(valid))
        masked += int(np.count_nonzero(valid & (np.asarray(out) == ref)))
    return InputTally(tuple(env[p] for p in netlist.primary_inputs), faulty, masked)


def tally(netlist: Netlist, semantics, max_cardinality=None, workers: int | None = None) -> list[InputTally]:
    """Per-input (faulty, masked) scenario counts without materializing rows.

    Scenarios are evaluated as numpy lanes, 2**18 at a time, so netlists with
    a couple of dozen internal nodes stay tractable.
    """
    netlist.check()
    semantics = InjectionSemantics.parse(semantics)
    limit = resolve_cardinality(netlist, max_cardinality)
    vectors = list(input_vectors(len(netlist.primary_inputs)))
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda v: _tally_vector(netlist, v, semantics, limit), vectors))
    return [_tally_vector(netlist, v, semantics, limit) for v in vectors]
