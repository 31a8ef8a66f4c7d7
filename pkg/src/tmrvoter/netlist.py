"""Immutable single-output combinational netlists and their fault-free evaluation.

Bits are plain ints (0/1). Gate functions are written with ``&``, ``|`` and
``^`` only, so the same code evaluates scalar bits and numpy ``uint8`` arrays
(one lane per fault scenario) without change.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import product
from typing import Mapping, Sequence, Union

from .errors import NetlistError, UsageError

IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

MAX_FANIN = 8


class GateKind(enum.Enum):
    INV = "INV"
    AND = "AND"
    OR = "OR"
    NAND = "NAND"
    NOR = "NOR"
    XOR = "XOR"
    XNOR = "XNOR"
    MUX2 = "MUX2"
    EXPR = "EXPR"

    @property
    def arity(self) -> tuple[int, int]:
        if self is GateKind.INV:
            return (1, 1)
        if self is GateKind.MUX2:
            return (3, 3)
        if self is GateKind.EXPR:
            return (1, 64)
        return (2, MAX_FANIN)


# -- boolean expression trees (EXPR gates) ----------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def nets(self):
        yield self.name


@dataclass(frozen=True)
class Not:
    arg: "Expr"

    def nets(self):
        yield from self.arg.nets()


@dataclass(frozen=True)
class _Nary:
    args: tuple["Expr", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 2:
            raise ValueError(f"{type(self).__name__} needs at least two operands")

    def nets(self):
        for a in self.args:
            yield from a.nets()


class And(_Nary):
    pass


class Or(_Nary):
    pass


class Xor(_Nary):
    pass


Expr = Union[Var, Not, And, Or, Xor]


def eval_expr(expr: Expr, values: Mapping[str, object]):
    if isinstance(expr, Var):
        return values[expr.name]
    if isinstance(expr, Not):
        return eval_expr(expr.arg, values) ^ 1
    args = [eval_expr(a, values) for a in expr.args]
    if isinstance(expr, And):
        return reduce(lambda a, b: a & b, args)
    if isinstance(expr, Or):
        return reduce(lambda a, b: a | b, args)
    return reduce(lambda a, b: a ^ b, args)


def _unique(names):
    seen = []
    for n in names:
        if n not in seen:
            seen.append(n)
    return tuple(seen)


# -- gates and netlists -----------------------------------------------------

@dataclass(frozen=True)
class Gate:
    """One gate driving ``output``.

    For MUX2 the inputs are ``(select, a, b)``: select 0 routes ``a``, select 1
    routes ``b``. For EXPR the inputs are the nets referenced by ``expr`` in
    order of first appearance; use :meth:`expression` to build one.
    """

    output: str
    kind: GateKind
    inputs: tuple[str, ...]
    expr: Expr | None = None

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is GateKind.EXPR:
            if self.expr is None:
                raise ValueError(f"EXPR gate {self.output} has no expression")
            if self.inputs != _unique(self.expr.nets()):
                raise ValueError(f"EXPR gate {self.output}: inputs must list the expression's nets")
        elif self.expr is not None:
            raise ValueError(f"{kind.value} gate {self.output} cannot carry an expression")
        lo, hi = kind.arity
        if not lo <= len(self.inputs) <= hi:
            want = str(lo) if lo == hi else f"{lo}..{hi}"
            raise ValueError(f"{kind.value} requires {want} inputs, got {len(self.inputs)}")

    @classmethod
    def expression(cls, output: str, expr: Expr) -> "Gate":
        return cls(output, GateKind.EXPR, _unique(expr.nets()), expr)

    def apply(self, values: Mapping[str, object]):
        k = self.kind
        if k is GateKind.EXPR:
            return eval_expr(self.expr, values)
        args = [values[n] for n in self.inputs]
        if k is GateKind.INV:
            return args[0] ^ 1
        if k is GateKind.MUX2:
            sel, a, b = args
            return (a & (sel ^ 1)) | (b & sel)
        if k in (GateKind.AND, GateKind.NAND):
            v = reduce(lambda x, y: x & y, args)
        elif k in (GateKind.OR, GateKind.NOR):
            v = reduce(lambda x, y: x | y, args)
        else:
            v = reduce(lambda x, y: x ^ y, args)
        if k in (GateKind.NAND, GateKind.NOR, GateKind.XNOR):
            v = v ^ 1
        return v


@dataclass(frozen=True)
class Violation:
    net: str
    reason: str

    def __str__(self):
        return self.reason


@dataclass(frozen=True)
class Netlist:
    name: str
    primary_inputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    output: str

    def __post_init__(self):
        object.__setattr__(self, "primary_inputs", tuple(self.primary_inputs))
        object.__setattr__(self, "gates", tuple(self.gates))

    @cached_property
    def violations(self) -> tuple[Violation, ...]:
        return tuple(_violations(self))

    @cached_property
    def internal_nodes(self) -> tuple[str, ...]:
        return tuple(g.output for g in self.gates if g.output != self.output)

    @property
    def output_gate(self) -> Gate:
        for g in self.gates:
            if g.output == self.output:
                return g
        raise NetlistError([Violation(self.output, f"primary output {self.output} is not driven")])

    def check(self) -> "Netlist":
        if self.violations:
            raise NetlistError(self.violations)
        return self


def _violations(n: Netlist):
    defined: set[str] = set()
    drivers: dict[str, int] = {}
    for pi in n.primary_inputs:
        if not IDENT.match(pi):
            yield Violation(pi, f"invalid identifier {pi!r}")
        if pi in defined:
            yield Violation(pi, f"duplicate primary input {pi}")
        defined.add(pi)
    if not n.primary_inputs:
        yield Violation("", "netlist has no primary inputs")
    outputs = {g.output for g in n.gates}
    for g in n.gates:
        if not IDENT.match(g.output):
            yield Violation(g.output, f"invalid identifier {g.output!r}")
        for src in g.inputs:
            if src == g.output:
                yield Violation(g.output, f"self-reference/cycle at {g.output}")
            elif src not in defined:
                if src in outputs:
                    yield Violation(src, f"forward reference to {src} in gate {g.output}")
                else:
                    yield Violation(src, f"undefined net {src} in gate {g.output}")
        drivers[g.output] = drivers.get(g.output, 0) + 1
        if g.output in n.primary_inputs:
            yield Violation(g.output, f"multiple drivers for {g.output} (primary input)")
        elif drivers[g.output] == 2:
            yield Violation(g.output, f"multiple drivers for {g.output}")
        defined.add(g.output)
    if n.output not in outputs:
        yield Violation(n.output, f"primary output {n.output} is not driven")
    elif n.gates[-1].output != n.output:
        yield Violation(n.output, f"primary output {n.output} must be driven by the last gate")


def validate(netlist: Netlist) -> list[Violation]:
    """Return every invariant violation; an empty list means the netlist is ok."""
    return list(netlist.violations)


def internal_nodes(netlist: Netlist) -> tuple[str, ...]:
    return netlist.check().internal_nodes


InputVector = Union[Sequence[int], Mapping[str, int]]


def input_env(netlist: Netlist, vector: InputVector) -> dict[str, int]:
    pis = netlist.primary_inputs
    if isinstance(vector, Mapping):
        missing = [p for p in pis if p not in vector]
        if missing:
            raise UsageError(f"missing input bit(s) for {', '.join(missing)}")
        env = {p: vector[p] for p in pis}
    else:
        vector = tuple(vector)
        if len(vector) != len(pis):
            raise UsageError(f"expected {len(pis)} input bits, got {len(vector)}")
        env = dict(zip(pis, vector))
    for p, b in env.items():
        if b not in (0, 1):
            raise UsageError(f"input {p} must be 0 or 1, got {b!r}")
        env[p] = int(b)
    return env


def evaluate(netlist: Netlist, vector: InputVector) -> dict[str, int]:
    """Evaluate every net in declaration order and return the total valuation."""
    netlist.check()
    values = input_env(netlist, vector)
    for g in netlist.gates:
        values[g.output] = g.apply(values)
    return values


def input_vectors(k: int):
    """All k-bit vectors in ascending binary order, first input most significant."""
    return product((0, 1), repeat=k)


def truth_table(netlist: Netlist) -> list[tuple[tuple[int, ...], int]]:
    netlist.check()
    return [(vec, evaluate(netlist, vec)[netlist.output])
            for vec in input_vectors(len(netlist.primary_inputs))]
