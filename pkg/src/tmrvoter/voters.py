"""The four built-in TMR majority voters (inputs X, Y, Z; output V)."""
from __future__ import annotations

from .errors import UsageError
from .netlist import And, Gate, GateKind, Netlist, Or, Var

VOTER_NAMES = ("classical", "kp", "bn", "proposed")

PRIMARY_INPUTS = ("X", "Y", "Z")


def _classical() -> Netlist:
    return Netlist("classical", PRIMARY_INPUTS, (
        Gate("N1", GateKind.AND, ("X", "Y")),
        Gate("N2", GateKind.AND, ("Y", "Z")),
        Gate("N3", GateKind.AND, ("X", "Z")),
        Gate("V", GateKind.OR, ("N1", "N2", "N3")),
    ), "V")


def _kp() -> Netlist:
    # Connectivity reconstructed so every fault-free and single-fault row of
    # the published KP table is reproduced; P=1 routes Z, P=0 routes X.
    return Netlist("kp", PRIMARY_INPUTS, (
        Gate("N1", GateKind.XOR, ("X", "Y")),
        Gate("N2", GateKind.XOR, ("Y", "Z")),
        Gate("N3", GateKind.INV, ("N2",)),
        Gate("P", GateKind.AND, ("N1", "N3")),
        Gate("V", GateKind.MUX2, ("P", "X", "Z")),
    ), "V")


def _bn() -> Netlist:
    return Netlist("bn", PRIMARY_INPUTS, (
        Gate("N", GateKind.XOR, ("X", "Y")),
        Gate("V", GateKind.MUX2, ("N", "Y", "Z")),
    ), "V")


def _proposed() -> Netlist:
    # The complex output gate stays a single EXPR so M remains the only fault site.
    x, y, z, m = Var("X"), Var("Y"), Var("Z"), Var("M")
    return Netlist("proposed", PRIMARY_INPUTS, (
        Gate("M", GateKind.OR, ("X", "Y")),
        Gate.expression("V", Or((And((m, z)), And((x, y)), And((y, z))))),
    ), "V")


_BUILDERS = {"classical": _classical, "kp": _kp, "bn": _bn, "proposed": _proposed}


def builtin(name: str) -> Netlist:
    """Return the named voter netlist. Raises UsageError for unknown names."""
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UsageError(
            f"unknown voter {name!r}; expected one of {', '.join(VOTER_NAMES)}") from None


def is_builtin(netlist: Netlist) -> bool:
    """True when ``netlist`` is structurally identical to the builtin of the same name."""
    return netlist.name in _BUILDERS and builtin(netlist.name) == netlist
