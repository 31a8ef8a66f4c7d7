from concurrent.futures import ThreadPoolExecutor
from functools import reduce
from itertools import product

import pytest

from tmrvoter import netlist as nl
from tmrvoter.errors import NetlistError, UsageError
from tmrvoter.netlist import And, Gate, GateKind, Netlist, Not, Or, Var, Xor
from tmrvoter.voters import builtin


def test_classical_validates():
    assert nl.validate(builtin("classical")) == []


def test_self_reference_is_reported():
    n = Netlist("bad", ("X", "Y"), (
        Gate("N1", GateKind.AND, ("N1", "X")),
        Gate("V", GateKind.OR, ("N1", "Y")),
    ), "V")
    reasons = [str(v) for v in nl.validate(n)]
    assert "self-reference/cycle at N1" in reasons


def test_multiple_drivers_reported():
    n = Netlist("bad", ("X", "Y"), (
        Gate("V", GateKind.AND, ("X", "Y")),
        Gate("V", GateKind.OR, ("X", "Y")),
    ), "V")
    assert "multiple drivers for V" in [str(v) for v in nl.validate(n)]


@pytest.mark.parametrize("gates, fragment", [
    ((Gate("V", GateKind.AND, ("X", "Q")),), "undefined net Q"),
    ((Gate("N", GateKind.AND, ("X", "M")), Gate("M", GateKind.INV, ("X",)),
      Gate("V", GateKind.OR, ("N", "M"))), "forward reference to M"),
    ((Gate("N", GateKind.INV, ("X",)),), "not driven"),
    ((Gate("V", GateKind.INV, ("X",)), Gate("N", GateKind.INV, ("V",))), "last gate"),
    ((Gate("X", GateKind.INV, ("Y",)), Gate("V", GateKind.INV, ("X",))), "multiple drivers for X"),
])
def test_other_violations(gates, fragment):
    n = Netlist("bad", ("X", "Y"), gates, "V")
    vs = nl.validate(n)
    assert any(fragment in str(v) for v in vs), vs
    with pytest.raises(NetlistError):
        nl.evaluate(n, (0, 0))


def test_bad_identifier_and_duplicate_input():
    n = Netlist("bad", ("X", "X", "1a"), (Gate("V", GateKind.INV, ("X",)),), "V")
    reasons = " ".join(str(v) for v in nl.validate(n))
    assert "duplicate primary input X" in reasons
    assert "invalid identifier '1a'" in reasons


@pytest.mark.parametrize("kind, n", [(GateKind.AND, 1), (GateKind.OR, 9), (GateKind.INV, 2), (GateKind.MUX2, 2)])
def test_arity_enforced_at_construction(kind, n):
    with pytest.raises(ValueError, match="requires"):
        Gate("V", kind, ("X",) * n)


def test_evaluate_classical():
    vals = nl.evaluate(builtin("classical"), (1, 1, 0))
    assert (vals["N1"], vals["N2"], vals["N3"], vals["V"]) == (1, 0, 0, 1)


def test_evaluate_kp():
    vals = nl.evaluate(builtin("kp"), (0, 1, 1))
    assert [vals[k] for k in ("N1", "N2", "N3", "P", "V")] == [1, 0, 1, 1, 1]


@pytest.mark.parametrize("name", ["classical", "kp", "bn", "proposed"])
def test_all_zero_input(name):
    assert nl.evaluate(builtin(name), (0, 0, 0))["V"] == 0


def test_evaluate_accepts_mapping_and_is_total():
    n = builtin("kp")
    vals = nl.evaluate(n, {"X": 1, "Y": 0, "Z": 1})
    assert set(vals) == {"X", "Y", "Z", "N1", "N2", "N3", "P", "V"}


@pytest.mark.parametrize("vec", [(0, 1), {"X": 0, "Y": 1}, (0, 1, 2)])
def test_evaluate_missing_or_bad_input(vec):
    with pytest.raises(UsageError):
        nl.evaluate(builtin("bn"), vec)


def test_truth_tables():
    assert [o for _, o in nl.truth_table(builtin("bn"))] == [0, 0, 0, 1, 0, 1, 1, 1]
    assert [o for _, o in nl.truth_table(builtin("proposed"))] == [0, 0, 0, 1, 0, 1, 1, 1]
    inv = Netlist("inv", ("X",), (Gate("V", GateKind.INV, ("X",)),), "V")
    assert nl.truth_table(inv) == [((0,), 1), ((1,), 0)]


def test_truth_table_order_is_ascending_binary():
    vecs = [v for v, _ in nl.truth_table(builtin("classical"))]
    assert vecs == sorted(vecs) and len(vecs) == 8


def test_internal_nodes():
    assert nl.internal_nodes(builtin("classical")) == ("N1", "N2", "N3")
    assert nl.internal_nodes(builtin("kp")) == ("N1", "N2", "N3", "P")
    assert nl.internal_nodes(builtin("bn")) == ("N",)


# Reference gate functions written independently of Gate.apply.
_REF = {
    GateKind.AND: lambda a: int(all(a)),
    GateKind.OR: lambda a: int(any(a)),
    GateKind.NAND: lambda a: int(not all(a)),
    GateKind.NOR: lambda a: int(not any(a)),
    GateKind.XOR: lambda a: sum(a) % 2,
    GateKind.XNOR: lambda a: 1 - sum(a) % 2,
}


@pytest.mark.parametrize("kind", list(_REF))
@pytest.mark.parametrize("arity", [2, 3, 5, 8])
def test_nary_gate_semantics(kind, arity):
    names = tuple(f"I{i}" for i in range(arity))
    g = Gate("O", kind, names)
    for bits in product((0, 1), repeat=arity):
        assert g.apply(dict(zip(names, bits))) == _REF[kind](bits)


def test_inv_and_mux_semantics():
    inv = Gate("O", GateKind.INV, ("A",))
    assert [inv.apply({"A": a}) for a in (0, 1)] == [1, 0]
    mux = Gate("O", GateKind.MUX2, ("S", "A", "B"))
    for s, a, b in product((0, 1), repeat=3):
        assert mux.apply({"S": s, "A": a, "B": b}) == (b if s else a)


def test_expr_semantics():
    e = Or((And((Var("A"), Not(Var("B")))), Xor((Var("B"), Var("C"), Var("A")))))
    g = Gate.expression("O", e)
    assert g.inputs == ("A", "B", "C")
    for a, b, c in product((0, 1), repeat=3):
        want = int((a and not b) or ((a + b + c) % 2 == 1))
        assert g.apply({"A": a, "B": b, "C": c}) == want


def test_xor_fold_is_left_associative_parity():
    names = ("A", "B", "C")
    g = Gate("O", GateKind.XOR, names)
    for bits in product((0, 1), repeat=3):
        assert g.apply(dict(zip(names, bits))) == reduce(lambda x, y: x ^ y, bits)


def test_evaluate_is_pure_across_threads():
    n = builtin("kp")
    ref = [nl.evaluate(n, v) for v in product((0, 1), repeat=3)]
    with ThreadPoolExecutor(8) as pool:
        for _ in range(5):
            got = list(pool.map(lambda v: nl.evaluate(n, v), product((0, 1), repeat=3)))
            assert got == ref
