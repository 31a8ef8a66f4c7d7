"""The ``.voter`` text format.

A file holds one voter::

    # classical majority voter
    voter "classical" {
    inputs X, Y, Z;
    node N1 = AND(X, Y);
    node N2 = AND(Y, Z);
    node N3 = AND(X, Z);
    output V = OR(N1, N2, N3);
    }

Gates are ``INV|NOT|AND|OR|NAND|NOR|XOR|XNOR(args)``, ``MUX(sel; a, b)``
(sel=0 routes ``a``) and ``EXPR(bexpr)`` where ``bexpr`` uses ``~``, ``&``,
``^``, ``|`` in that order of precedence. Keywords are case-insensitive,
identifiers are not. Nets must be declared before use and ``output`` must be
the last declaration.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import TmrError, UsageError
from .netlist import And, Expr, Gate, GateKind, Netlist, Not, Or, Var, Xor

ERROR_KINDS = ("syntax", "undefined-net", "duplicate-net", "forward-reference",
               "arity", "no-output", "multiple-output")

_SIMPLE_KINDS = {
    "INV": GateKind.INV, "NOT": GateKind.INV, "AND": GateKind.AND, "OR": GateKind.OR,
    "NAND": GateKind.NAND, "NOR": GateKind.NOR, "XOR": GateKind.XOR, "XNOR": GateKind.XNOR,
}


class ParseError(TmrError):
    def __init__(self, line: int, column: int, kind: str, message: str):
        assert kind in ERROR_KINDS
        self.line, self.column, self.kind, self.message = line, column, kind, message
        super().__init__(f"{line}:{column}: {kind}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "string", "punct", "eof"
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<punct>[{}();,=&|^~])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            if text[pos] == '"':
                raise ParseError(line, col, "syntax", "unterminated string")
            raise ParseError(line, col, "syntax", f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind in ("ident", "string", "punct"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.defined: set[str] = set()
        # every name that appears on the left of a declaration, for telling a
        # forward reference apart from a net that never exists
        self.declared = {
            b.text for a, b in zip(self.toks, self.toks[1:])
            if a.kind == "ident" and a.text.lower() in ("node", "output") and b.kind == "ident"
        }

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, kind, message, tok=None):
        tok = tok or self.tok
        raise ParseError(tok.line, tok.column, kind, message)

    def _describe(self, tok):
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def is_kw(self, word) -> bool:
        return self.tok.kind == "ident" and self.tok.text.lower() == word

    def keyword(self, word) -> Token:
        if not self.is_kw(word):
            self.fail("syntax", f"expected '{word}', found {self._describe(self.tok)}")
        return self.advance()

    def punct(self, ch) -> Token:
        if self.tok.kind != "punct" or self.tok.text != ch:
            self.fail("syntax", f"expected '{ch}', found {self._describe(self.tok)}")
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail("syntax", f"expected identifier, found {self._describe(self.tok)}")
        return self.advance()

    def use(self) -> str:
        """Consume a reference to an existing net."""
        t = self.ident()
        if t.text not in self.defined:
            if t.text in self.declared:
                self.fail("forward-reference", f"{t.text} is used before it is defined", t)
            self.fail("undefined-net", f"undefined net {t.text}", t)
        return t.text

    def define(self) -> Token:
        t = self.ident()
        if t.text in self.defined:
            self.fail("duplicate-net", f"net {t.text} is already defined", t)
        return t

    # -- grammar
    def voter(self) -> Netlist:
        self.keyword("voter")
        if self.tok.kind != "string":
            self.fail("syntax", f"expected voter name string, found {self._describe(self.tok)}")
        name = self.advance().text[1:-1]
        self.punct("{")
        self.keyword("inputs")
        inputs = [self.define().text]
        self.defined.add(inputs[0])
        while self.tok.text == ",":
            self.advance()
            inputs.append(self.define().text)
            self.defined.add(inputs[-1])
        self.punct(";")
        gates, output = [], None
        while True:
            if self.is_kw("node") or self.is_kw("output"):
                kw = self.advance()
                if output is not None:
                    if kw.text.lower() == "output":
                        self.fail("multiple-output", "only one output declaration is allowed", kw)
                    self.fail("syntax", "output must be the last declaration", kw)
                target = self.define()
                self.punct("=")
                gate = self.gate(target.text)
                self.punct(";")
                self.defined.add(target.text)
                gates.append(gate)
                if kw.text.lower() == "output":
                    output = target.text
            elif self.tok.text == "}" and self.tok.kind == "punct":
                if output is None:
                    self.fail("no-output", "voter has no output declaration")
                self.advance()
                break
            else:
                self.fail("syntax", f"expected 'node', 'output' or '}}', found {self._describe(self.tok)}")
        if self.tok.kind != "eof":
            self.fail("syntax", f"unexpected {self._describe(self.tok)} after voter body")
        return Netlist(name, tuple(inputs), tuple(gates), output)

    def gate(self, target: str) -> Gate:
        kw = self.ident()
        word = kw.text.upper()
        self.punct("(")
        if word in ("MUX", "MUX2"):
            sel = self.use()
            self.punct(";")
            a = self.use()
            self.punct(",")
            b = self.use()
            self.punct(")")
            return Gate(target, GateKind.MUX2, (sel, a, b))
        if word == "EXPR":
            expr = self.bexpr()
            self.punct(")")
            return Gate.expression(target, expr)
        if word not in _SIMPLE_KINDS:
            self.fail("syntax", f"unknown gate kind {kw.text!r}", kw)
        kind = _SIMPLE_KINDS[word]
        args = [self.use()]
        while self.tok.text == ",":
            self.advance()
            args.append(self.use())
        self.punct(")")
        lo, hi = kind.arity
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo}..{hi}"
            self.fail("arity", f"{word} requires {want} inputs", kw)
        return Gate(target, kind, tuple(args))

    def _chain(self, op, cls, sub):
        first = sub()
        args = [first]
        while self.tok.kind == "punct" and self.tok.text == op:
            self.advance()
            args.append(sub())
        return args[0] if len(args) == 1 else cls(tuple(args))

    def bexpr(self) -> Expr:
        return self._chain("|", Or, self._xor)

    def _xor(self):
        return self._chain("^", Xor, self._and)

    def _and(self):
        return self._chain("&", And, self._unary)

    def _unary(self):
        if self.tok.text == "~" and self.tok.kind == "punct":
            self.advance()
            return Not(self._unary())
        if self.tok.text == "(" and self.tok.kind == "punct":
            self.advance()
            e = self.bexpr()
            self.punct(")")
            return e
        return Var(self.use())


def parse(text: str) -> Netlist:
    """Parse ``.voter`` source into a validated Netlist; raises ParseError."""
    p = _Parser(text)
    netlist = p.voter()
    if netlist.violations:
        v = netlist.violations[0]
        raise ParseError(1, 1, "syntax", str(v))
    return netlist


# -- serialization ----------------------------------------------------------

_PREC = {Or: 1, Xor: 2, And: 3, Not: 4, Var: 5}
_OP = {Or: " | ", Xor: " ^ ", And: " & "}


def render_expr(e: Expr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Not):
        inner = render_expr(e.arg)
        return "~" + (f"({inner})" if _PREC[type(e.arg)] < _PREC[Not] else inner)
    p = _PREC[type(e)]
    # A nested operand of equal precedence keeps its parentheses so the tree
    # shape survives a round trip.
    parts = [f"({render_expr(a)})" if _PREC[type(a)] <= p else render_expr(a) for a in e.args]
    return _OP[type(e)].join(parts)


def _render_gate(g: Gate) -> str:
    if g.kind is GateKind.MUX2:
        sel, a, b = g.inputs
        return f"MUX({sel}; {a}, {b})"
    if g.kind is GateKind.EXPR:
        return f"EXPR({render_expr(g.expr)})"
    return f"{g.kind.value}({', '.join(g.inputs)})"


def serialize(netlist: Netlist) -> str:
    netlist.check()
    if '"' in netlist.name or "\n" in netlist.name:
        raise UsageError(f"voter name {netlist.name!r} cannot be written as a string literal")
    lines = [f'voter "{netlist.name}" {{', f"inputs {', '.join(netlist.primary_inputs)};"]
    for g in netlist.gates:
        kw = "output" if g.output == netlist.output else "node"
        lines.append(f"{kw} {g.output} = {_render_gate(g)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load(path) -> Netlist:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


__all__ = ["ParseError", "parse", "serialize", "load", "tokenize", "render_expr"]
