"""Expression trees and the text grammar for classical and quantum formulas.

Classical grammar: generators ``h``, ``ep``, ``em``; Poisson brackets
``{f, g}``; parentheses group.  Quantum grammar: generators ``H``, ``Ep``,
``Em``, ``I``; commutators ``[a, b]``; ``(a, b)`` is the symmetrised
product while ``(a)`` just groups.  Both accept integer literals, the
imaginary unit ``i``, the parameters ``alpha beta gamma C c s`` and the
operators ``+ - * / ^`` (``^`` binds tightest, does not chain, and takes
a non-negative integer literal exponent; ``/`` only divides by a constant).

Parsing is precedence climbing over a hand-written tokenizer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .exactnum import PARAMETERS

__all__ = [
    "Num",
    "Sym",
    "Neg",
    "BinOp",
    "Pow",
    "Bracket",
    "ParseError",
    "parse",
    "unparse",
    "CLASSICAL_GENERATORS",
    "QUANTUM_GENERATORS",
]

CLASSICAL_GENERATORS = ("h", "ep", "em")
QUANTUM_GENERATORS = ("H", "Ep", "Em", "I")
SCALAR_SYMBOLS = PARAMETERS + ("i",)


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Bracket:
    """``poisson`` ({,}), ``commutator`` ([,]) or ``sym`` ((,))."""

    kind: str
    left: object
    right: object


class ParseError(ValueError):
    def __init__(self, message, text, pos, expected=()):
        self.text = text
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at line {self.line}, column {self.column}{detail}")


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(){}[],":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


_BINARY = {"+": 1, "-": 1, "*": 2, "/": 2}


class _Parser:
    def __init__(self, text, grammar):
        if grammar not in ("classical", "quantum"):
            raise ValueError(f"unknown grammar {grammar!r}")
        self.text = text
        self.grammar = grammar
        self.tokens = _tokenize(text)
        self.k = 0
        gens = CLASSICAL_GENERATORS if grammar == "classical" else QUANTUM_GENERATORS
        self.names = set(gens) | set(SCALAR_SYMBOLS)

    def peek(self):
        return self.tokens[self.k]

    def advance(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def fail(self, message, expected=()):
        tok = self.peek()
        raise ParseError(message, self.text, tok[2], expected)

    def expect(self, ch):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == ch:
            return self.advance()
        got = "end of input" if tok[0] == "end" else repr(tok[1])
        self.fail(f"expected {ch!r}, got {got}", [ch])

    def parse(self):
        node = self.expression(0)
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}", ["+", "-", "*", "/", "^", "end of input"])
        return node

    def expression(self, min_prec):
        left = self.unary()
        while True:
            tok = self.peek()
            prec = _BINARY.get(tok[1]) if tok[0] == "op" else None
            if prec is None or prec < min_prec:
                return left
            self.advance()
            right = self.expression(prec + 1)
            left = BinOp(tok[1], left, right)

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.advance()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.advance()
            nxt = self.peek()
            if nxt[0] == "num":
                self.advance()
                return Pow(base, int(nxt[1]))
            if nxt[0] == "op" and nxt[1] == "(":
                # parenthesised integer exponent, e.g. h^(2)
                self.advance()
                num = self.peek()
                if num[0] != "num":
                    self.fail("exponent must be a non-negative integer", ["integer"])
                self.advance()
                self.expect(")")
                return Pow(base, int(num[1]))
            self.fail("exponent must be a non-negative integer", ["integer"])
        return base

    def atom(self):
        tok = self.peek()
        kind, val, _ = tok
        if kind == "num":
            self.advance()
            return Num(int(val))
        if kind == "name":
            if val not in self.names:
                self.fail(f"unknown symbol {val!r} in {self.grammar} grammar", sorted(self.names))
            self.advance()
            return Sym(val)
        if kind == "op" and val == "(":
            self.advance()
            first = self.expression(0)
            if self.grammar == "quantum" and self.peek()[1] == ",":
                self.advance()
                second = self.expression(0)
                self.expect(")")
                return Bracket("sym", first, second)
            self.expect(")")
            return first
        if kind == "op" and val == "{" and self.grammar == "classical":
            return self._bracket("{", "}", "poisson")
        if kind == "op" and val == "[" and self.grammar == "quantum":
            return self._bracket("[", "]", "commutator")
        opener = ["(", "{"] if self.grammar == "classical" else ["(", "["]
        what = "end of input" if kind == "end" else repr(val)
        self.fail(f"unexpected {what}", ["integer", "symbol"] + opener)

    def _bracket(self, open_, close, kind):
        self.expect(open_)
        first = self.expression(0)
        self.expect(",")
        second = self.expression(0)
        self.expect(close)
        return Bracket(kind, first, second)


def parse(text, grammar="classical"):
    """Parse ``text`` in the ``classical`` or ``quantum`` grammar."""
    return _Parser(text, grammar).parse()


_CLOSERS = {"poisson": ("{", "}"), "commutator": ("[", "]"), "sym": ("(", ")")}


def unparse(node):
    """Print a tree so that parsing the output yields an equal tree."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Neg):
        return f"-{_wrap(node.operand, 3)}"
    if isinstance(node, Pow):
        return f"{_wrap(node.base, 5)}^{node.exponent}"
    if isinstance(node, BinOp):
        prec = _BINARY[node.op]
        left = _wrap(node.left, prec)
        right = _wrap(node.right, prec + 1)
        return f"{left} {node.op} {right}" if prec == 1 else f"{left}{node.op}{right}"
    if isinstance(node, Bracket):
        o, c = _CLOSERS[node.kind]
        return f"{o}{unparse(node.left)}, {unparse(node.right)}{c}"
    raise TypeError(f"not an expression node: {node!r}")


def _prec(node):
    if isinstance(node, BinOp):
        return _BINARY[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _wrap(node, need):
    s = unparse(node)
    # a leading minus inside a product or power must stay grouped
    if _prec(node) < need or (need >= 2 and isinstance(node, Neg)):
        return f"({s})"
    return s
