"""Statement language: AST, parser, renderer and auxiliary inlining.

Grammar::

    statement := expr "=" expr
    expr      := term { ("+" | "-") term }
    term      := unary { ("*" | "/") unary }
    unary     := "-" unary | power
    power     := atom [ "^" unary ]
    atom      := NUMBER | IDENT | IDENT "(" expr { "," expr } ")" | "(" expr ")"
    IDENT     := letter { letter | digit | "_" } { "'" }
    NUMBER    := digit { digit } [ "." digit { digit } ]

Whitespace is insignificant and ``#`` starts a comment running to the end of
the line.  Numbers are stored as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .errors import CycleError, ParseError

__all__ = [
    "Number", "Symbol", "Negate", "BinaryOp", "Apply", "Expression",
    "Statement", "parse_statement", "parse_expression", "render",
    "inline_auxiliaries", "free_symbols", "applied_functions", "walk",
    "IDENT_RE",
]

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*'*")
_NUMBER_RE = re.compile(r"[0-9]+(?:\.[0-9]+)?")
_PUNCT = "+-*/^(),="

OPS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Number:
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Negate:
    operand: "Expression"


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Expression"
    right: "Expression"

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown operator {self.op!r}")


@dataclass(frozen=True)
class Apply:
    name: str
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("function application needs at least one argument")


Expression = Union[Number, Symbol, Negate, BinaryOp, Apply]


@dataclass(frozen=True)
class Statement:
    """An equation ``left = right``.  ``source`` does not take part in equality."""

    left: Expression
    right: Expression
    source: str = field(default="", compare=False, repr=False)

    relation = "="

    def sides(self) -> tuple:
        return (self.left, self.right)

    def __str__(self) -> str:
        return render(self)


# -- lexer -------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", a punctuation character, or "eof"
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
        elif ch == "#":
            j = source.find("\n", i)
            i = n if j < 0 else j
        elif ch in _PUNCT:
            tokens.append(_Token(ch, ch, i))
            i += 1
        elif ch.isascii() and ch.isdigit():
            m = _NUMBER_RE.match(source, i)
            end = m.end()
            if end < n and source[end] == ".":
                raise ParseError("malformed number: '.' must be followed by digits",
                                 source, end)
            tokens.append(_Token("num", m.group(), i))
            i = end
        elif ch.isascii() and ch.isalpha():
            m = IDENT_RE.match(source, i)
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
        else:
            raise ParseError(f"illegal character {ch!r}", source, i)
    tokens.append(_Token("eof", "", n))
    return tokens


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, self.source, tok.pos)

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {kind!r}, found {found}")
        return self.advance()

    def statement(self) -> Statement:
        if self.tok.kind == "eof":
            raise self.error("empty statement")
        left = self.expr()
        if self.tok.kind != "=":
            if self.tok.kind == "eof":
                raise self.error("missing relation '='")
            raise self.error(f"unexpected {self.tok.text!r}")
        self.advance()
        right = self.expr()
        if self.tok.kind == "=":
            raise self.error("a statement holds exactly one relation")
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return Statement(left, right, self.source)

    def lone_expr(self) -> Expression:
        if self.tok.kind == "eof":
            raise self.error("empty expression")
        node = self.expr()
        if self.tok.kind == "=":
            raise self.error("relation not allowed inside an expression")
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> Expression:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            node = BinaryOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            node = BinaryOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        if self.tok.kind == "-":
            self.advance()
            return Negate(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.tok.kind == "^":
            self.advance()
            return BinaryOp("^", base, self.unary())
        return base

    def atom(self) -> Expression:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Number(Fraction(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.tok.kind != "(":
                return Symbol(tok.text)
            self.advance()
            args = [self.expr()]
            while self.tok.kind == ",":
                self.advance()
                args.append(self.expr())
            self.expect(")")
            return Apply(tok.text, tuple(args))
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse_statement(source: str) -> Statement:
    """Parse ``source`` into a :class:`Statement`.

    >>> parse_statement("F = m*a").right
    BinaryOp(op='*', left=Symbol(name='m'), right=Symbol(name='a'))
    """
    return _Parser(source).statement()


def parse_expression(source: str) -> Expression:
    """Parse a bare expression (no relation), as used by auxiliary definitions."""
    return _Parser(source).lone_expr()


# -- rendering ---------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(node: Expression) -> int:
    if isinstance(node, BinaryOp):
        return _PREC[node.op]
    if isinstance(node, Negate):
        return _PREC["neg"]
    if isinstance(node, Number) and node.value < 0:
        return _PREC["neg"]
    return _PREC["atom"]


def _render_number(value: Fraction) -> str:
    sign = "-" if value < 0 else ""
    value = abs(value)
    den = value.denominator
    if den == 1:
        return f"{sign}{value.numerator}"
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"({sign}{value.numerator}/{value.denominator})"
    places = max(twos, fives)
    scaled = value.numerator * 10 ** places // value.denominator
    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _wrap(node: Expression, needed: bool) -> str:
    text = _render(node)
    return f"({text})" if needed else text


def _render(node: Expression) -> str:
    if isinstance(node, Number):
        return _render_number(node.value)
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Apply):
        return f"{node.name}(" + ", ".join(_render(a) for a in node.args) + ")"
    if isinstance(node, Negate):
        return "-" + _wrap(node.operand, _prec(node.operand) < _PREC["neg"])
    p = _PREC[node.op]
    if node.op == "^":
        # base must be an atom; the exponent is a unary
        left = _wrap(node.left, _prec(node.left) < _PREC["atom"])
        right = _wrap(node.right, _prec(node.right) < _PREC["neg"])
        return f"{left}^{right}"
    left = _wrap(node.left, _prec(node.left) < p)
    right = _wrap(node.right, _prec(node.right) <= p)
    sep = f" {node.op} " if p == 1 else node.op
    return f"{left}{sep}{right}"


def render(node: Expression | Statement) -> str:
    """Render with the minimum parentheses needed to re-parse to the same tree."""
    if isinstance(node, Statement):
        return f"{_render(node.left)} = {_render(node.right)}"
    return _render(node)


# -- traversal ---------------------------------------------------------------

def children(node: Expression) -> tuple:
    if isinstance(node, Negate):
        return (node.operand,)
    if isinstance(node, BinaryOp):
        return (node.left, node.right)
    if isinstance(node, Apply):
        return node.args
    return ()


def walk(node: Expression | Statement) -> Iterator[Expression]:
    """Pre-order iteration over every node."""
    stack = list(reversed(node.sides())) if isinstance(node, Statement) else [node]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(children(cur)))


def free_symbols(node: Expression | Statement) -> frozenset:
    """Distinct :class:`Symbol` names.  Function names are not included."""
    return frozenset(n.name for n in walk(node) if isinstance(n, Symbol))


def applied_functions(node: Expression | Statement) -> frozenset:
    return frozenset(n.name for n in walk(node) if isinstance(n, Apply))


def substitute(node: Expression, mapping: Mapping[str, Expression]) -> Expression:
    if isinstance(node, Symbol):
        return mapping.get(node.name, node)
    if isinstance(node, Number):
        return node
    if isinstance(node, Negate):
        return Negate(substitute(node.operand, mapping))
    if isinstance(node, BinaryOp):
        return BinaryOp(node.op, substitute(node.left, mapping),
                        substitute(node.right, mapping))
    return Apply(node.name, tuple(substitute(a, mapping) for a in node.args))


# -- auxiliaries -------------------------------------------------------------

def _parsed_aux(aux: Mapping[str, str | Expression]) -> dict:
    out = {}
    for name, definition in aux.items():
        if isinstance(definition, str):
            try:
                definition = parse_expression(definition)
            except ParseError as exc:
                raise ParseError(f"auxiliary {name!r}: {exc.message}",
                                 exc.source, exc.position) from None
        out[name] = definition
    return out


def find_cycle(graph: Mapping[str, frozenset]) -> list[str] | None:
    """Return one cycle as ``[a, b, ..., a]`` or None.  Deterministic order."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(graph, WHITE)
    for root in sorted(graph):
        if color[root] != WHITE:
            continue
        path = [root]
        iters = [iter(sorted(graph[root]))]
        color[root] = GREY
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                color[path.pop()] = BLACK
                iters.pop()
            elif nxt not in graph or color[nxt] == BLACK:
                continue
            elif color[nxt] == GREY:
                return path[path.index(nxt):] + [nxt]
            else:
                color[nxt] = GREY
                path.append(nxt)
                iters.append(iter(sorted(graph[nxt])))
    return None


def expand_auxiliaries(aux: Mapping[str, str | Expression]) -> dict:
    """Parse and fully expand an auxiliary map so no value mentions a key."""
    defs = _parsed_aux(aux)
    graph = {k: free_symbols(v) & defs.keys() for k, v in defs.items()}
    cycle = find_cycle(graph)
    if cycle is not None:
        raise CycleError(cycle)
    done: dict = {}

    def expand(name):
        if name not in done:
            deps = {d: expand(d) for d in sorted(graph[name])}
            done[name] = substitute(defs[name], deps)
        return done[name]

    for name in defs:
        expand(name)
    return done


def inline_auxiliaries(stmt: Statement,
                       aux: Mapping[str, str | Expression]) -> Statement:
    """Replace every auxiliary symbol by its recursively inlined definition.

    Raises :class:`CycleError` for mutually recursive definitions and
    :class:`ParseError` when a definition does not parse.
    """
    if not aux:
        return stmt
    expanded = expand_auxiliaries(aux)
    return Statement(substitute(stmt.left, expanded),
                     substitute(stmt.right, expanded), stmt.source)
