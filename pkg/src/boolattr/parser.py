"""Reader and writer for BoolNet-style network files.

A file is an optional ``targets, factors`` header followed by one
``name, expression`` line per gene.  Expressions use ``!``, ``&``, ``|``,
parentheses and the constants ``0``/``1``; ``#`` starts a comment.  Every
expression is converted to DNF on the way in.
"""

from __future__ import annotations

import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CapacityError, ParseError, SemanticError
from .model import (
    DEFAULT_TERM_CAP,
    BooleanNetwork,
    Dnf,
    conjoin_terms,
    disjoin_terms,
    dnf_from_keys,
    format_dnf,
)

IDENT, CONST, AND, OR, NOT, LPAREN, RPAREN, COMMA = (
    "ident", "const", "&", "|", "!", "(", ")", ",",
)
_SYMBOLS = {"&": AND, "|": OR, "!": NOT, "(": LPAREN, ")": RPAREN, ",": COMMA}
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        col = 0
        while col < len(line):
            ch = line[col]
            if ch == "#":
                break
            if ch.isspace():
                col += 1
                continue
            if ch in _SYMBOLS:
                tokens.append(Token(_SYMBOLS[ch], ch, lineno, col + 1))
                col += 1
                continue
            if ch in "01":
                tokens.append(Token(CONST, ch, lineno, col + 1))
                col += 1
                continue
            m = _NAME.match(line, col)
            if m:
                tokens.append(Token(IDENT, m.group(), lineno, col + 1))
                col = m.end()
                continue
            raise ParseError(f"illegal character {ch!r}", lineno, col + 1, ch)
    return tokens


# --------------------------------------------------------------------------
# expression trees


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    child: object


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


class _ExprParser:
    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        self.pos = 0
        self.open_parens: list[Token] = []

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def end_position(self):
        if not self.tokens:
            return 1, 1
        last = self.tokens[-1]
        return last.line, last.column + len(last.text)

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression")
        node = self.parse_or()
        tok = self.peek()
        if tok is not None:
            if tok.kind == RPAREN:
                raise ParseError("unbalanced parenthesis: unmatched ')'", tok.line, tok.column, tok.text)
            raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.column, tok.text)
        return node

    def parse_or(self):
        children = [self.parse_and()]
        while (tok := self.peek()) is not None and tok.kind == OR:
            self.take()
            children.append(self.parse_and())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def parse_and(self):
        children = [self.parse_unary()]
        while (tok := self.peek()) is not None and tok.kind == AND:
            self.take()
            children.append(self.parse_unary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def parse_unary(self):
        tok = self.peek()
        if tok is None:
            line, col = self.end_position()
            if self.open_parens:
                opener = self.open_parens[-1]
                raise ParseError(
                    f"unbalanced parenthesis: '(' at column {opener.column} is never closed",
                    line, col,
                )
            prev = self.tokens[self.pos - 1] if self.pos else None
            what = f" after {prev.text!r}" if prev is not None else ""
            raise ParseError(f"expected an operand{what}", line, col)
        if tok.kind == NOT:
            self.take()
            return Not(self.parse_unary())
        if tok.kind == LPAREN:
            self.take()
            self.open_parens.append(tok)
            node = self.parse_or()
            close = self.peek()
            if close is None or close.kind != RPAREN:
                if close is None:
                    line, col = self.end_position()
                    raise ParseError(
                        f"unbalanced parenthesis: '(' at column {tok.column} is never closed",
                        line, col,
                    )
                raise ParseError(f"expected ')' but found {close.text!r}", close.line, close.column, close.text)
            self.take()
            self.open_parens.pop()
            return node
        if tok.kind == IDENT:
            self.take()
            return Var(tok.text, tok.line, tok.column)
        if tok.kind == CONST:
            self.take()
            return Const(tok.text == "1")
        raise ParseError(f"expected an operand, found {tok.text!r}", tok.line, tok.column, tok.text)


def parse_expression(tokens) -> object:
    """Parse a token list (or a string) into an expression tree.

    Precedence is ``!`` over ``&`` over ``|``; chains become one n-ary node.
    """
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    return _ExprParser(tokens).parse()


def variables(expr) -> list[str]:
    """Variable names in left-to-right order of first occurrence."""
    out: dict[str, None] = {}

    def walk(node):
        if isinstance(node, Var):
            out.setdefault(node.name)
        elif isinstance(node, Not):
            walk(node.child)
        elif isinstance(node, (And, Or)):
            for c in node.children:
                walk(c)

    walk(expr)
    return list(out)


def eval_expression(expr, env: Mapping[str, bool]) -> bool:
    if isinstance(expr, Var):
        return bool(env[expr.name])
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Not):
        return not eval_expression(expr.child, env)
    if isinstance(expr, And):
        return all(eval_expression(c, env) for c in expr.children)
    if isinstance(expr, Or):
        return any(eval_expression(c, env) for c in expr.children)
    raise TypeError(f"not an expression node: {expr!r}")


def to_dnf(expr, genes, cap: int = DEFAULT_TERM_CAP) -> Dnf:
    """Convert an expression to DNF over ``genes`` (a name sequence or name->index map).

    Negations are pushed to the literals and conjunctions distributed over
    disjunctions.  Contradictory and duplicate terms are dropped.
    """
    if not isinstance(genes, Mapping):
        genes = {name: i for i, name in enumerate(genes)}

    def walk(node, negated):
        if isinstance(node, Var):
            if node.name not in genes:
                raise SemanticError(
                    f"undeclared variable {node.name!r}"
                    + (f" at line {node.line}, column {node.column}" if node.line else "")
                )
            return [frozenset({(genes[node.name], not negated)})]
        if isinstance(node, Const):
            return [frozenset()] if node.value != negated else []
        if isinstance(node, Not):
            return walk(node.child, not negated)
        if isinstance(node, (And, Or)):
            parts = [walk(c, negated) for c in node.children]
            if isinstance(node, And) != negated:
                acc = [frozenset()]
                for part in parts:
                    acc = conjoin_terms(acc, part, cap)
                return acc
            acc = disjoin_terms(*parts)
            if len(acc) > cap:
                raise CapacityError(f"DNF exceeds {cap} terms")
            return acc
        raise TypeError(f"not an expression node: {node!r}")

    return dnf_from_keys(walk(expr, False))


# --------------------------------------------------------------------------
# network files


@dataclass(frozen=True)
class Entry:
    target: str
    expr: object
    line: int
    column: int


@dataclass(frozen=True)
class NetworkFile:
    header: bool
    entries: tuple[Entry, ...]


def _is_header(line_tokens):
    return (
        len(line_tokens) == 3
        and line_tokens[0].kind == IDENT and line_tokens[0].text.lower() == "targets"
        and line_tokens[1].kind == COMMA
        and line_tokens[2].kind == IDENT and line_tokens[2].text.lower() == "factors"
    )


def parse_network_file(text: str) -> NetworkFile:
    by_line: dict[int, list[Token]] = {}
    for tok in tokenize(text):
        by_line.setdefault(tok.line, []).append(tok)
    header = False
    entries = []
    seen: dict[str, int] = {}
    for k, (lineno, toks) in enumerate(by_line.items()):
        if k == 0 and _is_header(toks):
            header = True
            continue
        target = toks[0]
        if target.kind != IDENT:
            raise ParseError("expected a gene name", lineno, target.column, target.text)
        if len(toks) < 2 or toks[1].kind != COMMA:
            col = toks[1].column if len(toks) > 1 else target.column + len(target.text)
            raise ParseError("expected ',' after the gene name", lineno, col,
                             toks[1].text if len(toks) > 1 else None)
        if target.text in seen:
            raise ParseError(
                f"duplicate target {target.text!r} (first defined on line {seen[target.text]})",
                lineno, target.column, target.text,
            )
        body = toks[2:]
        if not body:
            raise ParseError("missing expression", lineno, toks[1].column + 1)
        seen[target.text] = lineno
        entries.append(Entry(target.text, parse_expression(body), lineno, target.column))
    if not entries:
        raise ParseError("empty network file: no gene definitions")
    return NetworkFile(header, tuple(entries))


def network_from_file(nf: NetworkFile, name: str = "network", cap: int = DEFAULT_TERM_CAP) -> BooleanNetwork:
    names = [e.target for e in nf.entries]
    known = set(names)
    for e in nf.entries:
        for v in variables(e.expr):
            if v not in known:
                known.add(v)
                names.append(v)
    index = {g: i for i, g in enumerate(names)}
    functions = [to_dnf(e.expr, index, cap) for e in nf.entries]
    return BooleanNetwork.build(names, functions, name=name)


def parse_network(text: str, name: str = "network", cap: int = DEFAULT_TERM_CAP) -> BooleanNetwork:
    """Parse network-file text into a :class:`BooleanNetwork`.

    Gene order is the order of the target lines; names that are only referenced
    are appended after them and keep their value over time.
    """
    return network_from_file(parse_network_file(text), name=name, cap=cap)


def load_network(path, cap: int = DEFAULT_TERM_CAP) -> BooleanNetwork:
    path = Path(path)
    return parse_network(path.read_text(encoding="utf-8"), name=path.stem, cap=cap)


def format_network(net: BooleanNetwork) -> str:
    """Render a network in the file format; reparsing gives an equal network.

    Genes without a given function are written out as ``g, g`` so that gene
    order survives the round trip.
    """
    lines = ["targets, factors"]
    for name, f in zip(net.names, net.functions):
        lines.append(f"{name}, {format_dnf(f, net.names)}")
    return "\n".join(lines) + "\n"
