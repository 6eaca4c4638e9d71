"""Parser for per-index summand expressions defining candidate measures.

Grammar::

    source := 'affine' '(' signed ',' signed ',' body ')' | body
    body   := 'sum' '(' expr ')' | expr
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?
    unary  := '-'? atom
    atom   := number | 'p' | 'r' | 'q' | func '(' args ')' | '(' expr ')'
    func   := 'log' | 'exp' | 'lnq' | 'pow'

'^' is right-associative; pow takes two arguments, the others one. The
affine wrapper means a * sum + b.
"""

import re
from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple, Union

from measures.errors import InfoMeasureError

VARIABLES = ("p", "r", "q")
FUNCTIONS = {"log": 1, "exp": 1, "lnq": 1, "pow": 2}
MAX_DEPTH = 100

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class SourceSpan:
    """Offsets [start, end) into the source string."""
    start: int
    end: int

    def cover(self, other: "SourceSpan") -> "SourceSpan":
        return SourceSpan(min(self.start, other.start), max(self.end, other.end))


def render_span(source: str, span: SourceSpan) -> str:
    """The source line with a caret under the span."""
    width = max(1, span.end - span.start)
    return f"{source}\n{' ' * span.start}{'^' * width}"


class DslSyntaxError(InfoMeasureError):
    """Malformed expression source."""

    def __init__(self, message: str, source: str, span: SourceSpan, expected: FrozenSet[str] = frozenset()):
        super().__init__(message)
        self.source = source
        self.span = span
        self.expected = frozenset(expected)

    def render(self) -> str:
        detail = str(self)
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        return f"{detail} at offset {self.span.start}\n{render_span(self.source, self.span)}"


class DslValidationError(InfoMeasureError):
    """A well-formed expression used where its variables are not available."""

    def __init__(self, message: str, source: str, span: SourceSpan):
        super().__init__(message)
        self.source = source
        self.span = span

    def render(self) -> str:
        return f"{self} at offset {self.span.start}\n{render_span(self.source, self.span)}"


@dataclass(frozen=True)
class Number:
    value: float
    span: SourceSpan


@dataclass(frozen=True)
class Variable:
    name: str
    span: SourceSpan


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Node"
    span: SourceSpan


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Node"
    right: "Node"
    span: SourceSpan


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Node", ...]
    span: SourceSpan


Node = Union[Number, Variable, UnaryOp, BinaryOp, Call]


def walk(node: Node):
    """Yield the node and all of its descendants, depth first."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        if isinstance(current, UnaryOp):
            stack.append(current.operand)
        elif isinstance(current, BinaryOp):
            stack.extend((current.right, current.left))
        elif isinstance(current, Call):
            stack.extend(reversed(current.args))


@dataclass(frozen=True)
class MeasureExpression:
    """A parsed summand with its affine wrapper: value = scale * sum + offset."""
    ast: Node
    source: str
    scale: float = 1.0
    offset: float = 0.0

    def references(self, name: str) -> Optional[SourceSpan]:
        """Span of the first use of a variable (or of lnq for 'q'), if any."""
        for node in walk(self.ast):
            if isinstance(node, Variable) and node.name == name:
                return node.span
            if name == "q" and isinstance(node, Call) and node.name == "lnq":
                return node.span
        return None

    @property
    def uses_r(self) -> bool:
        return self.references("r") is not None

    @property
    def uses_q(self) -> bool:
        return self.references("q") is not None


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise DslSyntaxError(f"unexpected character {source[pos]!r}", source, SourceSpan(pos, pos + 1))
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), SourceSpan(pos, match.end())))
        pos = match.end()
    tokens.append(Token("end", "", SourceSpan(len(source), len(source))))
    return tokens


class Parser:
    """Recursive descent over the token list, one method per grammar rule."""

    ATOM_START = frozenset({"number", "p", "r", "q", "(", *FUNCTIONS})

    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.index = 0
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        if token.kind != "end":
            self.index += 1
        return token

    def _fail(self, expected, message: Optional[str] = None):
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise DslSyntaxError(message or f"unexpected {found}", self.source, token.span, frozenset(expected))

    def _is_op(self, text: str) -> bool:
        return self.current.kind == "op" and self.current.text == text

    def _expect_op(self, text: str) -> Token:
        if not self._is_op(text):
            self._fail({text})
        return self._advance()

    def _descend(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise DslSyntaxError(f"expression nested deeper than {MAX_DEPTH} levels",
                                 self.source, self.current.span)

    def parse(self) -> MeasureExpression:
        token = self.current
        if token.kind == "name" and token.text == "affine":
            self._advance()
            self._expect_op("(")
            scale = self._signed_number()
            self._expect_op(",")
            offset = self._signed_number()
            self._expect_op(",")
            body = self._body()
            self._expect_op(")")
        else:
            scale, offset = 1.0, 0.0
            body = self._body()
        if self.current.kind != "end":
            self._fail({"end of input"})
        return MeasureExpression(ast=body, source=self.source, scale=scale, offset=offset)

    def _signed_number(self) -> float:
        negative = False
        if self._is_op("-") or self._is_op("+"):
            negative = self._advance().text == "-"
        if self.current.kind != "number":
            self._fail({"number"})
        value = float(self._advance().text)
        return -value if negative else value

    def _body(self) -> Node:
        token = self.current
        if token.kind == "name" and token.text == "sum":
            self._advance()
            self._expect_op("(")
            node = self._expr()
            self._expect_op(")")
            return node
        return self._expr()

    def _expr(self) -> Node:
        self._descend()
        node = self._term()
        while self._is_op("+") or self._is_op("-"):
            op = self._advance().text
            right = self._term()
            node = BinaryOp(op, node, right, node.span.cover(right.span))
        self.depth -= 1
        return node

    def _term(self) -> Node:
        node = self._factor()
        while self._is_op("*") or self._is_op("/"):
            op = self._advance().text
            right = self._factor()
            node = BinaryOp(op, node, right, node.span.cover(right.span))
        return node

    def _factor(self) -> Node:
        self._descend()
        node = self._unary()
        if self._is_op("^"):
            self._advance()
            right = self._factor()
            node = BinaryOp("^", node, right, node.span.cover(right.span))
        self.depth -= 1
        return node

    def _unary(self) -> Node:
        if self._is_op("-"):
            start = self._advance().span
            operand = self._atom()
            return UnaryOp("-", operand, start.cover(operand.span))
        return self._atom()

    def _atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Number(float(token.text), token.span)
        if token.kind == "name":
            if token.text in VARIABLES:
                self._advance()
                return Variable(token.text, token.span)
            if token.text in FUNCTIONS:
                return self._call()
            raise DslSyntaxError(f"unknown name {token.text!r}", self.source, token.span, self.ATOM_START)
        if self._is_op("("):
            self._advance()
            node = self._expr()
            self._expect_op(")")
            return node
        self._fail(self.ATOM_START)

    def _call(self) -> Node:
        name_token = self._advance()
        arity = FUNCTIONS[name_token.text]
        self._expect_op("(")
        args = [self._expr()]
        while len(args) < arity:
            self._expect_op(",")
            args.append(self._expr())
        end = self._expect_op(")")
        return Call(name_token.text, tuple(args), name_token.span.cover(end.span))


def parse(source: str) -> MeasureExpression:
    """Parse a summand expression; raises DslSyntaxError with a span on bad input."""
    return Parser(source).parse()
