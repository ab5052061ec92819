"""Prefix-notation integer expressions.

Conditions, assignment values and call arguments in definition files are
written as s-expressions, e.g. ``(< (at a j) p)``. The language is small on
purpose: integer constants, variable references, array indexing, the six
comparison operators and binary + / -. That is enough to express the sorting
algorithms this engine targets while keeping evaluation total and
deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .errors import DefinitionSyntaxError, EvaluationError

COMPARE_OPS = ("<", "<=", ">", ">=", "=", "!=")
ARITH_OPS = ("+", "-")

# unicode spellings accepted on input; canonical form is ASCII
_OP_ALIASES = {"≤": "<=", "≥": ">=", "≠": "!=", "=<": "<=", "=>": ">="}

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_INT_RE = re.compile(r"^-?\d+$")


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Index:
    array: str
    index: "Expr"


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Arith:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Index, Compare, Arith]


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_expression(text: str) -> Expr:
    """Parse the prefix notation into an expression tree.

    Raises DefinitionSyntaxError on malformed input; the column refers to the
    offending token index within the expression string.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise DefinitionSyntaxError("empty expression")
    pos = 0

    def fail(message: str):
        raise DefinitionSyntaxError(f"{message} in expression {text!r}", column=pos)

    def read() -> Expr:
        nonlocal pos
        if pos >= len(tokens):
            fail("unexpected end")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            fail("unexpected ')'")
        if tok != "(":
            return _atom(tok, fail)
        if pos >= len(tokens):
            fail("unexpected end after '('")
        head = tokens[pos]
        pos += 1
        head = _OP_ALIASES.get(head, head)
        if head == "at":
            arr = tokens[pos] if pos < len(tokens) else None
            pos += 1
            if arr is None or not _IDENT_RE.match(arr):
                fail("'at' expects an array name")
            node: Expr = Index(arr, read())
        elif head in COMPARE_OPS:
            node = Compare(head, read(), read())
        elif head in ARITH_OPS:
            node = Arith(head, read(), read())
        else:
            fail(f"unknown operator {head!r}")
        if pos >= len(tokens) or tokens[pos] != ")":
            fail("expected ')'")
        pos += 1
        return node

    expr = read()
    if pos != len(tokens):
        fail("trailing tokens")
    return expr


def _atom(tok: str, fail) -> Expr:
    if _INT_RE.match(tok):
        return Const(int(tok))
    if _IDENT_RE.match(tok):
        return Var(tok)
    fail(f"bad token {tok!r}")


def to_prefix(expr: Expr) -> str:
    """Canonical prefix rendering; parse_expression(to_prefix(e)) == e."""
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Index):
        return f"(at {expr.array} {to_prefix(expr.index)})"
    return f"({expr.op} {to_prefix(expr.left)} {to_prefix(expr.right)})"


def to_infix(expr: Expr) -> str:
    """Readable rendering used in labels and pseudocode listings."""
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Index):
        return f"{expr.array}[{to_infix(expr.index)}]"
    left, right = expr.left, expr.right
    ls = f"({to_infix(left)})" if isinstance(left, (Compare, Arith)) else to_infix(left)
    rs = f"({to_infix(right)})" if isinstance(right, (Compare, Arith)) else to_infix(right)
    return f"{ls} {expr.op} {rs}"


def variables(expr: Expr) -> set[str]:
    """Names referenced by the expression, array names included."""
    if isinstance(expr, Const):
        return set()
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, Index):
        return {expr.array} | variables(expr.index)
    return variables(expr.left) | variables(expr.right)


def evaluate(
    expr: Expr,
    bindings: Mapping[str, int],
    arrays: Mapping[str, Sequence[int]],
) -> int | bool:
    """Evaluate over integers. Unbound names and bad indices raise EvaluationError."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        if expr.name not in bindings:
            raise EvaluationError(f"unbound variable {expr.name!r}")
        return bindings[expr.name]
    if isinstance(expr, Index):
        if expr.array not in arrays:
            raise EvaluationError(f"unknown array {expr.array!r}")
        arr = arrays[expr.array]
        i = as_int(evaluate(expr.index, bindings, arrays))
        if not 0 <= i < len(arr):
            raise EvaluationError(f"index {i} out of bounds for {expr.array!r} (length {len(arr)})")
        return arr[i]
    left = as_int(evaluate(expr.left, bindings, arrays))
    right = as_int(evaluate(expr.right, bindings, arrays))
    if isinstance(expr, Arith):
        return left + right if expr.op == "+" else left - right
    if expr.op == "<":
        return left < right
    if expr.op == "<=":
        return left <= right
    if expr.op == ">":
        return left > right
    if expr.op == ">=":
        return left >= right
    if expr.op == "=":
        return left == right
    return left != right


def as_int(value: int | bool) -> int:
    if isinstance(value, bool):
        raise EvaluationError("comparison used where an integer is required")
    return value
