"""Annotated-pseudocode definitions: parsing, validation, serialization.

A definition file is a JSON document with top-level fields ``name``,
``params``, ``input``, ``statements[]`` and optional ``goal``, ``guard``,
``postcondition``. Each statement object has ``id``, ``kind`` and
kind-specific fields; see README for the full grammar. The shipped
``quicksort`` definition is the normative example.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import expressions as ex
from .errors import DefinitionSyntaxError, ValidationError

STATEMENT_KINDS = (
    "loop",
    "conditional",
    "assignment",
    "swap",
    "call",
    "recursion",
    "return",
    "noop",
)
HIERARCHY_KINDS = ("loop", "conditional", "recursion")
# statements that write visible state: array elements and the named
# bookkeeping variables (pivot, storeIndex, ...). Loop counters are owned by
# the loop statement itself and never show up as assignments.
STATE_CHANGING_KINDS = ("assignment", "swap")

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_STATEMENT_FIELDS = {
    "id", "kind", "goal", "source", "stateChanging", "condition", "children",
    "target", "value", "left", "right", "iterator", "from", "to", "args",
}
_TOP_FIELDS = {"name", "goal", "params", "input", "guard", "postcondition", "statements"}


@dataclass(frozen=True)
class Statement:
    id: str
    kind: str
    goal: str = ""
    source_text: str = ""
    state_changing: bool = False
    condition: ex.Expr | None = None
    children: tuple["Statement", ...] = ()
    # assignment
    target: str | None = None
    value: ex.Expr | None = None
    # swap (lvalues: Var or Index)
    left: ex.Expr | None = None
    right: ex.Expr | None = None
    # loop
    iterator: str | None = None
    from_expr: ex.Expr | None = None
    to_expr: ex.Expr | None = None
    # recursion / call
    call_target: str | None = None
    args: tuple[tuple[str, ex.Expr], ...] = ()


@dataclass(frozen=True)
class InputSpec:
    kind: str
    name: str
    entry: tuple[tuple[str, ex.Expr], ...] = ()


@dataclass(frozen=True)
class AlgorithmDef:
    name: str
    params: tuple[str, ...]
    input: InputSpec
    statements: tuple[Statement, ...]
    goal: str = ""
    guard: ex.Expr | None = None
    postcondition: str | None = None


@dataclass(frozen=True)
class Diagnostic:
    statement_id: str | None
    message: str

    def __str__(self) -> str:
        where = self.statement_id or "<definition>"
        return f"{where}: {self.message}"


def derived_state_changing(kind: str) -> bool:
    return kind in STATE_CHANGING_KINDS


def parse_algorithm(source: str | dict) -> AlgorithmDef:
    """Parse and validate a definition document.

    Raises DefinitionSyntaxError for malformed documents and ValidationError
    (carrying the full diagnostic list) when the parsed definition breaks an
    invariant.
    """
    if isinstance(source, str):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as err:
            raise DefinitionSyntaxError(err.msg, line=err.lineno, column=err.colno) from err
    else:
        doc = source
    algo = _def_from_doc(doc)
    diagnostics = validate(algo)
    if diagnostics:
        raise ValidationError(diagnostics)
    return algo


def load_algorithm(path: str | Path) -> AlgorithmDef:
    return parse_algorithm(Path(path).read_text())


def _def_from_doc(doc) -> AlgorithmDef:
    if not isinstance(doc, dict):
        raise DefinitionSyntaxError("definition document must be an object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise DefinitionSyntaxError(f"unknown top-level fields: {sorted(unknown)}")
    for key in ("name", "input", "statements"):
        if key not in doc:
            raise DefinitionSyntaxError(f"missing top-level field {key!r}")
    name = doc["name"]
    if not isinstance(name, str) or not _IDENT_RE.match(name):
        raise DefinitionSyntaxError("name must be an identifier")
    params = doc.get("params", [])
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise DefinitionSyntaxError("params must be a list of identifiers")
    inp = doc["input"]
    if not isinstance(inp, dict) or "kind" not in inp or "name" not in inp:
        raise DefinitionSyntaxError("input must be an object with kind and name")
    entry = tuple(
        (k, _parse_expr(v, f"input.entry.{k}")) for k, v in inp.get("entry", {}).items()
    )
    guard = _parse_expr(doc["guard"], "guard") if doc.get("guard") else None
    statements = tuple(_statement_from_doc(s) for s in doc["statements"])
    return AlgorithmDef(
        name=name,
        params=tuple(params),
        input=InputSpec(kind=inp["kind"], name=inp["name"], entry=entry),
        statements=statements,
        goal=doc.get("goal", ""),
        guard=guard,
        postcondition=doc.get("postcondition"),
    )


def _parse_expr(text, where: str) -> ex.Expr:
    if isinstance(text, int):
        return ex.Const(text)
    if not isinstance(text, str):
        raise DefinitionSyntaxError(f"{where}: expression must be a string")
    try:
        return ex.parse_expression(text)
    except DefinitionSyntaxError as err:
        raise DefinitionSyntaxError(f"{where}: {err}") from err


def _statement_from_doc(doc) -> Statement:
    if not isinstance(doc, dict):
        raise DefinitionSyntaxError("statement must be an object")
    unknown = set(doc) - _STATEMENT_FIELDS
    if unknown:
        raise DefinitionSyntaxError(f"statement has unknown fields: {sorted(unknown)}")
    sid = doc.get("id")
    kind = doc.get("kind")
    if not isinstance(sid, str):
        raise DefinitionSyntaxError("statement missing id")
    if kind not in STATEMENT_KINDS:
        raise DefinitionSyntaxError(f"statement {sid}: unknown kind {kind!r}")
    where = f"statement {sid}"
    stmt = Statement(
        id=sid,
        kind=kind,
        goal=doc.get("goal", ""),
        source_text=doc.get("source", ""),
        state_changing=doc.get("stateChanging", derived_state_changing(kind)),
        children=tuple(_statement_from_doc(c) for c in doc.get("children", [])),
    )
    if kind == "assignment":
        if "target" not in doc or "value" not in doc:
            raise DefinitionSyntaxError(f"{where}: assignment needs target and value")
        stmt = replace(stmt, target=doc["target"], value=_parse_expr(doc["value"], where))
    elif kind == "swap":
        if "left" not in doc or "right" not in doc:
            raise DefinitionSyntaxError(f"{where}: swap needs left and right")
        stmt = replace(
            stmt,
            left=_parse_expr(doc["left"], where),
            right=_parse_expr(doc["right"], where),
        )
    elif kind == "loop":
        for key in ("iterator", "from", "to"):
            if key not in doc:
                raise DefinitionSyntaxError(f"{where}: loop needs iterator, from and to")
        from_expr = _parse_expr(doc["from"], where)
        to_expr = _parse_expr(doc["to"], where)
        stmt = replace(
            stmt,
            iterator=doc["iterator"],
            from_expr=from_expr,
            to_expr=to_expr,
            # inclusive upper bound; the synthesized condition is what the
            # tracer re-evaluates before each iteration
            condition=ex.Compare("<=", ex.Var(doc["iterator"]), to_expr),
        )
    elif kind == "conditional":
        if "condition" not in doc:
            raise DefinitionSyntaxError(f"{where}: conditional needs a condition")
        stmt = replace(stmt, condition=_parse_expr(doc["condition"], where))
    elif kind in ("recursion", "call"):
        if "target" not in doc:
            raise DefinitionSyntaxError(f"{where}: {kind} needs a target")
        args = tuple(
            (k, _parse_expr(v, f"{where}.args.{k}")) for k, v in doc.get("args", {}).items()
        )
        stmt = replace(stmt, call_target=doc["target"], args=args)
    if kind not in ("loop", "conditional") and "condition" in doc:
        raise DefinitionSyntaxError(f"{where}: condition is only allowed on loop/conditional")
    return stmt


# ---------------------------------------------------------------------------
# validation


def validate(algo: AlgorithmDef) -> list[Diagnostic]:
    """Check all definition invariants; an empty list means the definition is valid.

    Diagnostics come out in a deterministic document order.
    """
    diags: list[Diagnostic] = []
    seen_ids: set[str] = set()
    reported_dupes: set[str] = set()

    if algo.input.kind != "array-of-integers":
        diags.append(Diagnostic(None, f"unsupported input kind {algo.input.kind!r}"))
    if algo.postcondition not in (None, "sorted"):
        diags.append(Diagnostic(None, f"unknown postcondition {algo.postcondition!r}"))

    entry_keys = [k for k, _ in algo.input.entry]
    if sorted(entry_keys) != sorted(algo.params):
        diags.append(Diagnostic(None, "input.entry must bind exactly the params"))
    for key, expr in algo.input.entry:
        bad = ex.variables(expr) - {"n"}
        if bad:
            diags.append(Diagnostic(None, f"entry expression for {key!r} may only use n, got {sorted(bad)}"))
    if algo.guard is not None:
        bad = ex.variables(algo.guard) - set(algo.params)
        if bad:
            diags.append(Diagnostic(None, f"guard may only reference params, got {sorted(bad)}"))

    defined = set(algo.params) | {algo.input.name}

    def check_refs(stmt: Statement, expr: ex.Expr | None, scope: set[str], what: str):
        if expr is None:
            return
        dangling = ex.variables(expr) - scope
        for name in sorted(dangling):
            diags.append(Diagnostic(stmt.id, f"dangling reference to {name!r} in {what}"))

    def walk(statements: tuple[Statement, ...], scope: set[str]):
        for stmt in statements:
            if not _IDENT_RE.match(stmt.id):
                diags.append(Diagnostic(stmt.id, "id is not an identifier"))
            if stmt.id in seen_ids:
                if stmt.id not in reported_dupes:
                    diags.append(Diagnostic(stmt.id, "duplicate statement id"))
                    reported_dupes.add(stmt.id)
            else:
                seen_ids.add(stmt.id)

            if stmt.kind in HIERARCHY_KINDS and not stmt.goal.strip():
                diags.append(Diagnostic(stmt.id, f"{stmt.kind} statement requires a goal annotation"))
            if stmt.children and stmt.kind not in ("loop", "conditional"):
                diags.append(Diagnostic(stmt.id, f"{stmt.kind} statement cannot have children"))
            if stmt.state_changing != derived_state_changing(stmt.kind) and stmt.kind != "call":
                diags.append(
                    Diagnostic(
                        stmt.id,
                        f"stateChanging={stmt.state_changing} contradicts kind {stmt.kind!r}",
                    )
                )

            if stmt.kind == "assignment":
                check_refs(stmt, stmt.value, scope, "value")
                if stmt.target == algo.input.name:
                    diags.append(Diagnostic(stmt.id, "cannot rebind the input array name"))
                else:
                    scope.add(stmt.target)
            elif stmt.kind == "swap":
                for side, expr in (("left", stmt.left), ("right", stmt.right)):
                    if not isinstance(expr, (ex.Var, ex.Index)):
                        diags.append(Diagnostic(stmt.id, f"swap {side} must be a variable or array slot"))
                    check_refs(stmt, expr, scope, side)
            elif stmt.kind == "loop":
                check_refs(stmt, stmt.from_expr, scope, "from")
                check_refs(stmt, stmt.to_expr, scope, "to")
                inner = set(scope) | {stmt.iterator}
                walk(stmt.children, inner)
                scope |= inner - {stmt.iterator}
                continue
            elif stmt.kind == "conditional":
                if not isinstance(stmt.condition, ex.Compare):
                    diags.append(Diagnostic(stmt.id, "conditional condition must be a comparison"))
                check_refs(stmt, stmt.condition, scope, "condition")
                walk(stmt.children, scope)
                continue
            elif stmt.kind in ("recursion", "call"):
                if stmt.call_target != algo.name:
                    diags.append(
                        Diagnostic(
                            stmt.id,
                            f"target {stmt.call_target!r} does not name this definition",
                        )
                    )
                arg_keys = [k for k, _ in stmt.args]
                if sorted(arg_keys) != sorted(algo.params):
                    diags.append(Diagnostic(stmt.id, "args must bind exactly the params"))
                for _, expr in stmt.args:
                    check_refs(stmt, expr, scope, "args")

    walk(algo.statements, defined)
    return diags


# ---------------------------------------------------------------------------
# serialization


def serialize_algorithm(algo: AlgorithmDef) -> dict:
    """Document form of a definition; parse_algorithm(serialize_algorithm(d)) == d."""
    doc: dict = {
        "name": algo.name,
        "params": list(algo.params),
        "input": {
            "kind": algo.input.kind,
            "name": algo.input.name,
            "entry": {k: ex.to_prefix(v) for k, v in algo.input.entry},
        },
        "statements": [_statement_to_doc(s) for s in algo.statements],
    }
    if algo.goal:
        doc["goal"] = algo.goal
    if algo.guard is not None:
        doc["guard"] = ex.to_prefix(algo.guard)
    if algo.postcondition:
        doc["postcondition"] = algo.postcondition
    return doc


def to_json(algo: AlgorithmDef) -> str:
    return json.dumps(serialize_algorithm(algo), indent=2)


def _statement_to_doc(stmt: Statement) -> dict:
    doc: dict = {"id": stmt.id, "kind": stmt.kind}
    if stmt.goal:
        doc["goal"] = stmt.goal
    if stmt.source_text:
        doc["source"] = stmt.source_text
    doc["stateChanging"] = stmt.state_changing
    if stmt.kind == "assignment":
        doc["target"] = stmt.target
        doc["value"] = ex.to_prefix(stmt.value)
    elif stmt.kind == "swap":
        doc["left"] = ex.to_prefix(stmt.left)
        doc["right"] = ex.to_prefix(stmt.right)
    elif stmt.kind == "loop":
        doc["iterator"] = stmt.iterator
        doc["from"] = ex.to_prefix(stmt.from_expr)
        doc["to"] = ex.to_prefix(stmt.to_expr)
    elif stmt.kind == "conditional":
        doc["condition"] = ex.to_prefix(stmt.condition)
    elif stmt.kind in ("recursion", "call"):
        doc["target"] = stmt.call_target
        doc["args"] = {k: ex.to_prefix(v) for k, v in stmt.args}
    if stmt.children:
        doc["children"] = [_statement_to_doc(c) for c in stmt.children]
    return doc


def iter_statements(algo: AlgorithmDef):
    """Depth-first, document-order iteration over all statements."""

    def gen(statements):
        for stmt in statements:
            yield stmt
            yield from gen(stmt.children)

    return gen(algo.statements)


def listing(algo: AlgorithmDef) -> list[dict]:
    """Flattened pseudocode listing for display: one row per statement.

    The first row stands for the definition itself and carries its id (the
    algorithm name) so clients can highlight it for recursion-entry states.
    """
    header = f"{algo.name}({', '.join(algo.params)})"
    if algo.guard is not None:
        header += f"  when {ex.to_infix(algo.guard)}"
    rows = [{"statement": algo.name, "indent": 0, "source": header}]

    def walk(statements, depth):
        for stmt in statements:
            rows.append(
                {
                    "statement": stmt.id,
                    "indent": depth,
                    "source": stmt.source_text or stmt.kind,
                }
            )
            walk(stmt.children, depth + 1)

    walk(algo.statements, 1)
    return rows
