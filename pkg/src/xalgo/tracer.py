"""Deterministic interpreter producing a step-indexed execution trace.

A snapshot is emitted whenever a state-changing statement executes and
whenever a hierarchy begins: a loop iteration starts, a conditional is
evaluated, or a recursive call is entered. Hierarchy snapshots exist so that
causal answers can cite the evaluated condition with its concrete values;
they map onto the corresponding dagRoot node, while state-changing snapshots
map onto stateNodes. The whole trace is materialized up front, which turns
time-shifted and "nearest matching state" lookups into list indexing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import expressions as ex
from .errors import EvaluationError, InvalidDefinition, OutOfRange, StepBudgetExceeded
from .hdag import (
    ACTION_ASSIGN,
    ACTION_COMPARE,
    ACTION_INCREMENT,
    ACTION_NONE,
    ACTION_SELECT,
    ACTION_SWAP,
    Hdag,
)
from .ir import AlgorithmDef, Statement, validate

DEFAULT_STEP_BUDGET = 100_000
_MAX_CALL_DEPTH = 200

ANTECEDENT = "antecedent"
SUBSEQUENT = "subsequent"


@dataclass(frozen=True)
class ActionRecord:
    """What a step actually did: action verb plus concrete operands."""

    action: str
    objects: tuple[tuple[str, int], ...]  # (label, value) in operand order
    op: str | None = None  # comparison operator, compare records only
    outcome: bool | None = None  # comparison result, compare records only

    @property
    def values(self) -> dict[str, int]:
        return dict(self.objects)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.objects)


@dataclass(frozen=True)
class CallFrame:
    statement_id: str
    args: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Snapshot:
    step_index: int
    node_id: str
    call_path: tuple[CallFrame, ...]
    bindings: dict[str, int]
    data_state: tuple[int, ...]
    action_record: ActionRecord


@dataclass
class ExecutionTrace:
    algo_name: str
    input: tuple[int, ...]
    snapshots: list[Snapshot]
    hdag_ref: str

    def __len__(self) -> int:
        return len(self.snapshots)

    @property
    def final_state(self) -> tuple[int, ...]:
        return self.snapshots[-1].data_state if self.snapshots else self.input


class ShiftResult(NamedTuple):
    index: int
    clamped: bool


def node_at(trace: ExecutionTrace, step_index: int) -> str:
    if not 0 <= step_index < len(trace.snapshots):
        raise OutOfRange(f"step {step_index} outside trace of length {len(trace.snapshots)}")
    return trace.snapshots[step_index].node_id


def shift(trace: ExecutionTrace, step_index: int, direction: str, count: int = 1) -> ShiftResult:
    """Move along the trace, clamping at the boundaries.

    shift(shift(i, subsequent, 1), antecedent, 1) == i whenever both
    neighbors exist.
    """
    if not 0 <= step_index < len(trace.snapshots):
        raise OutOfRange(f"step {step_index} outside trace of length {len(trace.snapshots)}")
    if direction not in (ANTECEDENT, SUBSEQUENT):
        raise ValueError(f"bad direction {direction!r}")
    if count < 1:
        raise ValueError("count must be positive")
    raw = step_index - count if direction == ANTECEDENT else step_index + count
    clamped_index = min(max(raw, 0), len(trace.snapshots) - 1)
    return ShiftResult(clamped_index, clamped_index != raw)


def run(
    algo: AlgorithmDef,
    hdag: Hdag,
    input_values: list[int] | tuple[int, ...],
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> ExecutionTrace:
    """Interpret the definition on a concrete array.

    Pure function of (algo, input); raises StepBudgetExceeded for runaway
    definitions and EvaluationError (with the statement id) for runtime
    faults such as out-of-bounds indexing.
    """
    diagnostics = validate(algo)
    if diagnostics:
        raise InvalidDefinition("definition failed validation: " + "; ".join(map(str, diagnostics)))
    if hdag.algo_name != algo.name:
        raise InvalidDefinition(
            f"hdag was built for {hdag.algo_name!r}, not {algo.name!r}"
        )

    state = list(input_values)
    snapshots: list[Snapshot] = []
    budget = step_budget

    def spend(stmt_id: str | None = None):
        nonlocal budget
        budget -= 1
        if budget < 0:
            raise StepBudgetExceeded(
                f"step budget of {step_budget} exhausted; definition may not terminate"
            )

    def emit(node_id: str, bindings: dict[str, int], call_path, record: ActionRecord):
        snapshots.append(
            Snapshot(
                step_index=len(snapshots),
                node_id=node_id,
                call_path=call_path,
                bindings=dict(bindings),
                data_state=tuple(state),
                action_record=record,
            )
        )

    arrays = {algo.input.name: state}

    def evaluate(expr: ex.Expr, bindings, stmt: Statement):
        try:
            return ex.evaluate(expr, bindings, arrays)
        except EvaluationError as err:
            raise EvaluationError(str(err), statement_id=stmt.id) from None

    def slot_label(expr: ex.Expr, bindings, stmt: Statement) -> tuple[str, int]:
        """Concrete (label, value) for an lvalue, e.g. ('a[2]', 8)."""
        if isinstance(expr, ex.Var):
            if expr.name not in bindings:
                raise EvaluationError(f"unbound variable {expr.name!r}", statement_id=stmt.id)
            return expr.name, bindings[expr.name]
        index = ex.as_int(evaluate(expr.index, bindings, stmt))
        if not 0 <= index < len(state):
            raise EvaluationError(
                f"index {index} out of bounds for {expr.array!r} (length {len(state)})",
                statement_id=stmt.id,
            )
        return f"{expr.array}[{index}]", state[index]

    def write_slot(expr: ex.Expr, bindings, value: int, stmt: Statement):
        if isinstance(expr, ex.Var):
            bindings[expr.name] = value
        else:
            index = ex.as_int(evaluate(expr.index, bindings, stmt))
            state[index] = value

    def exec_block(statements: tuple[Statement, ...], bindings, call_path, depth: int):
        for stmt in statements:
            spend(stmt.id)
            if stmt.kind == "assignment":
                value = ex.as_int(evaluate(stmt.value, bindings, stmt))
                objects: list[tuple[str, int]] = [(stmt.target, value)]
                if isinstance(stmt.value, ex.Index):
                    action = ACTION_SELECT
                    objects.append(slot_label(stmt.value, bindings, stmt))
                elif _node_action(hdag, stmt.id) == ACTION_INCREMENT:
                    action = ACTION_INCREMENT
                else:
                    action = ACTION_ASSIGN
                bindings[stmt.target] = value
                emit(stmt.id, bindings, call_path, ActionRecord(action, tuple(objects)))
            elif stmt.kind == "swap":
                left_label, left_value = slot_label(stmt.left, bindings, stmt)
                right_label, right_value = slot_label(stmt.right, bindings, stmt)
                write_slot(stmt.left, bindings, right_value, stmt)
                write_slot(stmt.right, bindings, left_value, stmt)
                record = ActionRecord(
                    ACTION_SWAP, ((left_label, left_value), (right_label, right_value))
                )
                emit(stmt.id, bindings, call_path, record)
            elif stmt.kind == "loop":
                value = ex.as_int(evaluate(stmt.from_expr, bindings, stmt))
                while value <= ex.as_int(evaluate(stmt.to_expr, bindings, stmt)):
                    spend(stmt.id)
                    bindings[stmt.iterator] = value
                    emit(
                        stmt.id,
                        bindings,
                        call_path,
                        ActionRecord(ACTION_NONE, ((stmt.iterator, value),)),
                    )
                    exec_block(stmt.children, bindings, call_path, depth)
                    value += 1
            elif stmt.kind == "conditional":
                cond = stmt.condition
                left_obj = _operand(cond.left, bindings, stmt, evaluate, slot_label)
                right_obj = _operand(cond.right, bindings, stmt, evaluate, slot_label)
                outcome = bool(evaluate(cond, bindings, stmt))
                record = ActionRecord(
                    ACTION_COMPARE, (left_obj, right_obj), op=cond.op, outcome=outcome
                )
                emit(stmt.id, bindings, call_path, record)
                if outcome:
                    exec_block(stmt.children, bindings, call_path, depth)
            elif stmt.kind == "recursion":
                args = {
                    name: ex.as_int(evaluate(expr, bindings, stmt))
                    for name, expr in stmt.args
                }
                invoke(stmt, args, call_path, depth + 1)
            elif stmt.kind == "return":
                raise _Return()
            elif stmt.kind == "call":
                raise EvaluationError(
                    "call statements are reserved and not executable", statement_id=stmt.id
                )
            # noop: nothing happens

    def invoke(stmt: Statement | None, args: dict[str, int], call_path, depth: int):
        if depth > _MAX_CALL_DEPTH:
            raise StepBudgetExceeded(f"recursion depth exceeded {_MAX_CALL_DEPTH}")
        bindings = dict(args)
        if algo.guard is not None and not ex.evaluate(algo.guard, bindings, arrays):
            return
        if stmt is not None:
            call_path = call_path + (CallFrame(stmt.id, tuple(sorted(args.items()))),)
            record = ActionRecord(ACTION_NONE, tuple(sorted(args.items())))
            emit(stmt.id, bindings, call_path, record)
        try:
            exec_block(algo.statements, bindings, call_path, depth)
        except _Return:
            pass

    entry_args = {
        name: ex.as_int(ex.evaluate(expr, {"n": len(state)}, arrays))
        for name, expr in algo.input.entry
    }
    invoke(None, entry_args, (), 0)

    if algo.postcondition == "sorted" and list(state) != sorted(state):
        raise EvaluationError(f"postcondition violated: final state {state} is not sorted")

    return ExecutionTrace(
        algo_name=algo.name,
        input=tuple(input_values),
        snapshots=snapshots,
        hdag_ref=hdag.algo_name,
    )


class _Return(Exception):
    pass


def _operand(expr: ex.Expr, bindings, stmt, evaluate, slot_label) -> tuple[str, int]:
    if isinstance(expr, (ex.Var, ex.Index)):
        return slot_label(expr, bindings, stmt)
    value = ex.as_int(evaluate(expr, bindings, stmt))
    return ex.to_infix(expr), value


def _node_action(hdag: Hdag, statement_id: str) -> str:
    return hdag.nodes[statement_id].action if statement_id in hdag.nodes else ACTION_ASSIGN
