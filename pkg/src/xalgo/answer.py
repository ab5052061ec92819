"""Answer-node location and template-based answer composition.

Location rules, applied after the optional time shift:

* Description / Confirmation: the answer node is the node of the (shifted)
  step itself.
* Causality: the nearest conditional hierarchy enclosing that node; when
  there is none, the node of the antecedent step.
* Rationale: the node's parent as the local goal plus the nearest loop or
  recursion ancestor as the global goal.
* Contrast: the node's parent.

When a question names objects or an action that the step does not involve,
the search falls back to the nearest step whose action record matches
(earlier step on ties) and locates from there. Confirmation never falls
back: its whole point is a verdict about the referred step.

Composition is template-only; every number in an answer comes from a
snapshot, never from the templates. Goal annotations may carry
``{placeholders}`` that are filled from the snapshot bindings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import NoMatchingState
from .hdag import (
    ACTION_ASSIGN,
    ACTION_COMPARE,
    ACTION_INCREMENT,
    ACTION_NONE,
    ACTION_SELECT,
    ACTION_SWAP,
    DAG_ROOT,
    Hdag,
    HdagNode,
)
from .qparse import ConceptEntry, Entity, QuestionFeatures, QuestionType
from .tracer import ANTECEDENT, ActionRecord, ExecutionTrace, Snapshot, shift

UNIT_CAUSAL = "causalCondition"
UNIT_LOCAL_RATIONALE = "localRationale"
UNIT_GLOBAL_RATIONALE = "globalRationale"
UNIT_DESCRIPTION = "description"
UNIT_CONFIRMATION = "confirmation"
UNIT_CONTRAST = "contrastNegation"
UNIT_CONCEPT = "conceptText"

# question-side action mentions accepted for each record action
ACTION_EQUIV = {
    "swap": {ACTION_SWAP},
    "move": {ACTION_SWAP},
    "increment": {ACTION_INCREMENT},
    "compare": {ACTION_COMPARE},
    "select": {ACTION_SELECT},
    "sort": set(),
    "assign": {ACTION_ASSIGN},
}

_OP_PHRASES = {
    "<": ("is less than", "is not less than"),
    "<=": ("is at most", "is not at most"),
    ">": ("is greater than", "is not greater than"),
    ">=": ("is at least", "is not at least"),
    "=": ("equals", "does not equal"),
    "!=": ("differs from", "does not differ from"),
}

_PLACEHOLDER_RE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


@dataclass(frozen=True)
class InformationUnit:
    kind: str
    rendered_text: str
    source_node_id: str | None = None
    concept_term: str | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "renderedText": self.rendered_text,
            "sourceNodeId": self.source_node_id,
            "conceptTerm": self.concept_term,
        }


@dataclass(frozen=True)
class Answer:
    text: str
    types: tuple[QuestionType, ...]
    answer_node_ids: tuple[str, ...]
    step_used: int | None
    units: tuple[InformationUnit, ...]
    clamped: bool = False

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "types": sorted(t.value for t in self.types),
            "answerNodeIds": list(self.answer_node_ids),
            "stepUsed": self.step_used,
            "units": [u.to_dict() for u in self.units],
            "clamped": self.clamped,
        }


@dataclass(frozen=True)
class LocatedNodes:
    step_used: int
    clamped: bool
    asked_at: int = 0
    causal: str | None = None
    local: str | None = None
    global_: str | None = None
    primary: str | None = None

    @property
    def node_ids(self) -> tuple[str, ...]:
        ordered = []
        for node_id in (self.causal, self.local, self.global_, self.primary):
            if node_id is not None and node_id not in ordered:
                ordered.append(node_id)
        return tuple(ordered)


# ---------------------------------------------------------------------------
# matching a question against a step


def matches_question(features: QuestionFeatures, snapshot: Snapshot) -> bool:
    """Do the question's objects/values/action all show up in this step?

    Unspecified parts are ignored. A variable object matches by label or by
    its current bound value; an element object matches by value.
    """
    record = snapshot.action_record
    if features.action is not None:
        if record.action not in ACTION_EQUIV.get(features.action, set()):
            return False
    for entity in features.objects:
        if entity.kind == "concept":
            continue
        if not _entity_in_record(entity, record, snapshot.bindings):
            return False
    for value in features.values:
        if value not in record.values.values():
            return False
    return True


def _entity_in_record(entity: Entity, record: ActionRecord, bindings) -> bool:
    if entity.kind == "element":
        return entity.value in record.values.values()
    if entity.name in record.labels:
        return True
    bound = bindings.get(entity.name)
    return bound is not None and bound in record.values.values()


def find_nearest_matching(
    trace: ExecutionTrace, from_step: int, features: QuestionFeatures
) -> int | None:
    """Nearest step whose action record matches; earlier step wins ties."""
    best: int | None = None
    best_key: tuple[int, int] | None = None
    for snap in trace.snapshots:
        if not matches_question(features, snap):
            continue
        key = (abs(snap.step_index - from_step), snap.step_index)
        if best_key is None or key < best_key:
            best, best_key = snap.step_index, key
    return best


def _question_constrains_state(features: QuestionFeatures) -> bool:
    return bool(
        features.action
        or features.values
        or any(e.kind != "concept" for e in features.objects)
    )


# ---------------------------------------------------------------------------
# time shift


def apply_time_shift(
    trace: ExecutionTrace, current_step: int, features: QuestionFeatures
) -> tuple[int, bool]:
    """Resolve the question's temporal reference to a concrete step."""
    anchor = features.time_shift.anchor
    if anchor is not None:
        reference = current_step
        if anchor.action is not None:
            probe = QuestionFeatures(
                raw_text=features.raw_text,
                interrogative_word=features.interrogative_word,
                time_shift=features.time_shift,
                objects=[],
                values=[],
                action=anchor.action,
                unknown_mentions=[],
            )
            if anchor.relation == "next":
                candidates = [
                    s.step_index
                    for s in trace.snapshots[current_step + 1:]
                    if matches_question(probe, s)
                ]
                reference = candidates[0] if candidates else None
            elif anchor.relation == "last":
                candidates = [
                    s.step_index
                    for s in trace.snapshots[:current_step]
                    if matches_question(probe, s)
                ]
                reference = candidates[-1] if candidates else None
            else:
                reference = find_nearest_matching(trace, current_step, probe)
            if reference is None:
                raise NoMatchingState(
                    f"no step performs the action {anchor.action!r} referred to by the question"
                )
            if anchor.relation in ("next", "last"):
                return reference, False
        if anchor.relation == "after":
            return shift(trace, reference, "subsequent", 1)
        if anchor.relation == "before":
            return shift(trace, reference, ANTECEDENT, 1)
        if anchor.relation == "next":
            return shift(trace, reference, "subsequent", 1)
        return shift(trace, reference, ANTECEDENT, 1)

    tense = features.time_shift.tense
    if tense == "future":
        return shift(trace, current_step, "subsequent", 1)
    return current_step, False


# ---------------------------------------------------------------------------
# locating answer nodes


def locate_answer_node(
    hdag: Hdag,
    trace: ExecutionTrace,
    current_step: int,
    types: set[QuestionType],
    features: QuestionFeatures,
) -> LocatedNodes:
    if not trace.snapshots:
        raise NoMatchingState("this run produced no execution steps")

    step_used, clamped = apply_time_shift(trace, current_step, features)

    confirmation = QuestionType.CONFIRMATION in types
    if (
        not confirmation
        and _question_constrains_state(features)
        and not matches_question(features, trace.snapshots[step_used])
    ):
        nearest = find_nearest_matching(trace, step_used, features)
        if nearest is None:
            raise NoMatchingState("no step of this run matches the question's objects and action")
        step_used = nearest

    node_id = trace.snapshots[step_used].node_id
    located = LocatedNodes(step_used=step_used, clamped=clamped, asked_at=current_step)

    if QuestionType.CAUSALITY in types:
        causal = hdag.enclosing_conditional(node_id)
        if causal is None and step_used > 0:
            causal = trace.snapshots[step_used - 1].node_id
        located = _replace(located, causal=causal or node_id)
    if QuestionType.RATIONALE in types:
        local = hdag.parent(node_id) or node_id
        global_ = hdag.nearest_hierarchy_ancestor(node_id)
        if global_ == local:
            global_ = None
        located = _replace(located, local=local, global_=global_)
    if QuestionType.CONTRAST in types:
        located = _replace(located, primary=hdag.parent(node_id) or node_id)
    if types & {QuestionType.DESCRIPTION, QuestionType.CONFIRMATION}:
        located = _replace(located, primary=node_id)
    return located


def _replace(located: LocatedNodes, **kwargs) -> LocatedNodes:
    data = {
        "step_used": located.step_used,
        "clamped": located.clamped,
        "asked_at": located.asked_at,
        "causal": located.causal,
        "local": located.local,
        "global_": located.global_,
        "primary": located.primary,
    }
    data.update(kwargs)
    return LocatedNodes(**data)


# ---------------------------------------------------------------------------
# rendering helpers


def interpolate(goal: str, bindings) -> str:
    """Fill {name} placeholders in a goal annotation from snapshot bindings."""
    return _PLACEHOLDER_RE.sub(
        lambda m: str(bindings.get(m.group(1), m.group(1))), goal
    )


def _operand_phrase(label: str, value: int) -> str:
    """'2' for array slots and literals, 'the pivot, 3' for named variables."""
    if "[" in label or label.isdigit() or label.lstrip("-").isdigit():
        return str(value)
    return f"the {label}, {value}"


def render_condition(record: ActionRecord) -> str:
    (l_label, l_value), (r_label, r_value) = record.objects
    positive, negative = _OP_PHRASES[record.op]
    phrase = positive if record.outcome else negative
    return f"{_operand_phrase(l_label, l_value)} {phrase} {_operand_phrase(r_label, r_value)}"


def action_clause(node: HdagNode, record: ActionRecord, bindings) -> str:
    """Present-tense 'we ...' clause for what a step does."""
    objects = record.objects
    if record.action == ACTION_SWAP:
        (_, left), (_, right) = objects
        return f"we swap {left} and {right}"
    if record.action == ACTION_SELECT:
        target, value = objects[0]
        return f"we select {value} as the {target}"
    if record.action == ACTION_INCREMENT:
        target, value = objects[0]
        return f"we increment {target} to {value}"
    if record.action == ACTION_ASSIGN:
        target, value = objects[0]
        return f"we set {target} to {value}"
    if record.action == ACTION_COMPARE:
        return f"we check whether {render_condition(record)}"
    if node.kind == DAG_ROOT and node.goal:
        return "we " + interpolate(node.goal, bindings)
    return "we take this step"


def _latest_record_for(
    trace: ExecutionTrace, node_id: str, at_or_before: int
) -> Snapshot | None:
    for snap in reversed(trace.snapshots[: at_or_before + 1]):
        if snap.node_id == node_id:
            return snap
    return None


# ---------------------------------------------------------------------------
# composition


def compose(
    hdag: Hdag,
    trace: ExecutionTrace,
    types: set[QuestionType],
    located: LocatedNodes,
    features: QuestionFeatures,
) -> Answer:
    """Render the answer units for the located nodes.

    Merged Causality+Rationale answers always come out as causal condition,
    then local rationale, then global rationale.
    """
    snapshot = trace.snapshots[located.step_used]
    units: list[InformationUnit] = []

    if QuestionType.CAUSALITY in types and located.causal is not None:
        units.append(_causal_unit(hdag, trace, located, snapshot))
    if QuestionType.RATIONALE in types and located.local is not None:
        units.append(_local_rationale_unit(hdag, trace, located, snapshot))
        if located.global_ is not None:
            goal = interpolate(hdag.node(located.global_).goal, snapshot.bindings)
            units.append(
                InformationUnit(
                    UNIT_GLOBAL_RATIONALE,
                    f"This lets us {goal}.",
                    source_node_id=located.global_,
                )
            )
    if QuestionType.DESCRIPTION in types and located.primary is not None:
        units.append(_description_unit(hdag, trace, located, snapshot))
    if QuestionType.CONFIRMATION in types and located.primary is not None:
        units.append(_confirmation_unit(hdag, located, snapshot, features))
    if QuestionType.CONTRAST in types and located.primary is not None:
        goal = interpolate(hdag.node(located.primary).goal or "reach the goal of this step",
                           snapshot.bindings)
        alternative = features.alternative or "doing that instead"
        units.append(
            InformationUnit(
                UNIT_CONTRAST,
                f"If {alternative}, you will not {goal}.",
                source_node_id=located.primary,
            )
        )

    return Answer(
        text=" ".join(u.rendered_text for u in units),
        types=tuple(sorted(types, key=lambda t: t.value)),
        answer_node_ids=located.node_ids,
        step_used=located.step_used,
        units=tuple(units),
        clamped=located.clamped,
    )


def _causal_unit(
    hdag: Hdag, trace: ExecutionTrace, located: LocatedNodes, snapshot: Snapshot
) -> InformationUnit:
    node = hdag.node(located.causal)
    if node.statement_kind == "conditional":
        evaluated = _latest_record_for(trace, node.id, located.step_used)
        if evaluated is not None:
            return InformationUnit(
                UNIT_CAUSAL,
                f"Because {render_condition(evaluated.action_record)}.",
                source_node_id=node.id,
            )
    # no enclosing conditional: describe the antecedent step with "because";
    # causalCondition units are reserved for real condition citations
    antecedent = _latest_record_for(trace, node.id, located.step_used)
    if antecedent is None:
        clause = "we " + (interpolate(node.goal, snapshot.bindings) or "took the previous step")
        return InformationUnit(UNIT_DESCRIPTION, f"Because {clause}.", source_node_id=node.id)
    clause = action_clause(node, antecedent.action_record, antecedent.bindings)
    if antecedent.step_index == located.step_used:
        return InformationUnit(UNIT_DESCRIPTION, f"Because {clause}.", source_node_id=node.id)
    return InformationUnit(
        UNIT_DESCRIPTION, f"Because just before this, {clause}.", source_node_id=node.id
    )


def _local_rationale_unit(
    hdag: Hdag, trace: ExecutionTrace, located: LocatedNodes, snapshot: Snapshot
) -> InformationUnit:
    current = hdag.node(snapshot.node_id)
    clause = action_clause(current, snapshot.action_record, snapshot.bindings)
    goal = interpolate(hdag.node(located.local).goal, snapshot.bindings)
    if not goal:
        text = f"{_capitalize(clause)}."
    else:
        text = f"{_capitalize(clause)} to {goal}."
    return InformationUnit(UNIT_LOCAL_RATIONALE, text, source_node_id=located.local)


def _description_unit(
    hdag: Hdag, trace: ExecutionTrace, located: LocatedNodes, snapshot: Snapshot
) -> InformationUnit:
    node = hdag.node(located.primary)
    clause = action_clause(node, snapshot.action_record, snapshot.bindings)
    goal = interpolate(node.goal, snapshot.bindings)
    if node.kind == DAG_ROOT and goal and snapshot.action_record.action == ACTION_COMPARE:
        clause = f"{clause} to {goal}"
    if located.step_used == located.asked_at:
        text = f"Right now {clause}."
    else:
        text = f"At step {snapshot.step_index}, {clause}."
    return InformationUnit(UNIT_DESCRIPTION, text, source_node_id=node.id)


def _confirmation_unit(
    hdag: Hdag, located: LocatedNodes, snapshot: Snapshot, features: QuestionFeatures
) -> InformationUnit:
    node = hdag.node(located.primary)
    verdict = matches_question(features, snapshot)
    clause = action_clause(node, snapshot.action_record, snapshot.bindings)
    if verdict:
        text = f"Yes, {clause}."
    else:
        corrections = _value_corrections(features, snapshot)
        text = f"No, here {clause}."
        if corrections:
            text += " " + " ".join(corrections)
    return InformationUnit(UNIT_CONFIRMATION, text, source_node_id=node.id)


def _value_corrections(features: QuestionFeatures, snapshot: Snapshot) -> list[str]:
    """Name the actual value for each variable the question got wrong."""
    corrections = []
    for entity in features.objects:
        if entity.kind != "variable":
            continue
        actual = snapshot.bindings.get(entity.name)
        if actual is None:
            continue
        if features.values and actual not in features.values:
            corrections.append(f"{entity.name} is {actual}.")
    return corrections


def _capitalize(text: str) -> str:
    return text[0].upper() + text[1:] if text else text


# ---------------------------------------------------------------------------
# concept answers


def answer_concept(entry: ConceptEntry, exact: bool) -> Answer:
    """Look-up-table answer; nearest matches are hedged so they are distinguishable."""
    text = entry.answer_text if exact else f"Closest I know: {entry.answer_text}"
    unit = InformationUnit(UNIT_CONCEPT, text, concept_term=entry.term)
    return Answer(
        text=text,
        types=(QuestionType.CONCEPT,),
        answer_node_ids=(),
        step_used=None,
        units=(unit,),
        clamped=False,
    )
