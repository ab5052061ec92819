"""Interactive sessions: pipeline orchestration, Q&A log, report aggregation.

A session owns one algorithm run (definition, state graph, materialized
trace) plus a cursor into that trace. ask() runs the full pipeline:
feature extraction, concept filter, classification, then either the
look-up-table path or locate+compose. Every question, answered or refused,
is appended to the session log so type distributions can be computed later.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from . import answer as answer_mod
from . import qparse
from .errors import BadInput, UnknownAlgorithm, XAlgoError
from .hdag import Hdag, build_hdag
from .ir import AlgorithmDef, iter_statements, load_algorithm
from .qparse import ConceptEntry, QuestionFeatures, QuestionType, Vocabulary
from .tracer import DEFAULT_STEP_BUDGET, ExecutionTrace, Snapshot, run

REPORT_CATEGORIES = [t.value for t in QuestionType]


def builtin_algorithm_path(name: str) -> Path | None:
    candidate = resources.files("xalgo").joinpath(f"data/algos/{name}.json")
    return Path(str(candidate)) if candidate.is_file() else None


def builtin_concepts_path(name: str) -> Path | None:
    candidate = resources.files("xalgo").joinpath(f"data/concepts/{name}.json")
    return Path(str(candidate)) if candidate.is_file() else None


def resolve_algorithm(name_or_path: str, algos_dir: str | Path | None = None) -> Path:
    """Resolve an algorithm by file path, by name in algos_dir, or built-in."""
    direct = Path(name_or_path)
    if direct.is_file():
        return direct
    if algos_dir is not None:
        candidate = Path(algos_dir) / f"{name_or_path}.json"
        if candidate.is_file():
            return candidate
    builtin = builtin_algorithm_path(name_or_path)
    if builtin is not None:
        return builtin
    raise UnknownAlgorithm(f"no algorithm named {name_or_path!r}")


def resolve_concepts(
    algo_name: str, concepts_dir: str | Path | None = None
) -> list[ConceptEntry]:
    if concepts_dir is not None:
        candidate = Path(concepts_dir) / f"{algo_name}.json"
        if candidate.is_file():
            return qparse.load_concepts_file(candidate)
    builtin = builtin_concepts_path(algo_name)
    if builtin is not None:
        return qparse.load_concepts_file(builtin)
    return []


def parse_input_csv(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part.strip()) for part in text.split(",")]
    except ValueError as err:
        raise BadInput(f"input must be a comma-separated list of integers: {err}") from None


@dataclass
class QaRecord:
    timestamp: str
    question: str
    features: dict | None
    types: list[str]
    answer: dict | None
    error: dict | None = None

    def to_dict(self) -> dict:
        doc = {
            "timestamp": self.timestamp,
            "question": self.question,
            "features": self.features,
            "types": self.types,
            "answer": self.answer,
        }
        if self.error is not None:
            doc["error"] = self.error
        return doc


@dataclass
class Session:
    session_id: str
    algorithm: AlgorithmDef
    hdag: Hdag
    trace: ExecutionTrace
    concept_kb: list[ConceptEntry]
    cursor: int = 0
    qa_log: list[QaRecord] = field(default_factory=list)

    # -- navigation ---------------------------------------------------------

    def snapshot(self) -> Snapshot | None:
        if not self.trace.snapshots:
            return None
        return self.trace.snapshots[self.cursor]

    def step(self, direction: str, count: int = 1) -> Snapshot | None:
        """Move the cursor, clamping at the trace boundaries."""
        if not self.trace.snapshots:
            return None
        delta = count if direction in ("forward", "subsequent") else -count
        self.cursor = min(max(self.cursor + delta, 0), len(self.trace.snapshots) - 1)
        return self.snapshot()

    def goto(self, index: int | str) -> Snapshot | None:
        if not self.trace.snapshots:
            return None
        if index == "last":
            index = len(self.trace.snapshots) - 1
        if not isinstance(index, int):
            raise BadInput(f"goto expects a step index or 'last', got {index!r}")
        self.cursor = min(max(index, 0), len(self.trace.snapshots) - 1)
        return self.snapshot()

    # -- question answering -------------------------------------------------

    def vocabulary(self) -> Vocabulary:
        variables = {self.algorithm.input.name} | set(self.algorithm.params)
        for stmt in iter_statements(self.algorithm):
            if stmt.target:
                variables.add(stmt.target)
            if stmt.iterator:
                variables.add(stmt.iterator)
        snap = self.snapshot()
        elements = set(snap.data_state if snap else self.trace.input)
        concepts: set[str] = set()
        for entry in self.concept_kb:
            concepts.add(entry.term)
            concepts.update(entry.aliases)
        return Vocabulary(variables=variables, elements=elements, concepts=concepts)

    def ask(self, text: str) -> answer_mod.Answer:
        """Run the full pipeline; refusals raise but are still logged."""
        features: QuestionFeatures | None = None
        try:
            vocabulary = self.vocabulary()
            features = qparse.extract_features(text, vocabulary)
            hit = qparse.match_concept(features, self.concept_kb)
            types = qparse.classify(features, hit, vocabulary)
            if types == {QuestionType.CONCEPT}:
                result = answer_mod.answer_concept(hit.entry, hit.exact)
            else:
                located = answer_mod.locate_answer_node(
                    self.hdag, self.trace, self.cursor, types, features
                )
                result = answer_mod.compose(self.hdag, self.trace, types, located, features)
        except XAlgoError as err:
            self._log(text, features, [], None, {"code": err.code, "message": str(err)})
            raise
        self._log(text, features, sorted(t.value for t in result.types), result.to_dict(), None)
        return result

    def _log(self, question, features, types, answer_doc, error):
        self.qa_log.append(
            QaRecord(
                timestamp=datetime.now(timezone.utc).isoformat(),
                question=question,
                features=features.to_dict() if features else None,
                types=types,
                answer=answer_doc,
                error=error,
            )
        )

    def export_log(self) -> str:
        """Line-delimited JSON, one record per question asked."""
        return "".join(
            json.dumps(record.to_dict(), sort_keys=True) + "\n" for record in self.qa_log
        )


def create_session(
    algo: str | AlgorithmDef,
    input_values,
    algos_dir: str | Path | None = None,
    concepts_dir: str | Path | None = None,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> Session:
    """Materialize a full session: parse, build the graph, trace the input."""
    if isinstance(algo, AlgorithmDef):
        definition = algo
    else:
        definition = load_algorithm(resolve_algorithm(algo, algos_dir))
    if isinstance(input_values, str):
        input_values = parse_input_csv(input_values)
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in input_values):
        raise BadInput("input must be a list of integers")
    graph = build_hdag(definition)
    trace = run(definition, graph, input_values, step_budget=step_budget)
    kb = resolve_concepts(definition.name, concepts_dir)
    return Session(
        session_id=uuid.uuid4().hex,
        algorithm=definition,
        hdag=graph,
        trace=trace,
        concept_kb=kb,
    )


# ---------------------------------------------------------------------------
# log reports


def aggregate_log(lines) -> dict:
    """Frequency table over the six question types plus answered/excluded totals."""
    counts = {category: 0 for category in REPORT_CATEGORIES}
    answered = 0
    excluded = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        record = json.loads(line)
        if record.get("error") is not None:
            excluded += 1
            continue
        answered += 1
        for type_name in record.get("types", []):
            if type_name in counts:
                counts[type_name] += 1
    return {"types": counts, "answered": answered, "excluded": excluded}


def format_report(aggregate: dict) -> str:
    lines = ["type            count", "-" * 21]
    for category in REPORT_CATEGORIES:
        lines.append(f"{category:<15} {aggregate['types'][category]}")
    lines.append("-" * 21)
    lines.append(f"answered        {aggregate['answered']}")
    lines.append(f"excluded        {aggregate['excluded']}")
    return "\n".join(lines)
