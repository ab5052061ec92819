"""xalgo: explains the internal states of deterministic algorithms by answering questions.

The pipeline: an annotated pseudocode definition is parsed (ir), turned into
a hierarchical state graph (hdag), interpreted on a concrete input into a
step-indexed trace (tracer); questions are featurized and classified
(qparse) and answered from graph goals plus trace snapshots (answer);
sessions tie it together behind a REPL, a WebSocket service and persistent
logs (session, protocol, service).
"""

from .answer import (
    Answer,
    InformationUnit,
    LocatedNodes,
    answer_concept,
    compose,
    locate_answer_node,
)
from .errors import (
    BadInput,
    DefinitionSyntaxError,
    EmptyQuestion,
    EvaluationError,
    InvalidDefinition,
    NoMatchingState,
    OutOfRange,
    StepBudgetExceeded,
    Unclassifiable,
    UnknownAlgorithm,
    UnknownNode,
    ValidationError,
    XAlgoError,
)
from .hdag import Hdag, HdagNode, build_hdag
from .ir import (
    AlgorithmDef,
    Diagnostic,
    InputSpec,
    Statement,
    load_algorithm,
    parse_algorithm,
    serialize_algorithm,
    validate,
)
from .qparse import (
    ConceptEntry,
    QuestionFeatures,
    QuestionType,
    Vocabulary,
    classify,
    extract_features,
    load_concepts,
    match_concept,
)
from .session import Session, aggregate_log, create_session
from .tracer import ExecutionTrace, Snapshot, node_at, run, shift

__version__ = "0.1.0"

__all__ = [
    "AlgorithmDef",
    "Answer",
    "BadInput",
    "ConceptEntry",
    "DefinitionSyntaxError",
    "Diagnostic",
    "EmptyQuestion",
    "EvaluationError",
    "ExecutionTrace",
    "Hdag",
    "HdagNode",
    "InformationUnit",
    "InputSpec",
    "InvalidDefinition",
    "LocatedNodes",
    "NoMatchingState",
    "OutOfRange",
    "QuestionFeatures",
    "QuestionType",
    "Session",
    "Snapshot",
    "Statement",
    "StepBudgetExceeded",
    "Unclassifiable",
    "UnknownAlgorithm",
    "UnknownNode",
    "ValidationError",
    "Vocabulary",
    "XAlgoError",
    "aggregate_log",
    "answer_concept",
    "build_hdag",
    "classify",
    "compose",
    "create_session",
    "extract_features",
    "load_algorithm",
    "load_concepts",
    "locate_answer_node",
    "match_concept",
    "node_at",
    "parse_algorithm",
    "run",
    "serialize_algorithm",
    "shift",
    "validate",
]
