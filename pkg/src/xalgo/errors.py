"""Exception types shared across the engine.

Every error carries a stable machine-readable ``code`` so the session layer
can turn it into a structured wire message instead of a crash.
"""

from __future__ import annotations


class XAlgoError(Exception):
    code = "error"


class DefinitionSyntaxError(XAlgoError):
    """Malformed definition document, with a position when one is known."""

    code = "syntax_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ValidationError(XAlgoError):
    """Raised by parse_algorithm when the parsed definition fails validation."""

    code = "invalid_definition"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        details = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"invalid definition: {details}")


class InvalidDefinition(XAlgoError):
    code = "invalid_definition"


class EvaluationError(XAlgoError):
    code = "evaluation_error"

    def __init__(self, message: str, statement_id: str | None = None):
        self.statement_id = statement_id
        if statement_id:
            message = f"{message} (statement {statement_id})"
        super().__init__(message)


class StepBudgetExceeded(XAlgoError):
    code = "step_budget_exceeded"


class OutOfRange(XAlgoError):
    code = "out_of_range"


class UnknownNode(XAlgoError):
    code = "unknown_node"


class EmptyQuestion(XAlgoError):
    code = "empty_question"


class Unclassifiable(XAlgoError):
    code = "unclassifiable"


class NoMatchingState(XAlgoError):
    code = "no_matching_state"


class UnknownAlgorithm(XAlgoError):
    code = "unknown_algorithm"


class BadInput(XAlgoError):
    code = "bad_input"
