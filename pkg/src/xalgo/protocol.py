"""Wire protocol: JSON message schema plus a transport-agnostic session driver.

Client messages (one JSON object per WebSocket frame or stdio line):

    {"type": "start", "algo": "<name-or-path>", "input": [3, 8, 2]}
    {"type": "ask", "text": "<question>"}
    {"type": "step", "direction": "forward" | "back", "count": <n>}
    {"type": "goto", "step": <n> | "last"}
    {"type": "state"}

Server messages:

    {"type": "started", "summary": {algo, goal, input, steps, finalData,
                                    listing, concepts}}
    {"type": "snapshot", "snapshot": {...} | null, "highlight": <statementId> | null}
    {"type": "answer", "answer": {text, types, units, answerNodeIds,
                                  stepUsed, clamped}}
    {"type": "error", "code": "<code>", "message": "<text>"}

Every client message gets exactly one reply; a snapshot push follows the
started reply so clients can render the initial state. Serialization is
canonical (sorted keys, compact separators) and carries no timestamps, so
replaying a recorded client script against a fresh session reproduces
byte-identical output.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import XAlgoError
from .ir import listing
from .session import Session, create_session
from .tracer import Snapshot


def encode(message: dict) -> str:
    return json.dumps(message, sort_keys=True, separators=(",", ":"))


def serialize_snapshot(snapshot: Snapshot) -> dict:
    record = snapshot.action_record
    action: dict = {
        "action": record.action,
        "objects": [[label, value] for label, value in record.objects],
        "values": record.values,
    }
    if record.op is not None:
        action["op"] = record.op
        action["outcome"] = record.outcome
    return {
        "step": snapshot.step_index,
        "node": snapshot.node_id,
        "statement": snapshot.node_id,
        "callPath": [
            {"statement": frame.statement_id, "args": dict(frame.args)}
            for frame in snapshot.call_path
        ],
        "bindings": dict(snapshot.bindings),
        "data": list(snapshot.data_state),
        "action": action,
    }


class ProtocolHandler:
    """Drives one session from parsed or raw client messages."""

    def __init__(
        self,
        algos_dir: str | Path | None = None,
        concepts_dir: str | Path | None = None,
        log_dir: str | Path | None = None,
    ):
        self.algos_dir = algos_dir
        self.concepts_dir = concepts_dir
        self.log_dir = Path(log_dir) if log_dir else None
        self.session: Session | None = None

    # -- entry points --------------------------------------------------------

    def handle_line(self, raw: str) -> list[str]:
        try:
            message = json.loads(raw)
        except json.JSONDecodeError as err:
            return [encode(_error("bad_message", f"not valid JSON: {err}"))]
        if not isinstance(message, dict):
            return [encode(_error("bad_message", "message must be a JSON object"))]
        return [encode(reply) for reply in self.handle(message)]

    def handle(self, message: dict) -> list[dict]:
        kind = message.get("type")
        try:
            if kind == "start":
                return self._start(message)
            if self.session is None:
                return [_error("no_session", "send a start message first")]
            if kind == "ask":
                return self._ask(message)
            if kind == "step":
                snap = self.session.step(
                    message.get("direction", "forward"), int(message.get("count", 1))
                )
                return [self._snapshot_msg(snap)]
            if kind == "goto":
                snap = self.session.goto(message.get("step", 0))
                return [self._snapshot_msg(snap)]
            if kind == "state":
                return [self._snapshot_msg(self.session.snapshot())]
            return [_error("bad_message", f"unknown message type {kind!r}")]
        except XAlgoError as err:
            return [_error(err.code, str(err))]

    def close(self):
        """Flush the session log when a log directory is configured."""
        if self.session is not None and self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            path = self.log_dir / f"{self.session.session_id}.jsonl"
            path.write_text(self.session.export_log())

    # -- helpers --------------------------------------------------------------

    def _start(self, message: dict) -> list[dict]:
        session = create_session(
            message.get("algo", ""),
            message.get("input", []),
            algos_dir=self.algos_dir,
            concepts_dir=self.concepts_dir,
        )
        self.close()  # flush any previous session before replacing it
        self.session = session
        summary = {
            "algo": session.algorithm.name,
            "goal": session.algorithm.goal,
            "input": list(session.trace.input),
            "steps": len(session.trace.snapshots),
            "finalData": list(session.trace.final_state),
            "listing": listing(session.algorithm),
            "concepts": sorted(entry.term for entry in session.concept_kb),
        }
        replies = [{"type": "started", "summary": summary}]
        if session.trace.snapshots:
            replies.append(self._snapshot_msg(session.snapshot()))
        return replies

    def _ask(self, message: dict) -> list[dict]:
        result = self.session.ask(message.get("text", ""))
        return [{"type": "answer", "answer": result.to_dict()}]

    def _snapshot_msg(self, snapshot: Snapshot | None) -> dict:
        if snapshot is None:
            return {"type": "snapshot", "snapshot": None, "highlight": None}
        return {
            "type": "snapshot",
            "snapshot": serialize_snapshot(snapshot),
            "highlight": snapshot.node_id,
        }


def _error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}
