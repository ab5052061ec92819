import json
from pathlib import Path

from xalgo.protocol import ProtocolHandler, encode

SCRIPT = (Path(__file__).parent / "data" / "replay_script.jsonl").read_text().strip().splitlines()


def drive(script_lines):
    handler = ProtocolHandler()
    out = []
    for line in script_lines:
        out.extend(handler.handle_line(line))
    return out


def test_every_message_gets_a_reply():
    handler = ProtocolHandler()
    replies_per_message = [len(handler.handle_line(line)) for line in SCRIPT]
    # start gets its reply plus one pushed snapshot; everything else exactly one
    assert replies_per_message[0] == 2
    assert all(count == 1 for count in replies_per_message[1:])


def test_replay_is_byte_identical():
    first = drive(SCRIPT)
    second = drive(SCRIPT)
    assert first == second
    assert "\n".join(first).encode() == "\n".join(second).encode()


def test_replay_replies_contain_no_timestamps():
    for line in drive(SCRIPT):
        assert "timestamp" not in line


def test_start_reply_shape():
    handler = ProtocolHandler()
    replies = handler.handle({"type": "start", "algo": "quicksort", "input": [3, 8, 2]})
    assert [r["type"] for r in replies] == ["started", "snapshot"]
    summary = replies[0]["summary"]
    assert summary["algo"] == "quicksort"
    assert summary["steps"] == 9
    assert summary["finalData"] == [2, 3, 8]
    assert summary["listing"][0]["statement"] == "quicksort"
    assert "pivot" in summary["concepts"]
    assert replies[1]["snapshot"]["step"] == 0


def test_snapshot_pushed_after_every_cursor_change():
    handler = ProtocolHandler()
    handler.handle({"type": "start", "algo": "quicksort", "input": [3, 8, 2]})
    reply = handler.handle({"type": "step", "direction": "forward", "count": 3})
    assert reply[0]["type"] == "snapshot"
    assert reply[0]["snapshot"]["step"] == 3
    assert reply[0]["highlight"] == reply[0]["snapshot"]["statement"]


def test_error_reply_for_unknown_type():
    handler = ProtocolHandler()
    handler.handle({"type": "start", "algo": "quicksort", "input": [3, 8, 2]})
    reply = handler.handle({"type": "dance"})
    assert reply[0]["type"] == "error"
    assert reply[0]["code"] == "bad_message"


def test_error_before_start():
    handler = ProtocolHandler()
    reply = handler.handle({"type": "state"})
    assert reply[0] == {
        "type": "error", "code": "no_session", "message": "send a start message first",
    }


def test_error_for_unknown_algorithm():
    handler = ProtocolHandler()
    reply = handler.handle({"type": "start", "algo": "bogus", "input": [1]})
    assert reply[0]["type"] == "error"
    assert reply[0]["code"] == "unknown_algorithm"


def test_bad_json_line():
    handler = ProtocolHandler()
    replies = handler.handle_line("{nope")
    assert json.loads(replies[0])["code"] == "bad_message"


def test_ask_error_as_structured_message():
    handler = ProtocolHandler()
    handler.handle({"type": "start", "algo": "quicksort", "input": [3, 8, 2]})
    reply = handler.handle({"type": "ask", "text": "What should I do?"})
    assert reply[0]["type"] == "error"
    assert reply[0]["code"] == "unclassifiable"


def test_empty_run_snapshot_is_null():
    handler = ProtocolHandler()
    replies = handler.handle({"type": "start", "algo": "quicksort", "input": []})
    assert [r["type"] for r in replies] == ["started"]
    state = handler.handle({"type": "state"})
    assert state[0]["snapshot"] is None


def test_log_flushed_on_close(tmp_path):
    handler = ProtocolHandler(log_dir=tmp_path)
    handler.handle({"type": "start", "algo": "quicksort", "input": [3, 8, 2]})
    handler.handle({"type": "ask", "text": "What is a pivot?"})
    handler.close()
    logs = list(tmp_path.glob("*.jsonl"))
    assert len(logs) == 1
    record = json.loads(logs[0].read_text().splitlines()[0])
    assert record["question"] == "What is a pivot?"


def test_encode_is_canonical():
    assert encode({"b": 1, "a": 2}) == '{"a":2,"b":1}'
