import json

from fastapi.testclient import TestClient

from xalgo.service import create_app


def test_healthz():
    client = TestClient(create_app())
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_websocket_session_round_trip():
    client = TestClient(create_app())
    with client.websocket_connect("/ws") as ws:
        ws.send_text(json.dumps({"type": "start", "algo": "quicksort", "input": [3, 8, 2]}))
        started = json.loads(ws.receive_text())
        assert started["type"] == "started"
        pushed = json.loads(ws.receive_text())
        assert pushed["type"] == "snapshot" and pushed["snapshot"]["step"] == 0

        ws.send_text(json.dumps({"type": "goto", "step": 6}))
        snap = json.loads(ws.receive_text())
        assert snap["snapshot"]["data"] == [3, 2, 8]
        assert snap["highlight"] == "swap_small"

        ws.send_text(json.dumps({"type": "ask", "text": "Why did 8 and 2 move?"}))
        answer = json.loads(ws.receive_text())
        assert answer["type"] == "answer"
        assert len(answer["answer"]["units"]) == 3

        ws.send_text(json.dumps({"type": "ask", "text": "What should I do?"}))
        refusal = json.loads(ws.receive_text())
        assert refusal["type"] == "error" and refusal["code"] == "unclassifiable"


def test_websocket_sessions_are_isolated():
    client = TestClient(create_app())
    with client.websocket_connect("/ws") as first, client.websocket_connect("/ws") as second:
        first.send_text(json.dumps({"type": "start", "algo": "quicksort", "input": [3, 8, 2]}))
        first.receive_text()
        first.receive_text()
        first.send_text(json.dumps({"type": "goto", "step": 6}))
        first.receive_text()

        second.send_text(json.dumps({"type": "start", "algo": "quicksort", "input": [3, 8, 2]}))
        second.receive_text()
        second.receive_text()
        second.send_text(json.dumps({"type": "state"}))
        snap = json.loads(second.receive_text())
        assert snap["snapshot"]["step"] == 0


def test_websocket_writes_log_on_disconnect(tmp_path):
    client = TestClient(create_app(log_dir=tmp_path))
    with client.websocket_connect("/ws") as ws:
        ws.send_text(json.dumps({"type": "start", "algo": "quicksort", "input": [3, 8, 2]}))
        ws.receive_text()
        ws.receive_text()
        ws.send_text(json.dumps({"type": "ask", "text": "What is a swap?"}))
        ws.receive_text()
    logs = list(tmp_path.glob("*.jsonl"))
    assert len(logs) == 1
    assert json.loads(logs[0].read_text().splitlines()[0])["question"] == "What is a swap?"
