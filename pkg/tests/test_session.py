import json
from pathlib import Path

import pytest

from xalgo import create_session
from xalgo.errors import BadInput, NoMatchingState, Unclassifiable, UnknownAlgorithm
from xalgo.session import aggregate_log, format_report, parse_input_csv

CORPUS = json.loads(
    (Path(__file__).parent / "corpus" / "paper_questions.json").read_text()
)["questions"]


def test_create_session_golden(session382):
    assert session382.cursor == 0
    assert list(session382.trace.final_state) == [2, 3, 8]
    assert len(session382.trace.snapshots) == 9


def test_create_session_empty_input():
    session = create_session("quicksort", [])
    assert session.cursor == 0
    assert session.trace.snapshots == []
    assert session.snapshot() is None


def test_create_session_unknown_algorithm():
    with pytest.raises(UnknownAlgorithm):
        create_session("bogus", [1])


def test_create_session_bad_input():
    with pytest.raises(BadInput):
        create_session("quicksort", "3,x,2")
    with pytest.raises(BadInput):
        create_session("quicksort", [1, "two"])


def test_parse_input_csv():
    assert parse_input_csv("3, 8, 2") == [3, 8, 2]
    assert parse_input_csv("") == []


def test_step_and_goto_clamping(session382):
    assert session382.step("forward", 1).step_index == 1
    assert session382.step("back", 5).step_index == 0
    assert session382.goto("last").step_index == 8
    assert session382.goto(99).step_index == 8
    assert session382.goto(-3).step_index == 0


def test_goto_last_is_sorted(session382):
    snap = session382.goto("last")
    assert list(snap.data_state) == sorted(session382.trace.input)


def test_ask_merged_answer_at_swap_step(session382):
    session382.goto(6)
    result = session382.ask("Why did 8 and 2 move?")
    assert len(result.units) == 3
    assert sorted(t.value for t in result.types) == ["Causality", "Rationale"]


def test_ask_concept_anywhere(session382):
    result = session382.ask("What is a pivot?")
    assert [t.value for t in result.types] == ["Concept"]
    assert result.step_used is None


def test_ask_refusal_logged(session382):
    with pytest.raises(Unclassifiable):
        session382.ask("What should I do?")
    record = session382.qa_log[-1]
    assert record.error is not None
    assert record.error["code"] == "unclassifiable"


def test_ask_on_empty_trace():
    session = create_session("quicksort", [])
    assert session.ask("What is a pivot?").text  # concept path still works
    with pytest.raises(NoMatchingState):
        session.ask("What is happening right now?")


def test_qalog_appends_in_order(session382):
    session382.ask("What is a pivot?")
    session382.goto(6)
    session382.ask("Why did 8 and 2 move?")
    try:
        session382.ask("What should I do?")
    except Unclassifiable:
        pass
    assert [r.question for r in session382.qa_log] == [
        "What is a pivot?",
        "Why did 8 and 2 move?",
        "What should I do?",
    ]


def test_export_log_one_record_per_question(session382):
    session382.ask("What is a pivot?")
    session382.ask("What is a swap?")
    session382.goto(6)
    session382.ask("Is storeIndex incremented after swap?")
    lines = session382.export_log().strip().splitlines()
    assert len(lines) == 3
    parsed = [json.loads(line) for line in lines]
    assert parsed[0]["question"] == "What is a pivot?"
    assert parsed[2]["types"] == ["Confirmation"]


def test_log_answers_match_returned(session382):
    session382.goto(6)
    result = session382.ask("Why did 8 and 2 move?")
    record = json.loads(session382.export_log().strip().splitlines()[-1])
    assert record["answer"]["text"] == result.text


def test_report_over_replayed_corpus(session382):
    for item in CORPUS:
        try:
            session382.ask(item["text"])
        except Exception:
            pass
    aggregate = aggregate_log(session382.export_log().splitlines())
    assert set(aggregate["types"]) == {
        "Concept", "Description", "Confirmation", "Causality", "Rationale", "Contrast",
    }
    assert aggregate["types"]["Concept"] == 4
    assert aggregate["types"]["Causality"] == 2
    assert aggregate["types"]["Rationale"] == 2
    assert aggregate["types"]["Confirmation"] == 1
    assert aggregate["types"]["Contrast"] == 1
    assert aggregate["types"]["Description"] == 0
    assert aggregate["answered"] == 8
    assert aggregate["excluded"] == 1


def test_report_empty_log():
    aggregate = aggregate_log([])
    assert aggregate["answered"] == 0
    assert aggregate["excluded"] == 0
    assert all(count == 0 for count in aggregate["types"].values())
    assert "answered" in format_report(aggregate)


def test_session_isolation():
    a = create_session("quicksort", [3, 8, 2])
    b = create_session("quicksort", [3, 8, 2])
    a.goto(6)
    a.ask("Why did 8 and 2 move?")
    assert b.cursor == 0
    assert b.qa_log == []
