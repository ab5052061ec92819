import json

import pytest

from xalgo import parse_algorithm, serialize_algorithm, validate
from xalgo.errors import DefinitionSyntaxError, ValidationError
from xalgo.ir import iter_statements, listing


def minimal_doc(**overrides):
    doc = {
        "name": "demo",
        "params": [],
        "input": {"kind": "array-of-integers", "name": "a", "entry": {}},
        "statements": [],
    }
    doc.update(overrides)
    return doc


def test_quicksort_definition_shape(quicksort_def):
    # one loop with one conditional nested inside it, plus two recursions
    kinds = [s.kind for s in iter_statements(quicksort_def)]
    assert kinds.count("loop") == 1
    assert kinds.count("conditional") == 1
    assert kinds.count("recursion") == 2
    loop = next(s for s in quicksort_def.statements if s.kind == "loop")
    assert loop.children[0].kind == "conditional"


def test_quicksort_validates_clean(quicksort_def):
    assert validate(quicksort_def) == []


def test_empty_body_is_valid():
    algo = parse_algorithm(minimal_doc())
    assert algo.statements == ()
    assert validate(algo) == []


def test_missing_goal_on_conditional_rejected():
    doc = minimal_doc(
        statements=[
            {
                "id": "c1",
                "kind": "conditional",
                "condition": "(< 1 2)",
                "children": [],
            }
        ]
    )
    with pytest.raises(ValidationError) as err:
        parse_algorithm(doc)
    assert any(d.statement_id == "c1" and "goal" in d.message for d in err.value.diagnostics)


def test_dangling_reference_diagnostic():
    doc = minimal_doc(
        statements=[
            {"id": "s1", "kind": "swap", "left": "(at a q)", "right": "(at a 0)"}
        ]
    )
    with pytest.raises(ValidationError) as err:
        parse_algorithm(doc)
    messages = [d.message for d in err.value.diagnostics]
    assert any("dangling reference to 'q'" in m for m in messages)


def test_duplicate_id_single_diagnostic():
    doc = minimal_doc(
        statements=[
            {"id": "s3", "kind": "assignment", "target": "x", "value": "1"},
            {"id": "s3", "kind": "assignment", "target": "y", "value": "2"},
        ]
    )
    with pytest.raises(ValidationError) as err:
        parse_algorithm(doc)
    dup = [d for d in err.value.diagnostics if "duplicate" in d.message]
    assert len(dup) == 1 and dup[0].statement_id == "s3"


def test_state_changing_mismatch_diagnostic():
    doc = minimal_doc(
        statements=[
            {"id": "s1", "kind": "assignment", "target": "x", "value": "1",
             "stateChanging": False}
        ]
    )
    with pytest.raises(ValidationError) as err:
        parse_algorithm(doc)
    assert any("stateChanging" in d.message for d in err.value.diagnostics)


def test_children_only_on_hierarchy_kinds():
    doc = minimal_doc(
        statements=[
            {"id": "s1", "kind": "assignment", "target": "x", "value": "1",
             "children": [{"id": "s2", "kind": "noop"}]}
        ]
    )
    with pytest.raises(ValidationError) as err:
        parse_algorithm(doc)
    assert any("cannot have children" in d.message for d in err.value.diagnostics)


def test_recursion_target_must_name_definition():
    doc = minimal_doc(
        params=["lo", "hi"],
        input={"kind": "array-of-integers", "name": "a",
               "entry": {"lo": "0", "hi": "(- n 1)"}},
        statements=[
            {"id": "r1", "kind": "recursion", "target": "other", "goal": "g",
             "args": {"lo": "lo", "hi": "hi"}}
        ],
    )
    with pytest.raises(ValidationError) as err:
        parse_algorithm(doc)
    assert any("does not name this definition" in d.message for d in err.value.diagnostics)


def test_malformed_json_reports_position():
    with pytest.raises(DefinitionSyntaxError) as err:
        parse_algorithm("{\n  \"name\": }")
    assert err.value.line == 2


def test_unknown_fields_rejected():
    with pytest.raises(DefinitionSyntaxError):
        parse_algorithm(minimal_doc(bogus=1))
    doc = minimal_doc(statements=[{"id": "s1", "kind": "noop", "wat": 1}])
    with pytest.raises(DefinitionSyntaxError):
        parse_algorithm(doc)


def test_parse_serialize_identity(quicksort_def):
    doc = serialize_algorithm(quicksort_def)
    assert parse_algorithm(json.dumps(doc)) == quicksort_def


def test_diagnostics_deterministic():
    doc = minimal_doc(
        statements=[
            {"id": "s1", "kind": "swap", "left": "(at a q)", "right": "(at a r)"},
            {"id": "s1", "kind": "noop"},
        ]
    )
    def collect():
        try:
            parse_algorithm(json.dumps(doc))
        except ValidationError as err:
            return [str(d) for d in err.diagnostics]
    assert collect() == collect()


def test_state_changing_derivation(quicksort_def):
    for stmt in iter_statements(quicksort_def):
        expected = stmt.kind in ("assignment", "swap")
        assert stmt.state_changing is expected, stmt.id


def test_listing_covers_every_statement(quicksort_def):
    rows = listing(quicksort_def)
    ids = [row["statement"] for row in rows]
    assert ids[0] == "quicksort"
    for stmt in iter_statements(quicksort_def):
        assert stmt.id in ids
    loop_row = next(r for r in rows if r["statement"] == "part_loop")
    swap_row = next(r for r in rows if r["statement"] == "swap_small")
    assert swap_row["indent"] == loop_row["indent"] + 2
