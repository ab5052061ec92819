import json
import random
from pathlib import Path

import pytest

from xalgo import build_hdag, parse_algorithm
from xalgo.errors import InvalidDefinition, UnknownNode
from xalgo.hdag import DAG_ROOT, STATE_NODE

GOLDEN = json.loads((Path(__file__).parent / "data" / "quicksort_hdag_golden.json").read_text())


def test_golden_node_listing(quicksort_hdag):
    graph = quicksort_hdag
    assert graph.root == GOLDEN["root"]
    assert len(graph.nodes) == GOLDEN["node_count"]
    assert set(graph.nodes) == set(GOLDEN["nodes"])
    for node_id, expect in GOLDEN["nodes"].items():
        node = graph.nodes[node_id]
        assert node.kind == expect["kind"], node_id
        assert node.action == expect["action"], node_id
        assert graph.parent_of.get(node_id) == expect["parent"], node_id
    for node_id, expect_children in GOLDEN["children"].items():
        assert list(graph.children.get(node_id, ())) == expect_children, node_id


def test_child_dags_match_hierarchy_statements(quicksort_hdag):
    assert quicksort_hdag.dag_roots() == GOLDEN["child_dag_roots"]


def test_parent_examples(quicksort_hdag):
    assert quicksort_hdag.parent("swap_small") == "cmp_pivot"
    assert quicksort_hdag.parent("cmp_pivot") == "part_loop"
    assert quicksort_hdag.parent("quicksort") is None


def test_parent_unknown_node(quicksort_hdag):
    with pytest.raises(UnknownNode):
        quicksort_hdag.parent("nope")


def test_enclosing_conditional(quicksort_hdag):
    assert quicksort_hdag.enclosing_conditional("swap_small") == "cmp_pivot"
    assert quicksort_hdag.enclosing_conditional("select_pivot") is None
    assert quicksort_hdag.enclosing_conditional("place_pivot") is None


def test_enclosing_conditional_nested_ifs():
    doc = {
        "name": "nested",
        "params": ["lo", "hi"],
        "input": {"kind": "array-of-integers", "name": "a",
                  "entry": {"lo": "0", "hi": "(- n 1)"}},
        "statements": [
            {"id": "outer_loop", "kind": "loop", "iterator": "i", "from": "lo", "to": "hi",
             "goal": "walk the range", "children": [
                 {"id": "if_outer", "kind": "conditional", "condition": "(< i hi)",
                  "goal": "outer check", "children": [
                      {"id": "if_inner", "kind": "conditional", "condition": "(> i lo)",
                       "goal": "inner check", "children": [
                           {"id": "do_swap", "kind": "swap",
                            "left": "(at a i)", "right": "(at a lo)"}
                       ]}
                  ]}
             ]}
        ],
    }
    graph = build_hdag(parse_algorithm(doc))
    assert graph.enclosing_conditional("do_swap") == "if_inner"
    # a conditional node is its own nearest conditional
    assert graph.enclosing_conditional("if_inner") == "if_inner"


def test_build_rejects_invalid_definition():
    # goal missing on the conditional: parse_algorithm would refuse, and
    # build_hdag refuses the unvalidated definition too
    from xalgo.ir import _def_from_doc

    doc = {
        "name": "bad",
        "params": [],
        "input": {"kind": "array-of-integers", "name": "a", "entry": {}},
        "statements": [
            {"id": "c", "kind": "conditional", "condition": "(< 1 2)", "children": []}
        ],
    }
    with pytest.raises(InvalidDefinition):
        build_hdag(_def_from_doc(doc))


def test_single_swap_no_hierarchies():
    doc = {
        "name": "onestep",
        "params": [],
        "input": {"kind": "array-of-integers", "name": "a", "entry": {}},
        "statements": [
            {"id": "s", "kind": "swap", "left": "(at a 0)", "right": "(at a 1)"}
        ],
    }
    graph = build_hdag(parse_algorithm(doc))
    assert set(graph.nodes) == {"onestep", "s"}
    assert graph.dag_roots() == []
    assert graph.nodes["s"].kind == STATE_NODE


def test_dot_output(quicksort_hdag):
    dot = quicksort_hdag.to_dot()
    assert dot.startswith("digraph")
    assert '"part_loop" -> "cmp_pivot";' in dot
    assert "sort the pivot" in dot  # goals appear in labels


def test_state_node_goals_empty_dag_root_goals_set(quicksort_hdag):
    for node in quicksort_hdag.nodes.values():
        if node.kind == STATE_NODE:
            assert node.goal == ""
        else:
            assert node.goal


def test_deterministic_construction(quicksort_def):
    assert build_hdag(quicksort_def) == build_hdag(quicksort_def)


# ---------------------------------------------------------------------------
# randomized structural properties over a test-side grammar


def random_definition(rng: random.Random) -> tuple[dict, int]:
    """Small random valid definition; returns (doc, hierarchy statement count)."""
    counter = {"id": 0, "hier": 0, "var": 0}

    def fresh(prefix):
        counter["id"] += 1
        return f"{prefix}{counter['id']}"

    def expr_over(names):
        name = rng.choice(sorted(names) + [str(rng.randint(0, 9))])
        if rng.random() < 0.3:
            return f"(+ {name} 1)"
        return name

    def gen_block(depth, scope, budget):
        statements = []
        for _ in range(rng.randint(1, 3)):
            if budget[0] <= 0:
                return statements
            budget[0] -= 1
            kinds = ["assignment", "swap", "noop"]
            if depth < 3:
                kinds += ["loop", "conditional"]
            kinds += ["recursion"]
            kind = rng.choice(kinds)
            if kind == "assignment":
                counter["var"] += 1
                target = f"v{counter['var']}"
                statements.append({
                    "id": fresh("s"), "kind": "assignment",
                    "target": target, "value": expr_over(scope),
                })
                scope = scope | {target}
            elif kind == "swap":
                statements.append({
                    "id": fresh("s"), "kind": "swap",
                    "left": f"(at a {expr_over(scope)})",
                    "right": f"(at a {expr_over(scope)})",
                })
            elif kind == "noop":
                statements.append({"id": fresh("s"), "kind": "noop"})
            elif kind == "loop":
                counter["hier"] += 1
                it = fresh("k")
                statements.append({
                    "id": fresh("s"), "kind": "loop", "iterator": it,
                    "from": expr_over(scope), "to": expr_over(scope),
                    "goal": "iterate",
                    "children": gen_block(depth + 1, scope | {it}, budget),
                })
            elif kind == "conditional":
                counter["hier"] += 1
                statements.append({
                    "id": fresh("s"), "kind": "conditional",
                    "condition": f"(< {expr_over(scope)} {expr_over(scope)})",
                    "goal": "branch",
                    "children": gen_block(depth + 1, scope, budget),
                })
            else:
                counter["hier"] += 1
                statements.append({
                    "id": fresh("s"), "kind": "recursion", "target": "rnd",
                    "goal": "recurse",
                    "args": {"lo": expr_over(scope), "hi": expr_over(scope)},
                })
        return statements

    doc = {
        "name": "rnd",
        "params": ["lo", "hi"],
        "input": {"kind": "array-of-integers", "name": "a",
                  "entry": {"lo": "0", "hi": "(- n 1)"}},
        "guard": "(< lo hi)",
        "statements": gen_block(0, {"lo", "hi"}, [rng.randint(3, 12)]),
    }
    return doc, counter["hier"]


@pytest.mark.parametrize("seed", range(50))
def test_hierarchy_count_matches_statements(seed):
    doc, hierarchy_count = random_definition(random.Random(seed))
    graph = build_hdag(parse_algorithm(doc))
    assert len(graph.dag_roots()) == hierarchy_count


@pytest.mark.parametrize("seed", range(50))
def test_structure_invariants(seed):
    doc, _ = random_definition(random.Random(seed))
    graph = build_hdag(parse_algorithm(doc))
    # DFS from the root visits each node exactly once (acyclic, single parent)
    visited = list(graph.iter_dfs())
    assert sorted(visited) == sorted(graph.nodes)
    assert len(set(visited)) == len(visited)
    # parent/children consistency
    for parent, kids in graph.children.items():
        for kid in kids:
            assert graph.parent_of[kid] == parent
    for node_id, parent in graph.parent_of.items():
        assert node_id in graph.children[parent]
    # every leaf is a state-changing statement's node or a hierarchy root
    for node_id, node in graph.nodes.items():
        if not graph.children.get(node_id):
            assert node.kind == STATE_NODE or node.kind == DAG_ROOT
