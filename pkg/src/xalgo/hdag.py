"""Hierarchical state graph built from an algorithm definition.

Construction rules:

* the definition itself is the root hierarchy, and every loop, conditional
  or recursion statement opens a child hierarchy (a ``dagRoot`` node) under
  its enclosing one;
* every state-changing statement (assignments and swaps) becomes a leaf
  ``stateNode`` under its enclosing hierarchy.

Because each statement contributes at most one node, node ids reuse the
statement ids; the root reuses the definition name. Each node carries the
slots the answer composer reads: objects (symbolic operand labels), a values
template that the tracer binds per snapshot, an action kind and the goal
annotation. Per design, stateNodes carry an empty goal and defer to their
ancestors; dagRoots carry the goal of their statement.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expressions as ex
from .errors import InvalidDefinition, UnknownNode
from .ir import AlgorithmDef, HIERARCHY_KINDS, Statement, validate

DAG_ROOT = "dagRoot"
STATE_NODE = "stateNode"

ACTION_NONE = "none"
ACTION_SELECT = "select"
ACTION_ASSIGN = "assign"
ACTION_INCREMENT = "increment"
ACTION_SWAP = "swap"
ACTION_COMPARE = "compare"


@dataclass(frozen=True)
class HdagNode:
    id: str
    statement_id: str
    statement_kind: str
    kind: str
    action: str
    objects: tuple[str, ...]
    goal: str = ""
    condition: ex.Expr | None = None
    source_text: str = ""

    @property
    def values(self) -> dict[str, int | None]:
        """Value template; concrete numbers are bound per snapshot at trace time."""
        return {label: None for label in self.objects}


@dataclass
class Hdag:
    algo_name: str
    root: str
    nodes: dict[str, HdagNode]
    children: dict[str, tuple[str, ...]]
    parent_of: dict[str, str]
    dag_of: dict[str, str]

    def node(self, node_id: str) -> HdagNode:
        if node_id not in self.nodes:
            raise UnknownNode(f"no node {node_id!r}")
        return self.nodes[node_id]

    def parent(self, node_id: str) -> str | None:
        """The unique parent, or None for the root."""
        self.node(node_id)
        return self.parent_of.get(node_id)

    def ancestors(self, node_id: str):
        """Parents walking upward, nearest first."""
        current = self.parent(node_id)
        while current is not None:
            yield current
            current = self.parent_of.get(current)

    def enclosing_conditional(self, node_id: str) -> str | None:
        """Nearest conditional hierarchy at or above the node, None if absent."""
        if self.node(node_id).statement_kind == "conditional":
            return node_id
        for anc in self.ancestors(node_id):
            if self.nodes[anc].statement_kind == "conditional":
                return anc
        return None

    def nearest_hierarchy_ancestor(self, node_id: str, kinds=("loop", "recursion")) -> str | None:
        """Nearest strict ancestor whose statement kind is in ``kinds``."""
        self.node(node_id)
        for anc in self.ancestors(node_id):
            if self.nodes[anc].statement_kind in kinds:
                return anc
        return None

    def dag_roots(self) -> list[str]:
        """Child-DAG roots, excluding the root hierarchy itself."""
        return [n.id for n in self.nodes.values() if n.kind == DAG_ROOT and n.id != self.root]

    def iter_dfs(self):
        stack = [self.root]
        while stack:
            node_id = stack.pop()
            yield node_id
            stack.extend(reversed(self.children.get(node_id, ())))

    def to_dot(self) -> str:
        lines = ["digraph hdag {", "  rankdir=TB;"]
        for node_id in self.iter_dfs():
            node = self.nodes[node_id]
            label = node.statement_id
            if node.goal:
                label += r"\n" + node.goal
            shape = "box" if node.kind == DAG_ROOT else "ellipse"
            lines.append(f'  "{node_id}" [shape={shape}, label="{label}"];')
        for node_id in self.iter_dfs():
            for child in self.children.get(node_id, ()):
                lines.append(f'  "{node_id}" -> "{child}";')
        lines.append("}")
        return "\n".join(lines)


def build_hdag(algo: AlgorithmDef) -> Hdag:
    """Apply the construction rules to a validated definition."""
    diagnostics = validate(algo)
    if diagnostics:
        raise InvalidDefinition("definition failed validation: " + "; ".join(map(str, diagnostics)))

    nodes: dict[str, HdagNode] = {}
    children: dict[str, list[str]] = {}
    parent_of: dict[str, str] = {}
    dag_of: dict[str, str] = {}

    root = HdagNode(
        id=algo.name,
        statement_id=algo.name,
        statement_kind="definition",
        kind=DAG_ROOT,
        action=ACTION_NONE,
        objects=tuple(algo.params),
        goal=algo.goal,
    )
    nodes[root.id] = root
    children[root.id] = []
    dag_of[root.id] = root.id

    def attach(node: HdagNode, hierarchy: str):
        nodes[node.id] = node
        children.setdefault(node.id, [])
        children[hierarchy].append(node.id)
        parent_of[node.id] = hierarchy
        dag_of[node.id] = node.id if node.kind == DAG_ROOT else hierarchy

    def walk(statements: tuple[Statement, ...], hierarchy: str):
        for stmt in statements:
            if stmt.kind in HIERARCHY_KINDS:
                node = _hierarchy_node(stmt)
                attach(node, hierarchy)
                walk(stmt.children, node.id)
            elif stmt.state_changing:
                attach(_state_node(stmt), hierarchy)
            # returns and noops leave no mark on the graph

    walk(algo.statements, root.id)
    return Hdag(
        algo_name=algo.name,
        root=root.id,
        nodes=nodes,
        children={k: tuple(v) for k, v in children.items()},
        parent_of=parent_of,
        dag_of=dag_of,
    )


def _hierarchy_node(stmt: Statement) -> HdagNode:
    if stmt.kind == "conditional":
        action = ACTION_COMPARE
        objects = (ex.to_infix(stmt.condition.left), ex.to_infix(stmt.condition.right))
    elif stmt.kind == "loop":
        action = ACTION_NONE
        objects = (stmt.iterator,)
    else:  # recursion
        action = ACTION_NONE
        objects = tuple(k for k, _ in stmt.args)
    return HdagNode(
        id=stmt.id,
        statement_id=stmt.id,
        statement_kind=stmt.kind,
        kind=DAG_ROOT,
        action=action,
        objects=objects,
        goal=stmt.goal,
        condition=stmt.condition,
        source_text=stmt.source_text,
    )


def _state_node(stmt: Statement) -> HdagNode:
    if stmt.kind == "swap":
        action = ACTION_SWAP
        objects = (ex.to_infix(stmt.left), ex.to_infix(stmt.right))
    else:
        objects = (stmt.target,)
        if isinstance(stmt.value, ex.Index):
            action = ACTION_SELECT
            objects = (stmt.target, ex.to_infix(stmt.value))
        elif _is_increment(stmt):
            action = ACTION_INCREMENT
        else:
            action = ACTION_ASSIGN
    return HdagNode(
        id=stmt.id,
        statement_id=stmt.id,
        statement_kind=stmt.kind,
        kind=STATE_NODE,
        action=action,
        objects=objects,
        goal="",  # stateNodes defer to ancestor goals
        source_text=stmt.source_text,
    )


def _is_increment(stmt: Statement) -> bool:
    value = stmt.value
    if not isinstance(value, ex.Arith) or value.op != "+":
        return False
    operands = (value.left, value.right)
    return ex.Const(1) in operands and ex.Var(stmt.target) in operands
