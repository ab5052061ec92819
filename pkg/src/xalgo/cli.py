"""Command-line interface.

Subcommands: hdag (graph inspection), trace (offline trace dumps),
classify (question debugging), repl (interactive Q&A), serve (WebSocket
service), report (log aggregation).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import protocol, qparse, session as session_mod
from .errors import XAlgoError
from .hdag import build_hdag
from .ir import listing, load_algorithm
from .tracer import DEFAULT_STEP_BUDGET, run


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except XAlgoError as err:
        print(f"error [{err.code}]: {err}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xalgo")
    sub = parser.add_subparsers(dest="command")

    p_hdag = sub.add_parser("hdag", help="build and inspect the state graph")
    p_hdag.add_argument("--algo", required=True, help="algorithm name or definition file")
    p_hdag.add_argument("--dot", action="store_true", help="emit DOT instead of a node table")
    p_hdag.set_defaults(func=cmd_hdag)

    p_trace = sub.add_parser("trace", help="run an input and dump the trace")
    p_trace.add_argument("--algo", required=True)
    p_trace.add_argument("--input", required=True, help="comma-separated integers")
    p_trace.add_argument("--format", choices=["text", "jsonl"], default="text")
    p_trace.add_argument("--step-budget", type=int, default=DEFAULT_STEP_BUDGET)
    p_trace.set_defaults(func=cmd_trace)

    p_classify = sub.add_parser("classify", help="print features and types for a question")
    p_classify.add_argument("question")
    p_classify.add_argument("--algo", default="quicksort")
    p_classify.add_argument("--input", default="", help="optional array for element resolution")
    p_classify.set_defaults(func=cmd_classify)

    p_repl = sub.add_parser("repl", help="interactive question answering")
    p_repl.add_argument("--algo", required=True)
    p_repl.add_argument("--input", required=True)
    p_repl.add_argument("--algos", default=None, help="directory of definition files")
    p_repl.add_argument("--concepts", default=None, help="directory of concept tables")
    p_repl.add_argument("--log-dir", default=None)
    p_repl.add_argument("--json", action="store_true",
                        help="speak raw protocol messages over stdin/stdout")
    p_repl.set_defaults(func=cmd_repl)

    p_serve = sub.add_parser("serve", help="run the WebSocket session service")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--algos", default=None)
    p_serve.add_argument("--concepts", default=None)
    p_serve.add_argument("--log-dir", default=None)
    p_serve.set_defaults(func=cmd_serve)

    p_report = sub.add_parser("report", help="aggregate a question log")
    p_report.add_argument("--log", required=True)
    p_report.set_defaults(func=cmd_report)

    return parser


def _load(algo: str):
    return load_algorithm(session_mod.resolve_algorithm(algo))


def cmd_hdag(args) -> int:
    algo = _load(args.algo)
    graph = build_hdag(algo)
    if args.dot:
        print(graph.to_dot())
        return 0
    print(f"{algo.name}: {len(graph.nodes)} nodes, {len(graph.dag_roots())} child hierarchies")
    for node_id in graph.iter_dfs():
        node = graph.nodes[node_id]
        parent = graph.parent_of.get(node_id, "-")
        goal = f"  goal: {node.goal}" if node.goal else ""
        print(f"  {node_id:<14} {node.kind:<10} action={node.action:<10} parent={parent}{goal}")
    return 0


def cmd_trace(args) -> int:
    algo = _load(args.algo)
    graph = build_hdag(algo)
    values = session_mod.parse_input_csv(args.input)
    trace = run(algo, graph, values, step_budget=args.step_budget)
    if args.format == "jsonl":
        for snap in trace.snapshots:
            print(json.dumps(protocol.serialize_snapshot(snap), sort_keys=True))
        return 0
    print(f"{algo.name} on {values}: {len(trace.snapshots)} steps")
    for snap in trace.snapshots:
        record = snap.action_record
        detail = ", ".join(f"{label}={value}" for label, value in record.objects)
        print(f"  [{snap.step_index:>3}] {snap.node_id:<14} {record.action:<10} "
              f"{detail:<28} data={list(snap.data_state)}")
    print(f"final: {list(trace.final_state)}")
    return 0


def cmd_classify(args) -> int:
    algo = _load(args.algo)
    kb = session_mod.resolve_concepts(algo.name)
    variables = {algo.input.name} | set(algo.params)
    for stmt in _all_statements(algo.statements):
        if stmt.target:
            variables.add(stmt.target)
        if stmt.iterator:
            variables.add(stmt.iterator)
    elements = set(session_mod.parse_input_csv(args.input)) if args.input else set()
    concepts = {entry.term for entry in kb}
    for entry in kb:
        concepts.update(entry.aliases)
    vocabulary = qparse.Vocabulary(variables=variables, elements=elements, concepts=concepts)

    features = qparse.extract_features(args.question, vocabulary)
    print(json.dumps(features.to_dict(), indent=2, sort_keys=True))
    hit = qparse.match_concept(features, kb)
    if hit:
        print(f"concept match: {hit.entry.term} (exact={hit.exact}, score={hit.score:.2f})")
    types = qparse.classify(features, hit, vocabulary)
    print("types:", sorted(t.value for t in types))
    return 0


def _all_statements(statements):
    for stmt in statements:
        yield stmt
        yield from _all_statements(stmt.children)


def cmd_repl(args) -> int:
    handler = protocol.ProtocolHandler(
        algos_dir=args.algos, concepts_dir=args.concepts, log_dir=args.log_dir
    )
    start = {"type": "start", "algo": args.algo,
             "input": session_mod.parse_input_csv(args.input)}
    if args.json:
        for line in handler.handle(start):
            print(protocol.encode(line))
        for raw in sys.stdin:
            raw = raw.strip()
            if not raw:
                continue
            for reply in handler.handle_line(raw):
                print(reply)
            sys.stdout.flush()
        handler.close()
        return 0

    replies = handler.handle(start)
    _render_replies(handler, replies)
    print("ask a question, or :step :back :goto N :state :quit")
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            break
        if not line:
            continue
        if line in (":quit", ":q"):
            break
        message = _command_to_message(line)
        _render_replies(handler, handler.handle(message))
    handler.close()
    return 0


def _command_to_message(line: str) -> dict:
    if line.startswith(":step"):
        parts = line.split()
        count = int(parts[1]) if len(parts) > 1 else 1
        return {"type": "step", "direction": "forward", "count": count}
    if line.startswith(":back"):
        parts = line.split()
        count = int(parts[1]) if len(parts) > 1 else 1
        return {"type": "step", "direction": "back", "count": count}
    if line.startswith(":goto"):
        parts = line.split()
        target = parts[1] if len(parts) > 1 else "0"
        return {"type": "goto", "step": "last" if target == "last" else int(target)}
    if line == ":state":
        return {"type": "state"}
    return {"type": "ask", "text": line}


def _render_replies(handler: protocol.ProtocolHandler, replies: list[dict]):
    for reply in replies:
        kind = reply.get("type")
        if kind == "started":
            summary = reply["summary"]
            print(f"{summary['algo']} on {summary['input']}: "
                  f"{summary['steps']} steps, final {summary['finalData']}")
        elif kind == "snapshot":
            snap = reply.get("snapshot")
            if snap is None:
                print("(no steps: empty run)")
                continue
            total = len(handler.session.trace.snapshots)
            source = _source_of(handler, snap["statement"])
            bind = " ".join(f"{k}={v}" for k, v in sorted(snap["bindings"].items()))
            print(f"step {snap['step'] + 1}/{total}  data={snap['data']}  {bind}")
            print(f"  at [{snap['statement']}] {source}")
        elif kind == "answer":
            print(reply["answer"]["text"])
        elif kind == "error":
            print(f"({reply['code']}) {reply['message']}")


def _source_of(handler: protocol.ProtocolHandler, statement_id: str) -> str:
    for row in listing(handler.session.algorithm):
        if row["statement"] == statement_id:
            return row["source"]
    return ""


def cmd_serve(args) -> int:
    from .service import serve

    serve(port=args.port, host=args.host, algos_dir=args.algos,
          concepts_dir=args.concepts, log_dir=args.log_dir)
    return 0


def cmd_report(args) -> int:
    lines = Path(args.log).read_text().splitlines()
    print(session_mod.format_report(session_mod.aggregate_log(lines)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
