"""Command-line interface: check, eval, ask, export, serve.

Models and instances are addressed either by file path (anything ending in
.dm / .json that exists) or by name inside the workspace directory
(--workspace, or the EXPLAINEO_WORKSPACE environment variable).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import engine
from .builder import build_model_graph, instantiate
from .dsl import DecisionModel, ModelError, parse_model
from .explain import (
    CATALOGUE, Context, QTypeNotAllowed, Question, QuestionError, ask,
    default_profile_for, get_profile,
)
from .explain.answers import VIEW_FILTERS
from .graph import GraphError, PropertyGraph
from .render import (
    export_graph_script, render_dot, render_report_text, render_tables,
    render_text,
)
from .verification import VerificationError, run_all_checks
from .workspace import (
    NotFound, Workspace, WorkspaceError, default_workspace_path,
)


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


def _write_output(text: str, outfile: str | None) -> None:
    if outfile:
        Path(outfile).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


class CliError(Exception):
    pass


def _workspace(args) -> Workspace:
    return Workspace(args.workspace or default_workspace_path())


def _load_model(args, ref: str) -> DecisionModel:
    path = Path(ref)
    if ref.endswith(".dm") or path.exists():
        if not path.exists():
            raise CliError(f"model file {ref!r} does not exist")
        return parse_model(path.read_text(encoding="utf-8"))
    model, _, _ = _workspace(args).get_model(ref)
    return model


def _load_instance(args, model: DecisionModel, ref: str) -> engine.DecisionInstance:
    path = Path(ref)
    if ref.endswith(".json") or path.exists():
        if not path.exists():
            raise CliError(f"instance file {ref!r} does not exist")
        doc = json.loads(path.read_text(encoding="utf-8"))
        return engine.instance_from_json(model, doc)
    model_name, instance, _ = _workspace(args).get_instance(ref)
    if model_name != model.name:
        raise CliError(f"instance {ref!r} belongs to model {model_name!r}")
    return instance


# --- subcommands -----------------------------------------------------------------

def cmd_check(args) -> int:
    model = _load_model(args, args.model)
    reports = run_all_checks(model, args.service)
    if args.format == "json":
        _write_output(_dump_json([r.to_json() for r in reports]), args.output)
    elif args.format == "dot":
        blocks = [render_dot(r.graph_view, name=r.check) for r in reports]
        _write_output("".join(blocks), args.output)
    else:
        _write_output("".join(render_report_text(r) for r in reports), args.output)
    return 0 if all(r.verdict == "pass" for r in reports) else 1


def cmd_eval(args) -> int:
    model = _load_model(args, args.model)
    inputs_doc = json.loads(Path(args.inputs).read_text(encoding="utf-8"))
    decoded = engine.decode_inputs(model, inputs_doc)
    instance = engine.evaluate(model, decoded)
    _write_output(_dump_json(engine.instance_to_json(instance)), args.output)
    return 0


def _parse_params(pairs: list[str]) -> dict:
    params: dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise CliError(f"--param expects key=value, got {pair!r}")
        key, _, raw = pair.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        cursor = params
        parts = key.split(".")
        for part in parts[:-1]:
            cursor = cursor.setdefault(part, {})
            if not isinstance(cursor, dict):
                raise CliError(f"--param key {key!r} clashes with an earlier value")
        cursor[parts[-1]] = value
    return params


def cmd_ask(args) -> int:
    model = _load_model(args, args.model)
    instance = _load_instance(args, model, args.instance) if args.instance else None
    ctx = Context.build(model, instance)
    question = Question(
        qtype=args.qtype,
        model=model.name,
        instance=args.instance,
        target=args.target,
        parameters=_parse_params(args.param),
    )
    profile = get_profile(args.profile) if args.profile else default_profile_for(args.qtype)
    answer = ask(profile, question, ctx)
    if args.format == "json":
        _write_output(_dump_json(answer.to_json()), args.output)
    elif args.format == "dot":
        _write_output(render_dot(answer.graph_view, name=args.qtype.lower()), args.output)
    elif args.format == "csv":
        _write_output(render_tables(answer, "csv"), args.output)
    else:
        text = render_text(answer)
        tables = render_tables(answer, "text")
        _write_output(text + ("\n" + tables if tables else ""), args.output)
    return 0


def cmd_export(args) -> int:
    model = _load_model(args, args.model)
    graph = build_model_graph(model)
    if args.instance:
        graph = instantiate(graph, _load_instance(args, model, args.instance))
    if args.view != "full":
        node_labels, edge_labels = VIEW_FILTERS[args.view]
        graph = graph.filter(lambda n: n.label in node_labels,
                             lambda e: e.label in edge_labels)
    if args.to == "dot":
        _write_output(render_dot(graph, name=model.name), args.output)
    elif args.to == "cypher":
        _write_output(export_graph_script(graph), args.output)
    else:
        _write_output(_dump_json(graph.to_json()), args.output)
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.addr, args.workspace, args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="explaineo",
        description="Explain rule-based decision models: checks, evaluation, "
                    "questions, graph exports, and an HTTP service.",
    )
    parser.add_argument("--workspace", help="workspace directory "
                        "(default: $EXPLAINEO_WORKSPACE or ./workspace)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run the verification checks")
    p_check.add_argument("model", help="model file (.dm) or workspace name")
    p_check.add_argument("--service", help="restrict service checks to one service")
    p_check.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p_check.add_argument("-o", "--output")
    p_check.set_defaults(func=cmd_check)

    p_eval = sub.add_parser("eval", help="evaluate a model over input values")
    p_eval.add_argument("model")
    p_eval.add_argument("--inputs", required=True, help="JSON file with input values")
    p_eval.add_argument("-o", "--output")
    p_eval.set_defaults(func=cmd_eval)

    p_ask = sub.add_parser("ask", help="ask one of the ten question types")
    p_ask.add_argument("qtype", choices=sorted(CATALOGUE),
                       help="question type (e.g. Why, WhatIf, Visualisation)")
    p_ask.add_argument("--model", required=True)
    p_ask.add_argument("--instance")
    p_ask.add_argument("--target", help="target variable")
    p_ask.add_argument("--param", action="append", default=[],
                       metavar="KEY=VALUE", help="question parameter; dotted "
                       "keys nest (overrides.payment_date=2023-01-31)")
    p_ask.add_argument("--profile", help="audience profile "
                       "(default: the first built-in profile allowed to ask)")
    p_ask.add_argument("--format", choices=("text", "json", "dot", "csv"),
                       default="text")
    p_ask.add_argument("-o", "--output")
    p_ask.set_defaults(func=cmd_ask)

    p_export = sub.add_parser("export", help="export the model or instance graph")
    p_export.add_argument("model")
    p_export.add_argument("--instance")
    p_export.add_argument("--to", choices=("dot", "cypher", "json"), required=True)
    p_export.add_argument("--view", choices=("object", "rule", "service", "full"),
                          default="full")
    p_export.add_argument("-o", "--output")
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--addr", default="127.0.0.1:8000")
    p_serve.add_argument("--ui", metavar="DIR",
                         help="also host a built web UI directory at /ui")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelError as exc:
        print("invalid model:", file=sys.stderr)
        for diagnostic in exc.diagnostics:
            print(f"  {diagnostic}", file=sys.stderr)
        return 2
    except (CliError, WorkspaceError, NotFound, QuestionError, QTypeNotAllowed,
            VerificationError, GraphError, engine.EngineError, KeyError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
