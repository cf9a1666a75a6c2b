"""The ten question operations: each builds a three-part Answer
(prose, titled tables, highlighted graph view) plus law-source citations.

Decision questions (What, WhatIf, Why, WhyNot, HowTo) read a specific
decision instance; system questions (Input, Output, How, Visualisation,
Whether) read only the model graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..builder import (
    build_model_graph, instantiate, rule_id as rule_node_id,
    variable_id as var_node_id,
)
from ..dsl import DecisionModel, Ref, Rule, SourceRef, condition_atoms, print_condition, print_expr
from ..engine import (
    DERIVED, INPUT, DecisionInstance, decode_inputs, evaluate,
    evaluate_counterfactual, search_how_to,
)
from ..graph import PropertyGraph
from ..values import Kind, Value, decode_value, encode_value, render_value
from ..verification import CHECK_IDS, VerificationError, get_check
from .profiles import PLAIN

PATH_LABELS = ("CONDITION", "CALC_INPUT", "DERIVES")
SLICE_LABELS = ("CONDITION", "CALC_INPUT", "DERIVES", "INPUT")

UNSET = "unset"


class QuestionError(Exception):
    """The question cannot be answered as posed (bad target, parameters, ...)."""


@dataclass(frozen=True)
class Question:
    qtype: str
    model: str | None = None
    instance: str | None = None
    target: str | None = None
    parameters: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "qtype": self.qtype,
            "model": self.model,
            "instance": self.instance,
            "target": self.target,
            "parameters": dict(self.parameters),
        }


@dataclass(frozen=True)
class AnswerTable:
    title: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def to_json(self) -> dict:
        return {"title": self.title, "columns": list(self.columns),
                "rows": [list(row) for row in self.rows]}


@dataclass(frozen=True)
class Answer:
    question: Question
    text: str
    tables: tuple[AnswerTable, ...]
    graph_view: PropertyGraph
    citations: tuple[SourceRef, ...]

    def to_json(self) -> dict:
        return {
            "question": self.question.to_json(),
            "text": self.text,
            "tables": [table.to_json() for table in self.tables],
            "graph_view": self.graph_view.to_json(),
            "citations": [{"label": c.label, "uri": c.uri} for c in self.citations],
        }


@dataclass(frozen=True)
class Context:
    """Everything a question may look at: the model, its simplified graph,
    and optionally one evaluated instance with its instance graph."""
    model: DecisionModel
    model_graph: PropertyGraph
    instance: DecisionInstance | None = None
    instance_graph: PropertyGraph | None = None

    @staticmethod
    def build(model: DecisionModel, instance: DecisionInstance | None = None) -> "Context":
        graph = build_model_graph(model)
        instance_graph = instantiate(graph, instance) if instance is not None else None
        return Context(model, graph, instance, instance_graph)


# --- shared helpers -----------------------------------------------------------

def _ref(mode: str, prefix: str, name: str) -> str:
    """Element mention: plain wording hides node ids, technical shows them."""
    return f"'{name}'" if mode == PLAIN else f"'{name}' [{prefix}:{name}]"


def _need_instance(ctx: Context, qtype: str) -> DecisionInstance:
    if ctx.instance is None or ctx.instance_graph is None:
        raise QuestionError(f"{qtype} is about a specific decision and needs an instance")
    return ctx.instance


def _decl_or_fail(ctx: Context, name: str | None, qtype: str):
    if not name:
        raise QuestionError(f"{qtype} needs a target variable")
    decl = ctx.model.variable_decls().get(name)
    if decl is None:
        raise QuestionError(f"unknown variable {name!r}")
    return decl


def _value_text(instance: DecisionInstance, name: str) -> str:
    value = instance.value_of(name)
    return UNSET if value is None else render_value(value)


def _rule_sources(model: DecisionModel, rule_names: list[str]) -> tuple[SourceRef, ...]:
    seen: dict[SourceRef, None] = {}
    for name in rule_names:
        rule = model.rule(name)
        if rule is not None and rule.source is not None:
            seen.setdefault(rule.source)
    return tuple(seen)


def _atoms_with_values(rule: Rule, instance: DecisionInstance) -> list[tuple[str, bool | None, str]]:
    """(atom text, satisfied or None when unknown, involved values) per atom."""
    from ..dsl import print_atom
    from ..engine import _atom_holds

    results = []
    for atom in condition_atoms(rule.condition) if rule.condition else []:
        names = [atom.variable]
        if isinstance(atom.operand, Ref):
            names.append(atom.operand.name)
        values = ", ".join(f"{n} = {_value_text(instance, n)}" for n in names)
        try:
            satisfied: bool | None = _atom_holds(atom, instance.bindings)
        except KeyError:
            satisfied = None
        results.append((print_atom(atom), satisfied, values))
    return results


def _instance_view(ctx: Context, instance: DecisionInstance,
                   highlight_vars: list[str] = ()) -> PropertyGraph:
    """Bound variables plus fired rules, connected by rule-structure edges."""
    graph = instantiate(ctx.model_graph, instance)
    bound = {var_node_id(name) for name in instance.bindings}
    fired = {rule_node_id(name) for name in instance.fired_rules()}
    keep = bound | fired
    view = graph.filter(lambda n: n.id in keep, lambda e: e.label in PATH_LABELS)
    return view.highlighted([var_node_id(v) for v in highlight_vars
                             if view.has_node(var_node_id(v))])


def _rule_neighbourhood_ids(ctx: Context, rules: list[str], targets: list[str]) -> set[str]:
    """Node ids for rules, their condition/calc-input variables, and targets."""
    keep: set[str] = set()
    for name in rules:
        rule = ctx.model.rule(name)
        if rule is None:
            continue
        keep.add(rule_node_id(name))
        for var in rule.condition_variables():
            keep.add(var_node_id(var))
        for var in rule.action.input_variables():
            keep.add(var_node_id(var))
        keep.add(var_node_id(rule.action.target))
    keep.update(var_node_id(t) for t in targets)
    return keep


def _backward_slice(graph: PropertyGraph, target_id: str) -> PropertyGraph:
    """Everything the target depends on, back to the input messages."""
    reach = graph.reach_set([target_id], SLICE_LABELS, direction="reverse")
    return graph.filter(lambda n: n.id in reach, lambda e: e.label in SLICE_LABELS)


# --- decision questions ---------------------------------------------------------

def answer_what(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """Data explanation: the decisions made and the data they used."""
    instance = _need_instance(ctx, "What")
    model = ctx.model

    decision_rows = []
    decided = []
    missing = []
    for service in model.service_model:
        for msg in service.output_messages:
            for name in msg.variables:
                value = _value_text(instance, name)
                decision_rows.append((msg.name, name, value))
                (missing if value == UNSET else decided).append(f"{name} = {value}")
    input_rows = []
    for service in model.service_model:
        for msg in service.input_messages:
            for name in msg.variables:
                input_rows.append((msg.name, name, _value_text(instance, name)))
    rule_rows = [(step.rule, step.produced_variable,
                  render_value(step.produced_value)) for step in instance.trace]

    text = "The system decided: " + ", ".join(decided) + "." if decided else \
        "The system reached no decisions."
    if missing:
        text += " Not derivable: " + ", ".join(m.split(" = ")[0] for m in missing) + "."
    text += (f" It used {len(input_rows)} input value(s) and fired "
             f"{len(rule_rows)} rule(s).")

    outputs = model.output_variables()
    view = _instance_view(ctx, instance, highlight_vars=outputs)
    tables = (
        AnswerTable("Decisions", ("message", "variable", "value"), tuple(decision_rows)),
        AnswerTable("Input data", ("message", "variable", "value"), tuple(input_rows)),
        AnswerTable("Rules used", ("rule", "variable", "value"), tuple(rule_rows)),
    )
    return Answer(question, text, tables, view,
                  _rule_sources(model, instance.fired_rules()))


def _deriving_step(instance: DecisionInstance, target: str):
    for step in instance.trace:
        if step.produced_variable == target:
            return step
    return None


def answer_why(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """Rationale, one step: the rule that set the target and its conditions."""
    instance = _need_instance(ctx, "Why")
    _decl_or_fail(ctx, question.target, "Why")
    target = question.target
    binding = instance.bindings.get(target)
    if binding is None:
        raise QuestionError(
            f"{target!r} was not derived in this decision; ask WhyNot to see "
            f"what blocked it")
    if binding.origin == INPUT:
        raise QuestionError(f"{target!r} is an input value, not a derived decision")

    rule = ctx.model.rule(binding.rule)
    atoms = _atoms_with_values(rule, instance)
    rule_text = _ref(mode, "rule", rule.name)
    text = f"{target} = {render_value(binding.value)} because rule {rule_text} fired"
    if rule.condition is None:
        text += " (it applies unconditionally)"
    else:
        held = "; ".join(
            f"{atom} ({'satisfied' if sat else 'not satisfied'})" for atom, sat, _ in atoms)
        text += f": {held}"
    text += "."
    calc_rows = []
    if rule.action.kind == "calculation":
        inputs = rule.action.input_variables()
        shown = ", ".join(f"{n} = {_value_text(instance, n)}" for n in inputs)
        text += f" Computed as {print_expr(rule.action.expr)} with {shown}."
        calc_rows = [(n, _value_text(instance, n)) for n in inputs]
    if rule.source is not None:
        text += f" Source: {rule.source.label} <{rule.source.uri}>."

    tables = [AnswerTable(
        "Conditions", ("condition", "satisfied", "values"),
        tuple((atom, "yes" if sat else "no", values) for atom, sat, values in atoms))]
    if calc_rows:
        tables.append(AnswerTable("Calculation inputs", ("variable", "value"),
                                  tuple(calc_rows)))

    graph = instantiate(ctx.model_graph, instance)
    keep = _rule_neighbourhood_ids(ctx, [rule.name], [target])
    view = graph.filter(lambda n: n.id in keep, lambda e: e.label in PATH_LABELS)
    view = view.highlighted([var_node_id(target), rule_node_id(rule.name)])
    return Answer(question, text, tuple(tables), view,
                  _rule_sources(ctx.model, [rule.name]))


def _contributing_steps(instance: DecisionInstance, target: str) -> list:
    """The trace steps the target transitively depends on, in firing order."""
    produced_by = {step.produced_variable: step for step in instance.trace}
    needed: set[str] = set()
    stack = [target]
    while stack:
        name = stack.pop()
        step = produced_by.get(name)
        if step is None or step.rule in needed:
            continue
        needed.add(step.rule)
        for consumed_name, _ in step.consumed:
            stack.append(consumed_name)
    return [step for step in instance.trace if step.rule in needed]


def answer_why_trace(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """Rationale, full chain: every step from the input messages to the target."""
    instance = _need_instance(ctx, "Why")
    _decl_or_fail(ctx, question.target, "Why")
    target = question.target
    binding = instance.bindings.get(target)
    if binding is None:
        raise QuestionError(
            f"{target!r} was not derived in this decision; ask WhyNot to see "
            f"what blocked it")
    if binding.origin == INPUT:
        raise QuestionError(f"{target!r} is an input value, not a derived decision")

    steps = _contributing_steps(instance, target)
    consumed_inputs: dict[str, None] = {}
    for step in steps:
        for name, _ in step.consumed:
            if instance.bindings[name].origin == INPUT:
                consumed_inputs.setdefault(name)

    lines = [f"Why {target} = {render_value(binding.value)}:"]
    lines.append("1. Inputs: " + ", ".join(
        f"{n} = {_value_text(instance, n)}" for n in sorted(consumed_inputs)) + ".")
    table_rows = []
    for number, step in enumerate(steps, start=2):
        rule_text = _ref(mode, "rule", step.rule)
        conditions = "; ".join(
            f"{e.atom} ({'satisfied' if e.satisfied else 'not satisfied'})"
            for e in step.conditions) or "unconditional"
        lines.append(
            f"{number}. Rule {rule_text} set {step.produced_variable} = "
            f"{render_value(step.produced_value)} ({conditions}).")
        table_rows.append((str(number - 1), step.rule, step.produced_variable,
                           render_value(step.produced_value), conditions))
    text = "\n".join(lines)

    graph = instantiate(ctx.model_graph, instance)
    keep = _rule_neighbourhood_ids(ctx, [s.rule for s in steps], [target])
    for name in consumed_inputs:
        keep.add(var_node_id(name))
    # input-message nodes of the consumed inputs join the view
    msg_ids = set()
    for name in consumed_inputs:
        for edge in graph.in_edges(var_node_id(name), ["INPUT"]):
            msg_ids.add(edge.src)
    keep |= msg_ids
    view = graph.filter(lambda n: n.id in keep,
                        lambda e: e.label in PATH_LABELS + ("INPUT",))
    view = view.highlighted([rule_node_id(s.rule) for s in steps] + [var_node_id(target)])
    tables = (AnswerTable("Derivation steps",
                          ("step", "rule", "variable", "value", "conditions"),
                          tuple(table_rows)),)
    return Answer(question, text, tables, view,
                  _rule_sources(ctx.model, [s.rule for s in steps]))


def answer_what_if(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """Counterfactual: re-evaluate with changed inputs and diff the outcome."""
    instance = _need_instance(ctx, "WhatIf")
    overrides_json = question.parameters.get("overrides") or {}
    if not overrides_json:
        raise QuestionError("WhatIf needs a non-empty 'overrides' map")
    overrides = decode_inputs(ctx.model, overrides_json)
    changed_instance = evaluate_counterfactual(instance, overrides)

    rows = []
    changed: list[str] = []
    changed_outputs: list[str] = []
    outputs = set(ctx.model.output_variables())
    for name in ctx.model.variable_decls():
        old = _value_text(instance, name)
        new = _value_text(changed_instance, name)
        is_changed = old != new
        rows.append((name, old, new, "yes" if is_changed else "no"))
        if is_changed:
            changed.append(name)
            if name in outputs:
                changed_outputs.append(f"{name}: {old} -> {new}")

    override_text = ", ".join(
        f"{n} = {render_value(v)}" for n, v in sorted(overrides.items()))
    if not changed:
        text = f"With {override_text}, nothing changes."
    elif changed_outputs:
        text = (f"With {override_text}, {len(changed)} value(s) change. "
                f"Decisions affected: " + "; ".join(changed_outputs) + ".")
    else:
        text = (f"With {override_text}, {len(changed)} intermediate value(s) "
                f"change but every decision stays the same.")

    view = _instance_view(ctx, changed_instance, highlight_vars=changed)
    changed_rules = [step.rule for step in changed_instance.trace
                     if step.produced_variable in changed]
    tables = (AnswerTable("Before and after",
                          ("variable", "old value", "new value", "changed"),
                          tuple(rows)),)
    return Answer(question, text, tables, view,
                  _rule_sources(ctx.model, changed_rules))


def answer_why_not(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """Contrastive rationale: what blocked the alternative value."""
    instance = _need_instance(ctx, "WhyNot")
    decl = _decl_or_fail(ctx, question.target, "WhyNot")
    target = question.target
    if "alternative" not in question.parameters:
        raise QuestionError("WhyNot needs an 'alternative' value parameter")
    try:
        alternative = decode_value(question.parameters["alternative"], decl.kind)
    except ValueError as exc:
        raise QuestionError(str(exc)) from exc

    actual = instance.value_of(target)
    actual_text = UNSET if actual is None else render_value(actual)
    if actual is not None and render_value(actual) == render_value(alternative):
        raise QuestionError(
            f"{target} already is {render_value(alternative)}; ask Why instead")

    prefix = f"{target} = {actual_text}, not {render_value(alternative)}."
    deriving = ctx.model.rules_deriving(target)

    in_domain = decl.domain is None or alternative in decl.domain
    candidates = [] if not in_domain else [
        rule for rule in deriving
        if rule.action.kind == "calculation"
        or render_value(rule.action.expr.value) == render_value(alternative)  # type: ignore[union-attr]
    ]

    graph = (instantiate(ctx.model_graph, instance))
    if not candidates:
        reason = ("that value is outside the declared domain of the variable"
                  if not in_domain else "no rule can produce that value")
        text = (f"{prefix} The model cannot produce {render_value(alternative)} "
                f"for {target}: {reason}.")
        keep = _rule_neighbourhood_ids(ctx, [r.name for r in deriving], [target])
        view = graph.filter(lambda n: n.id in keep, lambda e: e.label in PATH_LABELS)
        view = view.highlighted([var_node_id(target)])
        return Answer(question, text, (AnswerTable(
            "Blocking conditions", ("rule", "condition", "satisfied", "values"), ()),),
            view, ())

    fired = set(instance.fired_rules())
    sentences = [prefix]
    rows = []
    unsatisfied_vars: list[str] = []
    for rule in candidates:
        rule_text = _ref(mode, "rule", rule.name)
        atoms = _atoms_with_values(rule, instance)
        blocking = [(a, s, v) for a, s, v in atoms if s is not True]
        for atom_text, satisfied, values in atoms:
            rows.append((rule.name, atom_text,
                         "unknown" if satisfied is None else ("yes" if satisfied else "no"),
                         values))
        if rule.name in fired:
            sentences.append(
                f"Rule {rule_text} fired but computed {actual_text}, "
                f"not {render_value(alternative)}.")
        elif not blocking:
            sentences.append(
                f"Rule {rule_text} could set it but another rule decided "
                f"{target} first.")
        else:
            blocked = "; ".join(
                f"{atom} is {'undecidable (missing values)' if sat is None else 'not satisfied'} ({values})"
                for atom, sat, values in blocking)
            sentences.append(f"Rule {rule_text} would set {target} = "
                             f"{render_value(alternative)} but did not fire: {blocked}.")
            for atom, sat, _ in blocking:
                rule_obj = ctx.model.rule(rule.name)
                for a in condition_atoms(rule_obj.condition) if rule_obj.condition else []:
                    from ..dsl import print_atom
                    if print_atom(a) == atom:
                        unsatisfied_vars.append(a.variable)
                        if isinstance(a.operand, Ref):
                            unsatisfied_vars.append(a.operand.name)

    text = " ".join(sentences)
    keep = _rule_neighbourhood_ids(ctx, [r.name for r in candidates], [target])
    view = graph.filter(lambda n: n.id in keep, lambda e: e.label in PATH_LABELS)
    view = view.highlighted(
        [var_node_id(target)] + [rule_node_id(r.name) for r in candidates]
        + [var_node_id(v) for v in unsatisfied_vars if view.has_node(var_node_id(v))])
    tables = (AnswerTable("Blocking conditions",
                          ("rule", "condition", "satisfied", "values"), tuple(rows)),)
    return Answer(question, text, tables, view,
                  _rule_sources(ctx.model, [r.name for r in candidates]))


def answer_how_to(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """Goal seeking: which open-input assignments reach the desired value."""
    decl = _decl_or_fail(ctx, question.target, "HowTo")
    target = question.target
    if "value" not in question.parameters:
        raise QuestionError("HowTo needs a 'value' parameter (the desired value)")
    try:
        desired = decode_value(question.parameters["value"], decl.kind, decl.domain)
    except ValueError as exc:
        raise QuestionError(str(exc)) from exc
    fixed_json = question.parameters.get("fixed_inputs") or {}
    fixed = decode_inputs(ctx.model, fixed_json)

    result = search_how_to(ctx.model, fixed, (target, desired))

    goal_text = f"{target} = {render_value(desired)}"
    rows = []
    if result.achievable:
        options = []
        for index, assignment in enumerate(result.assignments, start=1):
            if assignment:
                rendered = ", ".join(f"{n} = {render_value(v)}"
                                     for n, v in sorted(assignment.items()))
            else:
                rendered = "no further inputs needed"
            options.append(f"{index}) {rendered}")
            if assignment:
                for name in sorted(assignment):
                    rows.append((str(index), name, render_value(assignment[name])))
            else:
                rows.append((str(index), "-", "already achieved"))
        text = (f"{goal_text} can be reached in {len(result.assignments)} way(s): "
                + "; ".join(options) + f". Searched {result.searched} combination(s).")
    else:
        text = (f"{goal_text} cannot be reached with the given inputs; "
                f"searched {result.searched} combination(s).")

    view = _backward_slice(ctx.model_graph, var_node_id(target))
    view = view.highlighted([var_node_id(target)])
    tables = (AnswerTable("Minimal assignments", ("option", "variable", "value"),
                          tuple(rows)),)
    return Answer(question, text, tables, view, ())


# --- system questions -----------------------------------------------------------

def _resolve_service(ctx: Context, question: Question):
    name = question.parameters.get("service")
    if name:
        service = ctx.model.service(name)
        if service is None:
            raise QuestionError(f"unknown service {name!r}")
        return service
    services = ctx.model.service_model
    if not services:
        raise QuestionError("the model declares no services")
    if len(services) > 1:
        raise QuestionError("several services exist; pass a 'service' parameter")
    return services[0]


def _message_table(ctx: Context, messages, title: str) -> AnswerTable:
    decls = ctx.model.variable_decls()
    rows = []
    for msg in messages:
        for name in msg.variables:
            decl = decls[name]
            domain = ", ".join(render_value(v) for v in decl.domain) if decl.domain else ""
            rows.append((msg.name, name, decl.kind.value, domain, decl.unit or ""))
    return AnswerTable(title, ("message", "variable", "kind", "domain", "unit"),
                       tuple(rows))


def _service_message_view(ctx: Context, service, side: str) -> PropertyGraph:
    msg_ids = {f"msg:{m.name}" for m in
               (service.input_messages if side == "in" else service.output_messages)}
    var_ids = set()
    for msg in (service.input_messages if side == "in" else service.output_messages):
        var_ids.update(var_node_id(n) for n in msg.variables)
    keep = {f"service:{service.name}"} | msg_ids | var_ids
    labels = {"HAS_MESSAGE", "INPUT" if side == "in" else "OUTPUT"}
    view = ctx.model_graph.filter(lambda n: n.id in keep, lambda e: e.label in labels)
    return view.highlighted([f"service:{service.name}"])


def answer_input(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """What could go in: the service's input messages and variables."""
    service = _resolve_service(ctx, question)
    messages = service.input_messages
    svc_text = _ref(mode, "service", service.name)
    if messages:
        described = "; ".join(f"{m.name} ({', '.join(m.variables)})" for m in messages)
        text = (f"Service {svc_text} accepts {len(messages)} input message(s): "
                f"{described}.")
    else:
        text = f"Service {svc_text} accepts no input messages."
    return Answer(question, text,
                  (_message_table(ctx, messages, "Input variables"),),
                  _service_message_view(ctx, service, "in"), ())


def answer_output(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """What could come out: the service's output messages and variables."""
    service = _resolve_service(ctx, question)
    messages = service.output_messages
    svc_text = _ref(mode, "service", service.name)
    if messages:
        described = "; ".join(f"{m.name} ({', '.join(m.variables)})" for m in messages)
        text = (f"Service {svc_text} can decide {len(messages)} output message(s): "
                f"{described}.")
    else:
        text = f"Service {svc_text} produces no output messages."
    return Answer(question, text,
                  (_message_table(ctx, messages, "Output variables"),),
                  _service_message_view(ctx, service, "out"), ())


def answer_how(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """General mechanism: how the target is derived, with no instance values."""
    _decl_or_fail(ctx, question.target, "How")
    target = question.target
    deriving = ctx.model.rules_deriving(target)
    if not deriving:
        raise QuestionError(
            f"no rule ever derives {target!r}; the assignment check lists such variables")

    sentences = [f"{target} is derived by {len(deriving)} rule(s)."]
    rows = []
    for rule in deriving:
        rule_text = _ref(mode, "rule", rule.name)
        condition = print_condition(rule.condition) if rule.condition else "always"
        action = f"{rule.action.target} = {print_expr(rule.action.expr)}"
        sentence = (f"Rule {rule_text} applies when {condition} and sets {action}."
                    if rule.condition else f"Rule {rule_text} always sets {action}.")
        if rule.source is not None:
            sentence = sentence[:-1] + f" (source: {rule.source.label} <{rule.source.uri}>)."
        sentences.append(sentence)
        rows.append((rule.name, condition, action,
                     rule.source.label if rule.source else ""))

    view = _backward_slice(ctx.model_graph, var_node_id(target))
    view = view.highlighted([var_node_id(target)]
                            + [rule_node_id(r.name) for r in deriving
                               if view.has_node(rule_node_id(r.name))])
    tables = (AnswerTable("Deriving rules", ("rule", "condition", "action", "source"),
                          tuple(rows)),)
    return Answer(question, " ".join(sentences), tables, view,
                  _rule_sources(ctx.model, [r.name for r in deriving]))


VIEW_FILTERS: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    "object": (frozenset({"ObjectType", "Variable"}),
               frozenset({"RELATES_TO", "HAS_VARIABLE"})),
    "rule": (frozenset({"ObjectType", "Variable", "Rule"}),
             frozenset({"RELATES_TO", "HAS_VARIABLE", "CONDITION", "DERIVES",
                        "CALC_INPUT"})),
    "service": (frozenset({"Service", "InputMessage", "OutputMessage", "Variable"}),
                frozenset({"HAS_MESSAGE", "INPUT", "OUTPUT"})),
}


def answer_visualisation(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """A filtered view of the conceptual model: object, rule, service, or full."""
    view_name = question.parameters.get("view")
    if view_name == "full":
        view = ctx.model_graph
    elif view_name in VIEW_FILTERS:
        node_labels, edge_labels = VIEW_FILTERS[view_name]
        view = ctx.model_graph.filter(lambda n: n.label in node_labels,
                                      lambda e: e.label in edge_labels)
    else:
        raise QuestionError(
            f"unknown view {view_name!r}; choose object, rule, service or full")
    focus = question.parameters.get("focus")
    if focus:
        focus_id = _find_node(view, focus)
        radius = int(question.parameters.get("radius", 2))
        view = view.neighbourhood(focus_id, radius)
    return Answer(question, "", (), view, ())


def _find_node(graph: PropertyGraph, name: str) -> str:
    for prefix in ("var", "rule", "object", "service", "msg", "source"):
        candidate = f"{prefix}:{name}"
        if graph.has_node(candidate):
            return candidate
    if graph.has_node(name):
        return name
    raise QuestionError(f"no model element called {name!r} in this view")


def answer_whether(ctx: Context, question: Question, mode: str = PLAIN) -> Answer:
    """Requirement check: wraps one verification check as an answer."""
    check_id = question.parameters.get("check")
    if not check_id:
        raise QuestionError(
            f"Whether needs a 'check' parameter; available: {', '.join(CHECK_IDS)}")
    try:
        check = get_check(check_id)
    except VerificationError as exc:
        raise QuestionError(str(exc)) from exc
    service = question.parameters.get("service")
    if service and ctx.model.service(service) is None:
        raise QuestionError(f"unknown service {service!r}")
    report = check(ctx.model, ctx.model_graph, service)
    table = AnswerTable(
        "Check results", ("element", "kind", "status", "detail"),
        tuple((row.element, row.kind, row.status, row.detail) for row in report.table))
    return Answer(question, report.text, (table,), report.graph_view, ())
