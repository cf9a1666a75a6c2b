"""Model verification: path checks, assignment checks, logical checks.

Each check answers one modelling question with a verdict, a prose line, a
per-element table, and a graph view with the offending elements highlighted.
Path and assignment checks are pure graph queries; the logical check works
on the parsed model because it needs condition semantics.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dsl import (
    And, Atom, Cond, DecisionModel, Lit, Not, Or, Ref, Rule, print_atom,
    print_condition,
)
from .graph import GraphError, PropertyGraph
from .values import Kind, Value, compare

PASS = "pass"
FAIL = "fail"
WARN = "warn"

PATH_LABELS = ("CONDITION", "CALC_INPUT", "DERIVES")

CHECK_IDS = ("messages_used", "io_paths", "variables_used",
             "variables_assigned", "logical")

CHECK_QUESTIONS = {
    "messages_used": "Is each input and output message used by the service?",
    "io_paths": "Is all input used to create the output, and can all output be created from the input?",
    "variables_used": "Is each variable used?",
    "variables_assigned": "Are all variables assigned?",
    "logical": "Is every rule condition free of logical contradictions?",
}


class VerificationError(Exception):
    pass


@dataclass(frozen=True)
class CheckRow:
    element: str
    kind: str
    status: str  # pass | fail | warn
    detail: str

    def to_json(self) -> dict:
        return {"element": self.element, "kind": self.kind,
                "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class CheckReport:
    check: str
    verdict: str  # pass | fail
    text: str
    table: tuple[CheckRow, ...]
    graph_view: PropertyGraph

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "text": self.text,
            "table": [row.to_json() for row in self.table],
            "graph_view": self.graph_view.to_json(),
        }


def _report(check: str, rows: list[CheckRow], graph_view: PropertyGraph,
            summary_pass: str, summary_fail: str) -> CheckReport:
    failures = [row for row in rows if row.status == FAIL]
    verdict = FAIL if failures else PASS
    question = CHECK_QUESTIONS[check]
    if failures:
        names = ", ".join(row.element for row in failures)
        text = f"{question} Negative: {summary_fail} ({names})."
    else:
        text = f"{question} Positive: {summary_pass}."
    warnings = [row for row in rows if row.status == WARN]
    if warnings:
        text += f" {len(warnings)} warning(s)."
    return CheckReport(check, verdict, text, tuple(rows), graph_view)


# --- service lookups over the model graph ------------------------------------

def _service_node(graph: PropertyGraph, service: str):
    node_id = f"service:{service}"
    if not graph.has_node(node_id):
        raise VerificationError(f"unknown service {service!r}")
    return graph.node(node_id)


def _service_messages(graph: PropertyGraph, service: str) -> list:
    svc = _service_node(graph, service)
    return [graph.node(e.dst) for e in graph.out_edges(svc.id, ["HAS_MESSAGE"])]


def _message_variables(graph: PropertyGraph, message) -> list[str]:
    if message.label == "InputMessage":
        return [graph.node(e.dst).id for e in graph.out_edges(message.id, ["INPUT"])]
    return [graph.node(e.src).id for e in graph.in_edges(message.id, ["OUTPUT"])]


def _all_services(graph: PropertyGraph) -> list[str]:
    return sorted(str(n.properties["name"]) for n in graph.nodes_with_label("Service"))


def _services_in_scope(graph: PropertyGraph, service: str | None) -> list[str]:
    if service is not None:
        _service_node(graph, service)
        return [service]
    return _all_services(graph)


def _service_view(graph: PropertyGraph, with_rules: bool) -> PropertyGraph:
    labels = {"Service", "InputMessage", "OutputMessage", "Variable"}
    edge_labels = {"HAS_MESSAGE", "INPUT", "OUTPUT"}
    if with_rules:
        labels.add("Rule")
        edge_labels.update(PATH_LABELS)
    return graph.filter(lambda n: n.label in labels,
                        lambda e: e.label in edge_labels)


# --- the five checks ----------------------------------------------------------

def check_messages_used(graph: PropertyGraph, service: str | None = None) -> CheckReport:
    """Every service message must feed, or be fed by, the rule structure."""
    rule_ids = [n.id for n in graph.nodes_with_label("Rule")]
    reaching_rules = (graph.reach_set(rule_ids, PATH_LABELS, "reverse")
                      if rule_ids else frozenset())
    reached_by_rules = (graph.reach_set(rule_ids, PATH_LABELS, "forward")
                        if rule_ids else frozenset())

    rows: list[CheckRow] = []
    failing: list[str] = []
    for svc in _services_in_scope(graph, service):
        for message in _service_messages(graph, svc):
            name = str(message.properties["name"])
            variables = _message_variables(graph, message)
            is_input = message.label == "InputMessage"
            kind = "input message" if is_input else "output message"
            connected = [v for v in variables
                         if v in (reaching_rules if is_input else reached_by_rules)]
            if not variables:
                rows.append(CheckRow(name, kind, FAIL, "message has no variables"))
                failing.append(message.id)
            elif not connected:
                detail = ("no variable of this message reaches a rule" if is_input
                          else "no variable of this message is derived by a rule")
                rows.append(CheckRow(name, kind, FAIL, detail))
                failing.append(message.id)
            else:
                witness = graph.node(sorted(connected)[0]).properties["name"]
                rows.append(CheckRow(name, kind, PASS, f"used via {witness}"))

    view = _service_view(graph, with_rules=False).highlighted(failing)
    return _report("messages_used", rows, view,
                   "every message is used", "unused message(s)")


def check_io_paths(graph: PropertyGraph, service: str | None = None) -> CheckReport:
    """Inputs must lead to some output; outputs must be derivable from inputs."""
    rows: list[CheckRow] = []
    failing: list[str] = []
    for svc in _services_in_scope(graph, service):
        inputs: list[str] = []
        outputs: list[str] = []
        for message in _service_messages(graph, svc):
            members = _message_variables(graph, message)
            (inputs if message.label == "InputMessage" else outputs).extend(members)
        inputs = sorted(set(inputs))
        outputs = sorted(set(outputs))

        for var in inputs:
            name = str(graph.node(var).properties["name"])
            if not outputs:
                rows.append(CheckRow(name, "input", FAIL, "service has no output variables"))
                failing.append(var)
                continue
            result = graph.reachable([var], outputs, PATH_LABELS)
            if result.found:
                rows.append(CheckRow(name, "input", PASS, _path_text(graph, result)))
            else:
                rows.append(CheckRow(name, "input", FAIL, "no path to an output variable"))
                failing.append(var)
        for var in outputs:
            name = str(graph.node(var).properties["name"])
            if not inputs:
                rows.append(CheckRow(name, "output", FAIL, "service has no input variables"))
                failing.append(var)
                continue
            result = graph.reachable(inputs, [var], PATH_LABELS)
            if result.found:
                rows.append(CheckRow(name, "output", PASS, _path_text(graph, result)))
            else:
                rows.append(CheckRow(name, "output", FAIL, "no path from an input variable"))
                failing.append(var)

    view = _service_view(graph, with_rules=True).highlighted(failing)
    return _report("io_paths", rows, view,
                   "all inputs and outputs are connected", "unconnected variable(s)")


def _path_text(graph: PropertyGraph, result) -> str:
    names = [str(graph.node(nid).properties["name"]) for nid in result.path.nodes]
    if len(names) == 1:
        return "input and output coincide"
    return "path: " + " -> ".join(names)


def check_variables_used(graph: PropertyGraph) -> CheckReport:
    """A variable is used when it takes part in a rule or a service message."""
    use_labels = {"CONDITION", "CALC_INPUT", "DERIVES", "INPUT", "OUTPUT"}
    rows: list[CheckRow] = []
    failing: list[str] = []
    for node in graph.nodes_with_label("Variable"):
        incident = graph.out_edges(node.id, use_labels) + graph.in_edges(node.id, use_labels)
        name = str(node.properties["name"])
        if incident:
            labels = sorted({e.label for e in incident})
            rows.append(CheckRow(name, "variable", PASS, "used: " + ", ".join(labels)))
        else:
            rows.append(CheckRow(name, "variable", FAIL, "no rule or message uses it"))
            failing.append(node.id)
    view = graph.filter(
        lambda n: n.label in {"ObjectType", "Variable", "Rule", "InputMessage", "OutputMessage"},
        lambda e: e.label in {"HAS_VARIABLE", "CONDITION", "CALC_INPUT", "DERIVES", "INPUT", "OUTPUT"},
    ).highlighted(failing)
    return _report("variables_used", rows, view,
                   "every variable is used", "unused variable(s)")


def check_variables_assigned(graph: PropertyGraph) -> CheckReport:
    """A variable gets a value as a service input or as some rule's target."""
    rows: list[CheckRow] = []
    failing: list[str] = []
    for node in graph.nodes_with_label("Variable"):
        name = str(node.properties["name"])
        is_input = bool(graph.in_edges(node.id, ["INPUT"]))
        deriving = sorted(str(graph.node(e.src).properties["name"])
                          for e in graph.in_edges(node.id, ["DERIVES"]))
        if is_input and deriving:
            rows.append(CheckRow(name, "variable", PASS,
                                 "input variable, also derived by " + ", ".join(deriving)))
        elif is_input:
            rows.append(CheckRow(name, "variable", PASS, "input variable"))
        elif deriving:
            rows.append(CheckRow(name, "variable", PASS, "derived by " + ", ".join(deriving)))
        else:
            rows.append(CheckRow(name, "variable", FAIL, "never assigned a value"))
            failing.append(node.id)
    view = graph.filter(
        lambda n: n.label in {"Variable", "Rule", "InputMessage"},
        lambda e: e.label in {"DERIVES", "INPUT"},
    ).highlighted(failing)
    return _report("variables_assigned", rows, view,
                   "every variable can be assigned", "unassignable variable(s)")


# --- the logical check ---------------------------------------------------------

def check_logical(model: DecisionModel, graph: PropertyGraph | None = None) -> CheckReport:
    """Per rule: is the condition satisfiable?

    Decided branch-by-branch on the disjunctive normal form: finite-domain
    variables are enumerated jointly, numeric/date variables go through
    per-variable interval analysis, and variable-to-variable atoms are
    checked pairwise. Rule pairs deriving the same variable under jointly
    satisfiable conditions are reported as warnings.
    """
    if graph is None:
        from .builder import build_model_graph
        graph = build_model_graph(model)
    decls = model.variable_decls()
    rows: list[CheckRow] = []
    failing: list[str] = []
    for rule in model.rule_model:
        if rule.condition is None:
            rows.append(CheckRow(rule.name, "rule", PASS, "unconditional"))
            continue
        verdict = _satisfiable(rule.condition, decls)
        if verdict.satisfiable:
            detail = "satisfiable"
            if verdict.dead_branches:
                detail += "; dead branch: " + "; ".join(verdict.dead_branches)
            if verdict.pairwise_only:
                detail += "; cross-variable relations checked pairwise only"
            rows.append(CheckRow(rule.name, "rule", PASS, detail))
        else:
            rows.append(CheckRow(rule.name, "rule", FAIL, verdict.reason))
            failing.append(f"rule:{rule.name}")

    # extension: same-target rule pairs that can fire together
    for first, second in itertools.combinations(model.rule_model, 2):
        if first.action.target != second.action.target:
            continue
        joint = _joint_condition(first, second)
        if joint is None or _satisfiable(joint, decls).satisfiable:
            rows.append(CheckRow(
                f"{first.name} / {second.name}", "rule pair", WARN,
                f"conditions can hold together (checked propositionally) and "
                f"both set {first.action.target!r}; if both become eligible at "
                f"once, evaluation reports a conflict"))

    view = graph.filter(
        lambda n: n.label in {"Variable", "Rule"},
        lambda e: e.label in {"CONDITION", "CALC_INPUT", "DERIVES"},
    ).highlighted(failing)
    return _report("logical", rows, view,
                   "every condition is satisfiable", "contradictory condition(s)")


def _joint_condition(first: Rule, second: Rule) -> Cond | None:
    if first.condition is None and second.condition is None:
        return None  # trivially satisfiable together
    if first.condition is None:
        return second.condition
    if second.condition is None:
        return first.condition
    return And((first.condition, second.condition))


@dataclass
class _SatVerdict:
    satisfiable: bool
    reason: str = ""
    dead_branches: list[str] = None  # type: ignore[assignment]
    pairwise_only: bool = False


_FLIP = {"=": "!=", "!=": "=", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}
_RELATIONS = {"=": {"EQ"}, "!=": {"LT", "GT"}, "<": {"LT"}, "<=": {"LT", "EQ"},
              ">": {"GT"}, ">=": {"GT", "EQ"}}
_SWAP = {"=": "=", "!=": "!=", "<": ">", "<=": ">=", ">": "<", ">=": "<="}

_BRANCH_CAP = 4096


def _satisfiable(cond: Cond, decls: dict) -> _SatVerdict:
    branches = _to_dnf(cond)
    dead: list[str] = []
    pairwise_only = False
    reasons: list[str] = []
    satisfiable = False
    for branch in branches:
        ok, reason, pairwise = _branch_satisfiable(branch, decls)
        pairwise_only = pairwise_only or pairwise
        if ok:
            satisfiable = True
        else:
            dead.append(" and ".join(print_atom(a) for a in branch))
            reasons.append(reason)
    if satisfiable:
        return _SatVerdict(True, dead_branches=dead if dead else [],
                           pairwise_only=pairwise_only)
    reason = reasons[0] if reasons else "no satisfiable branch"
    if len(branches) > 1:
        reason = f"no branch is satisfiable; first: {reason}"
    return _SatVerdict(False, reason, dead_branches=[], pairwise_only=pairwise_only)


def _to_dnf(cond: Cond, negated: bool = False) -> list[list[Atom]]:
    """Disjunctive normal form as branches of positive comparator atoms."""
    if isinstance(cond, Atom):
        atom = Atom(cond.variable, _FLIP[cond.op] if negated else cond.op, cond.operand)
        return [[atom]]
    if isinstance(cond, Not):
        return _to_dnf(cond.operand, not negated)
    operands = cond.operands
    conjunctive = isinstance(cond, And) != negated  # And stays And unless negated
    parts = [_to_dnf(child, negated) for child in operands]
    if not conjunctive:  # disjunction: concatenate branches
        return [branch for part in parts for branch in part]
    branches: list[list[Atom]] = [[]]
    for part in parts:
        branches = [left + right for left in branches for right in part]
        if len(branches) > _BRANCH_CAP:
            raise VerificationError("condition too large for DNF expansion")
    return branches


def _branch_satisfiable(atoms: list[Atom], decls: dict) -> tuple[bool, str, bool]:
    """(satisfiable, failure reason, pairwise-only caveat applies)."""
    # 1. pairwise variable-to-variable relations
    pair_atoms: dict[tuple[str, str], list[Atom]] = {}
    pairwise_caveat = False
    for atom in atoms:
        if isinstance(atom.operand, Ref):
            a, b = atom.variable, atom.operand.name
            key = (a, b) if a <= b else (b, a)
            pair_atoms.setdefault(key, []).append(atom)
    for (a, b), members in pair_atoms.items():
        allowed = {"LT", "EQ", "GT"}
        first_atom = members[0]
        for atom in members:
            op = atom.op if atom.variable == a else _SWAP[atom.op]
            allowed &= _RELATIONS[op]
            if not allowed:
                return (False,
                        f"'{print_atom(first_atom)}' contradicts '{print_atom(atom)}'",
                        False)

    # 2. partition variables into finite (enumerable) and open
    variables: dict[str, None] = {}
    for atom in atoms:
        variables.setdefault(atom.variable)
        if isinstance(atom.operand, Ref):
            variables.setdefault(atom.operand.name)
    finite: dict[str, list[Value]] = {}
    open_vars: list[str] = []
    for name in variables:
        decl = decls.get(name)
        if decl is None:
            open_vars.append(name)
            continue
        if decl.kind is Kind.BOOLEAN:
            finite[name] = [False, True]
        elif decl.domain is not None:
            finite[name] = list(decl.domain)
        else:
            open_vars.append(name)

    for atom in atoms:
        if isinstance(atom.operand, Ref):
            if atom.variable in open_vars or atom.operand.name in open_vars:
                pairwise_caveat = True

    names = sorted(finite)
    space = 1
    for name in names:
        space *= len(finite[name])
    if space > _BRANCH_CAP:
        # fall back to per-variable analysis only
        ok, reason = _intervals_satisfiable(atoms, {}, open_vars + names)
        return ok, reason, True

    first_reason = ""
    for combo in itertools.product(*(finite[name] for name in names)):
        assignment = dict(zip(names, combo))
        ok, reason = _assignment_satisfiable(atoms, assignment, open_vars)
        if ok:
            return True, "", pairwise_caveat
        if not first_reason:
            first_reason = reason
    if not names:
        ok, reason = _intervals_satisfiable(atoms, {}, open_vars)
        return ok, reason, pairwise_caveat
    reason = first_reason or _pair_conflict(atoms, finite) or (
        "no combination of " + ", ".join(names) + " satisfies the condition")
    return False, reason, pairwise_caveat


def _assignment_satisfiable(atoms: list[Atom], assignment: dict[str, Value],
                            open_vars: list[str]) -> tuple[bool, str]:
    residual: list[Atom] = []
    for atom in atoms:
        lhs_known = atom.variable in assignment
        if isinstance(atom.operand, Ref):
            rhs_known = atom.operand.name in assignment
            if lhs_known and rhs_known:
                if not compare(atom.op, assignment[atom.variable],
                               assignment[atom.operand.name]):
                    return False, f"'{print_atom(atom)}' fails"
            elif lhs_known:
                # constant op var  ->  var (swapped op) constant
                residual.append(Atom(atom.operand.name, _SWAP[atom.op],
                                     Lit(assignment[atom.variable])))
            elif rhs_known:
                residual.append(Atom(atom.variable, atom.op,
                                     Lit(assignment[atom.operand.name])))
            # open-open pairs were handled pairwise
        elif lhs_known:
            if not compare(atom.op, assignment[atom.variable], atom.operand.value):
                return False, f"'{print_atom(atom)}' fails"
        else:
            residual.append(atom)
    return _intervals_satisfiable(residual, assignment, open_vars)


def _intervals_satisfiable(atoms: list[Atom], assignment: dict[str, Value],
                           open_vars: list[str]) -> tuple[bool, str]:
    """Per-variable interval/pin analysis over literal atoms."""
    by_var: dict[str, list[Atom]] = {}
    for atom in atoms:
        if isinstance(atom.operand, Lit):
            by_var.setdefault(atom.variable, []).append(atom)
    for name, members in by_var.items():
        pin: tuple[Atom, Value] | None = None
        lower: tuple[Atom, Value, bool] | None = None  # (atom, value, strict)
        upper: tuple[Atom, Value, bool] | None = None
        not_equal: list[tuple[Atom, Value]] = []
        for atom in members:
            value = atom.operand.value
            if atom.op == "=":
                if pin is not None and not compare("=", pin[1], value):
                    return False, f"'{print_atom(pin[0])}' contradicts '{print_atom(atom)}'"
                pin = (atom, value)
            elif atom.op == "!=":
                not_equal.append((atom, value))
            elif atom.op in (">", ">="):
                strict = atom.op == ">"
                if lower is None or compare(">", value, lower[1]) or (
                        strict and compare("=", value, lower[1]) and not lower[2]):
                    lower = (atom, value, strict)
            else:  # < or <=
                strict = atom.op == "<"
                if upper is None or compare("<", value, upper[1]) or (
                        strict and compare("=", value, upper[1]) and not upper[2]):
                    upper = (atom, value, strict)
        if pin is not None:
            for atom in members:
                if atom is pin[0]:
                    continue
                if not compare(atom.op, pin[1], atom.operand.value):
                    return False, f"'{print_atom(pin[0])}' contradicts '{print_atom(atom)}'"
            continue
        if lower is not None and upper is not None:
            if compare(">", lower[1], upper[1]):
                return False, f"'{print_atom(lower[0])}' contradicts '{print_atom(upper[0])}'"
            if compare("=", lower[1], upper[1]):
                if lower[2] or upper[2]:
                    return False, f"'{print_atom(lower[0])}' contradicts '{print_atom(upper[0])}'"
                for atom, value in not_equal:
                    if compare("=", value, lower[1]):
                        return (False,
                                f"'{print_atom(atom)}' excludes the only value allowed by "
                                f"'{print_atom(lower[0])}' and '{print_atom(upper[0])}'")
    return True, ""


def _pair_conflict(atoms: list[Atom], finite: dict[str, list[Value]]) -> str:
    """Find a two-atom contradiction to cite after a joint-enumeration failure."""
    for first, second in itertools.combinations(atoms, 2):
        pair_vars: dict[str, None] = {}
        for atom in (first, second):
            pair_vars.setdefault(atom.variable)
            if isinstance(atom.operand, Ref):
                pair_vars.setdefault(atom.operand.name)
        if any(name not in finite for name in pair_vars):
            continue
        names = sorted(pair_vars)
        conflict = True
        for combo in itertools.product(*(finite[name] for name in names)):
            assignment = dict(zip(names, combo))
            ok = all(
                compare(atom.op, assignment[atom.variable],
                        assignment[atom.operand.name] if isinstance(atom.operand, Ref)
                        else atom.operand.value)
                for atom in (first, second))
            if ok:
                conflict = False
                break
        if conflict:
            return f"'{print_atom(first)}' contradicts '{print_atom(second)}'"
    return ""


# --- run everything -------------------------------------------------------------

def run_all_checks(model: DecisionModel, service: str | None = None,
                   graph: PropertyGraph | None = None) -> list[CheckReport]:
    """The five checks in fixed order; without a service, service checks
    cover every service of the model."""
    if graph is None:
        from .builder import build_model_graph
        graph = build_model_graph(model)
    return [
        check_messages_used(graph, service),
        check_io_paths(graph, service),
        check_variables_used(graph),
        check_variables_assigned(graph),
        check_logical(model, graph),
    ]


def get_check(check_id: str):
    """The check function for a catalogue id; raises for unknown ids."""
    table = {
        "messages_used": lambda model, graph, service: check_messages_used(graph, service),
        "io_paths": lambda model, graph, service: check_io_paths(graph, service),
        "variables_used": lambda model, graph, service: check_variables_used(graph),
        "variables_assigned": lambda model, graph, service: check_variables_assigned(graph),
        "logical": lambda model, graph, service: check_logical(model, graph),
    }
    if check_id not in table:
        raise VerificationError(
            f"unknown check {check_id!r}; available: {', '.join(CHECK_IDS)}")
    return table[check_id]
