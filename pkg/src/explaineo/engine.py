"""Forward-chaining rule engine with derivation traces.

Evaluation runs to a fixpoint in rounds: a rule fires when every variable
it reads is bound, its condition holds, and its target is still unset.
Variables are assigned exactly once; two rules competing for the same unset
target in the same round are a model conflict, not a priority decision.
The engine also answers what-if (counterfactual re-evaluation) and how-to
(exhaustive minimal-assignment search over finite input domains).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .dsl import (
    And, Atom, BinOp, Cond, DecisionModel, Expr, Lit, Neg, Not, Or, Ref,
    Rule, condition_atoms, print_atom,
)
from .values import (
    Kind, Value, arithmetic, compare, decode_value, encode_value,
    matches_kind, negate, round_money,
)


class EngineError(Exception):
    pass


class InputError(EngineError):
    """An input binding is unknown, not an input variable, or ill-typed."""


class OverrideError(EngineError):
    """A counterfactual override targets a variable that is not an input."""


class ModelConflict(EngineError):
    """Two rules were simultaneously eligible to set the same variable."""

    def __init__(self, variable: str, rule_ids: list[str]):
        self.variable = variable
        self.rule_ids = list(rule_ids)
        super().__init__(
            f"rules {', '.join(repr(r) for r in self.rule_ids)} are both eligible "
            f"to set {variable!r}"
        )


class UnboundedSearch(EngineError):
    """A how-to search cannot enumerate: some open input has no finite domain."""


INPUT = "input"
DERIVED = "derived"

COMPLETE = "complete"
PARTIAL = "partial"


@dataclass(frozen=True)
class Binding:
    variable: str
    value: Value
    origin: str  # INPUT or DERIVED
    rule: str | None = None  # the deriving rule when origin == DERIVED


@dataclass(frozen=True)
class AtomEval:
    atom: str
    satisfied: bool


@dataclass(frozen=True)
class TraceStep:
    rule: str
    conditions: tuple[AtomEval, ...]
    consumed: tuple[tuple[str, Value], ...]
    produced_variable: str
    produced_value: Value


@dataclass(frozen=True)
class DecisionInstance:
    model: DecisionModel
    bindings: Mapping[str, Binding]
    trace: tuple[TraceStep, ...]
    status: str  # COMPLETE or PARTIAL

    @property
    def inputs(self) -> dict[str, Value]:
        return {n: b.value for n, b in self.bindings.items() if b.origin == INPUT}

    @property
    def derived(self) -> dict[str, Value]:
        return {n: b.value for n, b in self.bindings.items() if b.origin == DERIVED}

    def value_of(self, variable: str) -> Value | None:
        binding = self.bindings.get(variable)
        return None if binding is None else binding.value

    def fired_rules(self) -> list[str]:
        return [step.rule for step in self.trace]


def evaluate(model: DecisionModel, inputs: Mapping[str, Value]) -> DecisionInstance:
    """Run the model over the given input bindings to fixpoint."""
    bindings = _check_inputs(model, inputs)
    trace: list[TraceStep] = []
    while True:
        eligible: list[tuple[Rule, list[AtomEval]]] = []
        by_target: dict[str, list[Rule]] = {}
        for rule in model.rule_model:
            if rule.action.target in bindings:
                continue
            if not all(name in bindings for name in rule.referenced_variables()):
                continue
            atom_evals, holds = _evaluate_condition(rule, bindings)
            if holds:
                eligible.append((rule, atom_evals))
                by_target.setdefault(rule.action.target, []).append(rule)
        for target, rules in by_target.items():
            if len(rules) > 1:
                raise ModelConflict(target, [r.name for r in rules])
        if not eligible:
            break
        for rule, atom_evals in eligible:
            value = _evaluate_action(model, rule, bindings)
            consumed = tuple(
                (name, bindings[name].value) for name in rule.referenced_variables()
            )
            bindings[rule.action.target] = Binding(rule.action.target, value, DERIVED, rule.name)
            trace.append(TraceStep(rule.name, tuple(atom_evals), consumed,
                                   rule.action.target, value))
    outputs = model.output_variables()
    status = COMPLETE if all(name in bindings for name in outputs) else PARTIAL
    return DecisionInstance(model, dict(bindings), tuple(trace), status)


def evaluate_counterfactual(instance: DecisionInstance,
                            overrides: Mapping[str, Value]) -> DecisionInstance:
    """Re-evaluate with some inputs replaced; the original instance is untouched."""
    input_vars = set(instance.model.input_variables())
    for name in overrides:
        if name not in input_vars:
            raise OverrideError(f"{name!r} is not an input variable and cannot be overridden")
    patched = dict(instance.inputs)
    patched.update(overrides)
    return evaluate(instance.model, patched)


def replay_trace(model: DecisionModel, inputs: Mapping[str, Value],
                 trace: tuple[TraceStep, ...]) -> dict[str, Value]:
    """Re-derive values by applying the trace steps in order.

    Checks, step by step, that each rule was applicable (inputs bound, the
    condition holds, the target unset) and recomputes each produced value.
    """
    bindings = _check_inputs(model, inputs)
    derived: dict[str, Value] = {}
    for step in trace:
        rule = model.rule(step.rule)
        if rule is None:
            raise EngineError(f"trace step names unknown rule {step.rule!r}")
        if rule.action.target in bindings:
            raise EngineError(f"trace sets {rule.action.target!r} twice")
        for name in rule.referenced_variables():
            if name not in bindings:
                raise EngineError(
                    f"trace step {step.rule!r} reads unbound variable {name!r}")
        _, holds = _evaluate_condition(rule, bindings)
        if not holds:
            raise EngineError(f"condition of {step.rule!r} does not hold at its step")
        value = _evaluate_action(model, rule, bindings)
        bindings[rule.action.target] = Binding(rule.action.target, value, DERIVED, rule.name)
        derived[rule.action.target] = value
    return derived


# --- how-to search ----------------------------------------------------------

@dataclass(frozen=True)
class HowToSearch:
    """Every minimal open-input assignment that achieves the goal.

    An empty `assignments` means the goal is unreachable over the searched
    space; `searched` is the number of candidate assignments considered.
    """
    goal_variable: str
    goal_value: Value
    assignments: tuple[dict[str, Value], ...]
    searched: int

    @property
    def achievable(self) -> bool:
        return bool(self.assignments)


def search_how_to(model: DecisionModel, fixed_inputs: Mapping[str, Value],
                  goal: tuple[str, Value], cap: int = 10_000) -> HowToSearch:
    """Enumerate minimal assignments of the open inputs that reach the goal.

    Open inputs must have finite domains (boolean, enum, or a declared value
    list). An assignment is minimal when no strict subset of it also yields
    the goal value. Results are ordered lexicographically by variable-name
    tuple, then by domain position.
    """
    goal_variable, goal_value = goal
    decls = model.variable_decls()
    if goal_variable not in decls:
        raise EngineError(f"unknown goal variable {goal_variable!r}")
    if not model.rules_deriving(goal_variable):
        raise EngineError(f"no rule derives {goal_variable!r}; it cannot be a goal")
    fixed = _check_inputs(model, fixed_inputs)
    open_inputs = [n for n in model.input_variables() if n not in fixed]

    domains: dict[str, list[Value]] = {}
    unbounded: list[str] = []
    for name in open_inputs:
        decl = decls[name]
        if decl.kind is Kind.BOOLEAN:
            domains[name] = [False, True]
        elif decl.domain is not None:
            domains[name] = [_domain_value(decl.kind, v) for v in decl.domain]
        else:
            unbounded.append(name)
    if unbounded:
        raise UnboundedSearch(
            "open inputs without a finite domain: " + ", ".join(sorted(unbounded)))

    space = 1
    for name in open_inputs:
        space *= len(domains[name]) + 1  # +1: the variable may stay unset
    if space > cap:
        raise UnboundedSearch(
            f"search space of {space} candidate assignments exceeds the cap of {cap}")

    base_inputs = {n: b.value for n, b in fixed.items()}
    results: list[dict[str, Value]] = []
    searched = 0
    for size in range(len(open_inputs) + 1):
        for names in itertools.combinations(sorted(open_inputs), size):
            for values in itertools.product(*(domains[n] for n in names)):
                candidate = dict(zip(names, values))
                searched += 1
                if any(_is_subassignment(found, candidate) for found in results):
                    continue  # a smaller assignment already works
                if _achieves(model, base_inputs, candidate, goal_variable, goal_value):
                    results.append(candidate)

    def sort_key(assignment: dict[str, Value]):
        names = tuple(sorted(assignment))
        return names, tuple(domains[n].index(assignment[n]) for n in names)

    results.sort(key=sort_key)
    return HowToSearch(goal_variable, goal_value, tuple(results), searched)


def _domain_value(kind: Kind, raw: Value) -> Value:
    # declared money domains are written as plain numbers
    return round_money(raw) if kind is Kind.MONEY else raw


def _is_subassignment(small: Mapping[str, Value], big: Mapping[str, Value]) -> bool:
    return all(name in big and big[name] == value for name, value in small.items())


def _achieves(model: DecisionModel, base: dict[str, Value],
              candidate: Mapping[str, Value], variable: str, value: Value) -> bool:
    inputs = dict(base)
    inputs.update(candidate)
    try:
        instance = evaluate(model, inputs)
    except EngineError:
        return False
    actual = instance.value_of(variable)
    return actual is not None and compare("=", actual, value)


# --- internals --------------------------------------------------------------

def _check_inputs(model: DecisionModel, inputs: Mapping[str, Value]) -> dict[str, Binding]:
    decls = model.variable_decls()
    input_vars = set(model.input_variables())
    bindings: dict[str, Binding] = {}
    for name, value in inputs.items():
        decl = decls.get(name)
        if decl is None:
            raise InputError(f"unknown variable {name!r}")
        if name not in input_vars:
            raise InputError(f"{name!r} is not an input-message variable")
        if decl.kind is Kind.MONEY and not isinstance(value, bool) and isinstance(value, (int, float, str)):
            value = round_money(value)
        domain = decl.domain if decl.kind is Kind.ENUM else None
        if not matches_kind(value, decl.kind, domain):
            raise InputError(f"value {value!r} does not fit {name!r} ({decl.kind.value})")
        bindings[name] = Binding(name, value, INPUT)
    return bindings


def _evaluate_condition(rule: Rule, bindings: Mapping[str, Binding]) -> tuple[list[AtomEval], bool]:
    if rule.condition is None:
        return [], True
    evals = [AtomEval(print_atom(atom), _atom_holds(atom, bindings))
             for atom in condition_atoms(rule.condition)]
    return evals, _condition_holds(rule.condition, bindings)


def _condition_holds(cond: Cond, bindings: Mapping[str, Binding]) -> bool:
    if isinstance(cond, Atom):
        return _atom_holds(cond, bindings)
    if isinstance(cond, Not):
        return not _condition_holds(cond.operand, bindings)
    if isinstance(cond, And):
        return all(_condition_holds(c, bindings) for c in cond.operands)
    if isinstance(cond, Or):
        return any(_condition_holds(c, bindings) for c in cond.operands)
    raise TypeError(f"not a condition: {cond!r}")


def _atom_holds(atom: Atom, bindings: Mapping[str, Binding]) -> bool:
    left = bindings[atom.variable].value
    right = (bindings[atom.operand.name].value if isinstance(atom.operand, Ref)
             else atom.operand.value)
    return compare(atom.op, left, right)


def _evaluate_action(model: DecisionModel, rule: Rule,
                     bindings: Mapping[str, Binding]) -> Value:
    try:
        value = _evaluate_expr(rule.action.expr, bindings)
    except ValueError as exc:
        raise EngineError(f"rule {rule.name!r}: {exc}") from exc
    decl = model.variable_decls()[rule.action.target]
    if decl.kind is Kind.MONEY:
        # half-up rounding happens only here, at final assignment
        return round_money(value)
    if not matches_kind(value, decl.kind, decl.domain if decl.kind is Kind.ENUM else None):
        raise EngineError(
            f"rule {rule.name!r} produced {value!r}, which does not fit "
            f"{rule.action.target!r} ({decl.kind.value})")
    return value


def _evaluate_expr(expr: Expr, bindings: Mapping[str, Binding]) -> Value:
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Ref):
        return bindings[expr.name].value
    if isinstance(expr, Neg):
        return negate(_evaluate_expr(expr.operand, bindings))
    if isinstance(expr, BinOp):
        left = _evaluate_expr(expr.left, bindings)
        right = _evaluate_expr(expr.right, bindings)
        return arithmetic(expr.op, left, right)
    raise TypeError(f"not an expression: {expr!r}")


# --- instance JSON ----------------------------------------------------------

def instance_to_json(instance: DecisionInstance) -> dict:
    """The instance wire format: model, inputs, derived, trace (+ status)."""
    decls = instance.model.variable_decls()

    def encode(name: str, value: Value) -> object:
        return encode_value(value)

    return {
        "model": instance.model.name,
        "inputs": {n: encode(n, v) for n, v in sorted(instance.inputs.items())},
        "derived": {n: encode(n, v) for n, v in sorted(instance.derived.items())},
        "trace": [
            {
                "rule": step.rule,
                "conditions": [{"atom": e.atom, "satisfied": e.satisfied}
                               for e in step.conditions],
                "consumed": {n: encode(n, v) for n, v in step.consumed},
                "produced": {"variable": step.produced_variable,
                             "value": encode(step.produced_variable, step.produced_value)},
            }
            for step in instance.trace
        ],
        "status": instance.status,
    }


def decode_inputs(model: DecisionModel, raw: Mapping[str, object]) -> dict[str, Value]:
    """Decode a JSON input map using each variable's declared kind."""
    decls = model.variable_decls()
    decoded: dict[str, Value] = {}
    for name, value in raw.items():
        decl = decls.get(name)
        if decl is None:
            raise InputError(f"unknown variable {name!r}")
        try:
            decoded[name] = decode_value(value, decl.kind, decl.domain)
        except ValueError as exc:
            raise InputError(f"input {name!r}: {exc}") from exc
    return decoded


def instance_from_json(model: DecisionModel, doc: Mapping[str, object]) -> DecisionInstance:
    """Rebuild an instance from its wire format by re-evaluating the inputs.

    The stored derived values must match the fresh evaluation; a mismatch
    means the stored instance no longer agrees with the model.
    """
    if doc.get("model") != model.name:
        raise EngineError(
            f"instance belongs to model {doc.get('model')!r}, not {model.name!r}")
    inputs = decode_inputs(model, doc.get("inputs", {}))
    instance = evaluate(model, inputs)
    stored = doc.get("derived", {})
    fresh = instance_to_json(instance)["derived"]
    if dict(stored) != fresh:
        raise EngineError(
            "stored derived values do not match re-evaluation; "
            "the model has likely changed since the instance was stored")
    return instance
