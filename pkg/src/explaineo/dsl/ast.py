"""Syntax tree for the decision-model language.

A model has three facets: object types with their variables and relations,
rules (condition + single derivation or calculation action), and services
with input/output messages. Source positions are carried for diagnostics
but excluded from structural equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from ..values import Kind, Value


@dataclass(frozen=True)
class Pos:
    line: int = 0
    column: int = 0


_NOPOS = Pos()


@dataclass(frozen=True)
class SourceRef:
    label: str
    uri: str


@dataclass(frozen=True)
class VariableDecl:
    name: str
    kind: Kind
    domain: tuple[Value, ...] | None = None
    unit: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Relation:
    target: str
    name: str
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class ObjectType:
    name: str
    variables: tuple[VariableDecl, ...] = ()
    relations: tuple[Relation, ...] = ()
    pos: Pos = field(default=_NOPOS, compare=False)


# --- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: Value


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"


Expr = Union[Lit, Ref, Neg, BinOp]


def expr_variables(expr: Expr) -> Iterator[str]:
    if isinstance(expr, Ref):
        yield expr.name
    elif isinstance(expr, Neg):
        yield from expr_variables(expr.operand)
    elif isinstance(expr, BinOp):
        yield from expr_variables(expr.left)
        yield from expr_variables(expr.right)


# --- conditions ------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    variable: str
    op: str  # = != < <= > >=
    operand: Union[Lit, Ref]
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Not:
    operand: "Cond"


@dataclass(frozen=True)
class And:
    operands: tuple["Cond", ...]


@dataclass(frozen=True)
class Or:
    operands: tuple["Cond", ...]


Cond = Union[Atom, Not, And, Or]


def condition_atoms(cond: Cond) -> Iterator[Atom]:
    """All atoms of a condition, in left-to-right source order."""
    if isinstance(cond, Atom):
        yield cond
    elif isinstance(cond, Not):
        yield from condition_atoms(cond.operand)
    else:
        for child in cond.operands:
            yield from condition_atoms(child)


def condition_variables(cond: Cond) -> list[str]:
    """Distinct variables mentioned by a condition, in first-use order."""
    seen: dict[str, None] = {}
    for atom in condition_atoms(cond):
        seen.setdefault(atom.variable)
        if isinstance(atom.operand, Ref):
            seen.setdefault(atom.operand.name)
    return list(seen)


# --- rules and services ----------------------------------------------------

DERIVATION = "derivation"
CALCULATION = "calculation"


@dataclass(frozen=True)
class Action:
    target: str
    expr: Expr
    pos: Pos = field(default=_NOPOS, compare=False)

    @property
    def kind(self) -> str:
        """A literal-valued action derives; anything else calculates."""
        return DERIVATION if isinstance(self.expr, Lit) else CALCULATION

    def input_variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for name in expr_variables(self.expr):
            seen.setdefault(name)
        return list(seen)


@dataclass(frozen=True)
class Rule:
    name: str
    action: Action
    condition: Cond | None = None
    source: SourceRef | None = None
    pos: Pos = field(default=_NOPOS, compare=False)

    def condition_variables(self) -> list[str]:
        return condition_variables(self.condition) if self.condition else []

    def referenced_variables(self) -> list[str]:
        """Every variable the rule reads, conditions first."""
        seen: dict[str, None] = {}
        for name in self.condition_variables():
            seen.setdefault(name)
        for name in self.action.input_variables():
            seen.setdefault(name)
        return list(seen)


@dataclass(frozen=True)
class Message:
    name: str
    variables: tuple[str, ...]
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Service:
    name: str
    input_messages: tuple[Message, ...] = ()
    output_messages: tuple[Message, ...] = ()
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class DecisionModel:
    name: str
    version: str = "1"
    object_model: tuple[ObjectType, ...] = ()
    rule_model: tuple[Rule, ...] = ()
    service_model: tuple[Service, ...] = ()

    def variable_decls(self) -> dict[str, VariableDecl]:
        """Declared variables by name, in declaration order."""
        decls: dict[str, VariableDecl] = {}
        for obj in self.object_model:
            for var in obj.variables:
                decls.setdefault(var.name, var)
        return decls

    def owner_of(self, variable: str) -> ObjectType | None:
        for obj in self.object_model:
            for var in obj.variables:
                if var.name == variable:
                    return obj
        return None

    def rule(self, name: str) -> Rule | None:
        for rule in self.rule_model:
            if rule.name == name:
                return rule
        return None

    def service(self, name: str) -> Service | None:
        for service in self.service_model:
            if service.name == name:
                return service
        return None

    def input_variables(self, service: Service | None = None) -> list[str]:
        """Variables of input messages (of one service, or all services)."""
        services = [service] if service else list(self.service_model)
        seen: dict[str, None] = {}
        for svc in services:
            for msg in svc.input_messages:
                for name in msg.variables:
                    seen.setdefault(name)
        return list(seen)

    def output_variables(self, service: Service | None = None) -> list[str]:
        services = [service] if service else list(self.service_model)
        seen: dict[str, None] = {}
        for svc in services:
            for msg in svc.output_messages:
                for name in msg.variables:
                    seen.setdefault(name)
        return list(seen)

    def rules_deriving(self, variable: str) -> list[Rule]:
        return [r for r in self.rule_model if r.action.target == variable]
