"""Seeded random decision models for property and oracle tests."""
from __future__ import annotations

import datetime as dt
import random
from decimal import Decimal

from explaineo.dsl import (
    Action, And, Atom, BinOp, DecisionModel, Lit, Message, Not, ObjectType,
    Or, Ref, Relation, Rule, Service, VariableDecl,
)
from explaineo.values import Kind

_DATES = [dt.date(2023, 1, 31), dt.date(2023, 2, 28), dt.date(2023, 3, 31)]
_ENUM_DOMAINS = [("red", "green", "blue"), ("low", "high"), ("a", "b", "c")]


def _random_literal(rng: random.Random, kind: Kind, domain=None):
    if kind is Kind.BOOLEAN:
        return rng.choice([True, False])
    if kind is Kind.NUMBER:
        return rng.choice([0, 1, 2, 3, 5, 10, 2.5])
    if kind is Kind.MONEY:
        return rng.choice([0, 10, 99.5, 1300])
    if kind is Kind.DATE:
        return rng.choice(_DATES)
    if kind is Kind.ENUM:
        return rng.choice(domain)
    return rng.choice(["x", "y", "z"])


def random_variables(rng: random.Random, count: int,
                     kinds: tuple[Kind, ...]) -> list[VariableDecl]:
    decls = []
    for index in range(count):
        kind = rng.choice(kinds)
        domain = None
        if kind is Kind.ENUM:
            domain = rng.choice(_ENUM_DOMAINS)
        elif kind in (Kind.NUMBER, Kind.DATE) and rng.random() < 0.3:
            pool = _DATES if kind is Kind.DATE else [0, 1, 2, 3]
            domain = tuple(sorted(set(rng.sample(pool, rng.randint(2, 3))),
                                  key=str))
        decls.append(VariableDecl(f"v{index}", kind, domain))
    return decls


def random_condition(rng: random.Random, decls: list[VariableDecl], depth: int = 2):
    if depth == 0 or rng.random() < 0.45:
        decl = rng.choice(decls)
        if decl.kind in (Kind.NUMBER, Kind.MONEY, Kind.DATE):
            op = rng.choice(["=", "!=", "<", "<=", ">", ">="])
        else:
            op = rng.choice(["=", "!="])
        same_kind = [d for d in decls if d.kind == decl.kind and d.name != decl.name]
        if same_kind and rng.random() < 0.25:
            operand = Ref(rng.choice(same_kind).name)
        else:
            operand = Lit(_random_literal(rng, decl.kind, decl.domain))
        atom = Atom(decl.name, op, operand)
        return Not(atom) if rng.random() < 0.2 else atom
    connective = rng.choice([And, Or])
    children = tuple(random_condition(rng, decls, depth - 1)
                     for _ in range(rng.randint(2, 3)))
    node = connective(children)
    return Not(node) if rng.random() < 0.1 else node


def _random_calculation(rng: random.Random, decls: list[VariableDecl], target: VariableDecl):
    numbers = [d for d in decls if d.kind is Kind.NUMBER]
    if target.kind in (Kind.NUMBER, Kind.MONEY) and numbers and rng.random() < 0.7:
        left = Ref(rng.choice(numbers).name)
        right = Lit(rng.choice([1, 2, 3]))
        return BinOp(rng.choice(["+", "-", "*"]), left, right)
    return Lit(_random_literal(rng, target.kind, target.domain))


def random_model(rng: random.Random, name: str = "random_model",
                 var_count: int = 8, rule_count: int = 5,
                 kinds: tuple[Kind, ...] = (Kind.BOOLEAN, Kind.ENUM, Kind.NUMBER,
                                            Kind.DATE),
                 with_service: bool = True) -> DecisionModel:
    decls = random_variables(rng, var_count, kinds)
    split = max(1, var_count // 2)
    objects = (
        ObjectType("Alpha", tuple(decls[:split]),
                   (Relation("Beta", "linked_to"),) if var_count > split else ()),
        ObjectType("Beta", tuple(decls[split:])),
    )
    rules = []
    for index in range(rule_count):
        target = rng.choice(decls)
        condition = random_condition(rng, decls) if rng.random() < 0.85 else None
        expr = _random_calculation(rng, decls, target)
        rules.append(Rule(f"r{index}", Action(target.name, expr), condition))
    services = ()
    if with_service:
        names = [d.name for d in decls]
        rng.shuffle(names)
        input_count = max(1, len(names) // 3)
        output_pool = [r.action.target for r in rules] or names
        inputs = tuple(sorted(names[:input_count]))
        outputs = tuple(sorted(set(rng.sample(output_pool,
                                              min(2, len(output_pool))))))
        services = (Service("Svc",
                            (Message("In", inputs),),
                            (Message("Out", outputs),)),)
    return DecisionModel(name=name, version="1", object_model=objects,
                         rule_model=tuple(rules), service_model=services)


def random_inputs(rng: random.Random, model: DecisionModel) -> dict:
    decls = model.variable_decls()
    inputs = {}
    for name in model.input_variables():
        decl = decls[name]
        value = _random_literal(rng, decl.kind, decl.domain)
        if decl.domain is not None and decl.kind is not Kind.MONEY:
            value = rng.choice(list(decl.domain))
        if decl.kind is Kind.MONEY:
            value = Decimal(str(value)).quantize(Decimal("0.01"))
        inputs[name] = value
    return inputs
