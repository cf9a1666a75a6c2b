"""Semantic validation: the invariants a parsed model must satisfy."""
from __future__ import annotations

from urllib.parse import urlparse

from .ast import (
    Atom, BinOp, Cond, DecisionModel, Expr, Lit, Neg, Not, Ref, Rule,
    condition_atoms,
)
from .errors import Diagnostic, error, warning
from .printer import print_atom
from ..values import Kind, kinds_comparable, literal_kind, matches_kind

_NUMERIC = {Kind.NUMBER, Kind.MONEY}


def validate_model(model: DecisionModel) -> list[Diagnostic]:
    """Check every model invariant; an empty result means the model is valid."""
    diags: list[Diagnostic] = []
    decls = _check_declarations(model, diags)
    _check_rules(model, decls, diags)
    _check_services(model, decls, diags)
    return diags


def _check_declarations(model: DecisionModel, diags: list[Diagnostic]) -> dict:
    object_names: set[str] = set()
    decls: dict[str, object] = {}
    for obj in model.object_model:
        if obj.name in object_names:
            diags.append(error(f"duplicate object type {obj.name!r}", obj.pos.line, obj.pos.column, obj.name))
        object_names.add(obj.name)
        for var in obj.variables:
            if var.name in decls:
                diags.append(error(f"variable {var.name!r} is declared more than once",
                                   var.pos.line, var.pos.column, var.name))
                continue
            decls[var.name] = var
            if var.kind is Kind.ENUM and not var.domain:
                diags.append(error(f"enum variable {var.name!r} needs a non-empty domain",
                                   var.pos.line, var.pos.column, var.name))
            if var.domain:
                for value in var.domain:
                    value_kind = literal_kind(value)
                    compatible = (
                        value_kind == var.kind
                        or (var.kind in _NUMERIC and value_kind in _NUMERIC)
                        or (var.kind is Kind.ENUM and value_kind is Kind.TEXT)
                    )
                    if not compatible:
                        diags.append(error(
                            f"domain value {value!r} does not fit kind {var.kind.value}",
                            var.pos.line, var.pos.column, var.name))
    for obj in model.object_model:
        for rel in obj.relations:
            if rel.target not in object_names:
                diags.append(error(f"relation target {rel.target!r} is not a declared object type",
                                   rel.pos.line, rel.pos.column, obj.name))
    return decls


def _check_rules(model: DecisionModel, decls: dict, diags: list[Diagnostic]) -> None:
    rule_names: set[str] = set()
    for rule in model.rule_model:
        if rule.name in rule_names:
            diags.append(error(f"duplicate rule {rule.name!r}", rule.pos.line, rule.pos.column, rule.name))
        rule_names.add(rule.name)

        if rule.source is not None:
            parsed = urlparse(rule.source.uri)
            if not (parsed.scheme and (parsed.netloc or parsed.path)):
                diags.append(error(f"source uri {rule.source.uri!r} is not a valid URI",
                                   rule.pos.line, rule.pos.column, rule.name))

        target_decl = decls.get(rule.action.target)
        if target_decl is None:
            diags.append(error(f"rule {rule.name!r} derives undeclared variable {rule.action.target!r}",
                               rule.action.pos.line, rule.action.pos.column, rule.name))
        if rule.condition is not None:
            _check_condition(rule, rule.condition, decls, diags)
        expr_kind = _check_expr(rule, rule.action.expr, decls, diags)
        if target_decl is not None and expr_kind is not None:
            if not _assignable(target_decl.kind, expr_kind):
                diags.append(error(
                    f"rule {rule.name!r} assigns a {expr_kind.value} result to "
                    f"{rule.action.target!r} ({target_decl.kind.value})",
                    rule.action.pos.line, rule.action.pos.column, rule.name))
            elif target_decl.kind is Kind.ENUM and isinstance(rule.action.expr, Lit):
                if target_decl.domain and rule.action.expr.value not in target_decl.domain:
                    diags.append(warning(
                        f"rule {rule.name!r} assigns {rule.action.expr.value!r}, which is outside "
                        f"the domain of {rule.action.target!r}",
                        rule.action.pos.line, rule.action.pos.column, rule.name))


def _check_condition(rule: Rule, cond: Cond, decls: dict, diags: list[Diagnostic]) -> None:
    for atom in condition_atoms(cond):
        var_decl = decls.get(atom.variable)
        if var_decl is None:
            diags.append(error(f"condition references undeclared variable {atom.variable!r}",
                               atom.pos.line, atom.pos.column, rule.name))
            continue
        if isinstance(atom.operand, Ref):
            operand_decl = decls.get(atom.operand.name)
            if operand_decl is None:
                diags.append(error(f"condition references undeclared variable {atom.operand.name!r}",
                                   atom.pos.line, atom.pos.column, rule.name))
                continue
            operand_kind = operand_decl.kind
        else:
            operand_kind = literal_kind(atom.operand.value)
        if not kinds_comparable(atom.op, var_decl.kind, operand_kind):
            diags.append(error(
                f"comparator {atom.op!r} cannot relate {var_decl.kind.value} and "
                f"{operand_kind.value} in '{print_atom(atom)}'",
                atom.pos.line, atom.pos.column, rule.name))
        elif (var_decl.kind is Kind.ENUM and isinstance(atom.operand, Lit)
              and var_decl.domain and atom.operand.value not in var_decl.domain):
            diags.append(warning(
                f"'{print_atom(atom)}' compares against a value outside the domain of {atom.variable!r}",
                atom.pos.line, atom.pos.column, rule.name))


def _check_expr(rule: Rule, expr: Expr, decls: dict, diags: list[Diagnostic]) -> Kind | None:
    """Infer the expression's kind, reporting undeclared variables and type misuse."""
    if isinstance(expr, Lit):
        return literal_kind(expr.value)
    if isinstance(expr, Ref):
        decl = decls.get(expr.name)
        if decl is None:
            diags.append(error(f"rule {rule.name!r} references undeclared variable {expr.name!r}",
                               rule.action.pos.line, rule.action.pos.column, rule.name))
            return None
        return decl.kind
    if isinstance(expr, Neg):
        inner = _check_expr(rule, expr.operand, decls, diags)
        if inner is not None and inner not in (Kind.NUMBER, Kind.MONEY):
            diags.append(error(f"rule {rule.name!r} negates a {inner.value} value",
                               rule.action.pos.line, rule.action.pos.column, rule.name))
            return None
        return inner
    if isinstance(expr, BinOp):
        left = _check_expr(rule, expr.left, decls, diags)
        right = _check_expr(rule, expr.right, decls, diags)
        if left is None or right is None:
            return None
        result = _binop_kind(expr.op, left, right)
        if result is None:
            diags.append(error(
                f"rule {rule.name!r} applies {expr.op!r} to {left.value} and {right.value}",
                rule.action.pos.line, rule.action.pos.column, rule.name))
        return result
    raise TypeError(f"not an expression: {expr!r}")


def _binop_kind(op: str, left: Kind, right: Kind) -> Kind | None:
    if left in _NUMERIC and right in _NUMERIC:
        return Kind.MONEY if Kind.MONEY in (left, right) else Kind.NUMBER
    if left is Kind.DATE and right is Kind.DATE:
        return Kind.NUMBER if op == "-" else None
    if left is Kind.DATE and right is Kind.NUMBER and op in ("+", "-"):
        return Kind.DATE
    if left is Kind.NUMBER and right is Kind.DATE and op == "+":
        return Kind.DATE
    return None


def _assignable(target: Kind, value: Kind) -> bool:
    if target == value:
        return True
    if target is Kind.MONEY and value is Kind.NUMBER:
        return True
    if target is Kind.ENUM and value is Kind.TEXT:
        return True
    return False


def _check_services(model: DecisionModel, decls: dict, diags: list[Diagnostic]) -> None:
    service_names: set[str] = set()
    for service in model.service_model:
        if service.name in service_names:
            diags.append(error(f"duplicate service {service.name!r}",
                               service.pos.line, service.pos.column, service.name))
        service_names.add(service.name)
        message_names: set[str] = set()
        for msg in list(service.input_messages) + list(service.output_messages):
            if msg.name in message_names:
                diags.append(error(f"duplicate message {msg.name!r} in service {service.name!r}",
                                   msg.pos.line, msg.pos.column, service.name))
            message_names.add(msg.name)
            for name in msg.variables:
                if name not in decls:
                    diags.append(error(f"message {msg.name!r} lists undeclared variable {name!r}",
                                       msg.pos.line, msg.pos.column, service.name))
    # a variable may appear in at most one input and one output message (globally)
    seen_in: dict[str, str] = {}
    seen_out: dict[str, str] = {}
    for service in model.service_model:
        for msg in service.input_messages:
            for name in msg.variables:
                if name in seen_in:
                    diags.append(error(
                        f"variable {name!r} appears in input messages {seen_in[name]!r} and {msg.name!r}",
                        msg.pos.line, msg.pos.column, service.name))
                else:
                    seen_in[name] = msg.name
        for msg in service.output_messages:
            for name in msg.variables:
                if name in seen_out:
                    diags.append(error(
                        f"variable {name!r} appears in output messages {seen_out[name]!r} and {msg.name!r}",
                        msg.pos.line, msg.pos.column, service.name))
                else:
                    seen_out[name] = msg.name
