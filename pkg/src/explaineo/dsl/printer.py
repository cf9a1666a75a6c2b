"""Canonical pretty-printer: parse(print_model(m)) is structurally equal to m."""
from __future__ import annotations

from .ast import (
    Action, And, Atom, BinOp, Cond, DecisionModel, Expr, Lit, Neg, Not,
    ObjectType, Or, Ref, Rule, Service,
)
from ..values import literal_dsl

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def print_model(model: DecisionModel) -> str:
    lines: list[str] = [f'model {model.name} "{model.version}"']
    for obj in model.object_model:
        lines.append("")
        lines.extend(_object_lines(obj))
    for rule in model.rule_model:
        lines.append("")
        lines.extend(_rule_lines(rule))
    for service in model.service_model:
        lines.append("")
        lines.extend(_service_lines(service))
    return "\n".join(lines) + "\n"


def _object_lines(obj: ObjectType) -> list[str]:
    lines = [f"object {obj.name} {{"]
    for var in obj.variables:
        decl = f"  {var.name}: {var.kind.value}"
        if var.domain is not None:
            decl += " in [" + ", ".join(literal_dsl(v) for v in var.domain) + "]"
        if var.unit is not None:
            decl += f' unit "{var.unit}"'
        lines.append(decl)
    for rel in obj.relations:
        lines.append(f"  relates_to {rel.target} as {rel.name}")
    lines.append("}")
    return lines


def _rule_lines(rule: Rule) -> list[str]:
    lines = [f"rule {rule.name}"]
    if rule.source is not None:
        lines.append(f'  source {literal_dsl(rule.source.label)} {literal_dsl(rule.source.uri)}')
    if rule.condition is not None:
        lines.append(f"  if {print_condition(rule.condition)}")
    lines.append(f"  then {rule.action.target} = {print_expr(rule.action.expr)}")
    return lines


def _service_lines(service: Service) -> list[str]:
    lines = [f"service {service.name} {{"]
    for msg in service.input_messages:
        lines.append(f"  in {msg.name}({', '.join(msg.variables)})")
    for msg in service.output_messages:
        lines.append(f"  out {msg.name}({', '.join(msg.variables)})")
    lines.append("}")
    return lines


def print_condition(cond: Cond) -> str:
    """Render a condition with minimal parentheses (and binds over or)."""
    if isinstance(cond, Atom):
        return print_atom(cond)
    if isinstance(cond, Not):
        inner = print_condition(cond.operand)
        if isinstance(cond.operand, (And, Or)):
            inner = f"({inner})"
        return f"not {inner}"
    if isinstance(cond, And):
        parts = []
        for child in cond.operands:
            text = print_condition(child)
            # parens keep nested groups as written (a and (b and c)) intact
            if isinstance(child, (Or, And)):
                text = f"({text})"
            parts.append(text)
        return " and ".join(parts)
    if isinstance(cond, Or):
        parts = []
        for child in cond.operands:
            text = print_condition(child)
            if isinstance(child, Or):
                text = f"({text})"
            parts.append(text)
        return " or ".join(parts)
    raise TypeError(f"not a condition: {cond!r}")


def print_atom(atom: Atom) -> str:
    operand = atom.operand.name if isinstance(atom.operand, Ref) else literal_dsl(atom.operand.value)
    return f"{atom.variable} {atom.op} {operand}"


def print_expr(expr: Expr, parent_precedence: int = 0) -> str:
    if isinstance(expr, Lit):
        return literal_dsl(expr.value)
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Neg):
        return f"-{print_expr(expr.operand, 3)}"
    if isinstance(expr, BinOp):
        prec = _PRECEDENCE[expr.op]
        left = print_expr(expr.left, prec)
        # the right operand always parenthesizes at equal precedence so the
        # printed text re-parses to the same tree (parsing is left-associative)
        right = print_expr(expr.right, prec + 1)
        text = f"{left} {expr.op} {right}"
        if prec < parent_precedence:
            text = f"({text})"
        return text
    raise TypeError(f"not an expression: {expr!r}")
