"""The decision-model language: parsing, validation, and pretty-printing."""
from __future__ import annotations

from .ast import (
    Action, And, Atom, BinOp, Cond, DecisionModel, Expr, Lit, Message, Neg,
    Not, ObjectType, Or, Pos, Ref, Relation, Rule, Service, SourceRef,
    VariableDecl, condition_atoms, condition_variables, expr_variables,
    CALCULATION, DERIVATION,
)
from .errors import Diagnostic, ModelError, error, warning
from .parser import parse_syntax
from .printer import print_atom, print_condition, print_expr, print_model
from .validator import validate_model

__all__ = [
    "Action", "And", "Atom", "BinOp", "CALCULATION", "Cond", "DERIVATION",
    "DecisionModel", "Diagnostic", "Expr", "Lit", "Message", "ModelError",
    "Neg", "Not", "ObjectType", "Or", "Pos", "Ref", "Relation", "Rule",
    "Service", "SourceRef", "VariableDecl", "condition_atoms",
    "condition_variables", "error", "expr_variables", "parse_model",
    "parse_syntax", "print_atom", "print_condition", "print_expr",
    "print_model", "validate_model", "warning",
]


def parse_model(text: str) -> DecisionModel:
    """Parse and validate model source text.

    Raises ModelError carrying positioned diagnostics when the text is not
    syntactically well-formed or violates a model invariant. Never raises
    anything else, whatever the input.
    """
    model, diagnostics = parse_syntax(text)
    errors = [d for d in diagnostics if d.severity == "error"]
    if errors or model is None:
        raise ModelError(_by_position(errors or diagnostics))
    semantic = validate_model(model)
    errors = [d for d in semantic if d.severity == "error"]
    if errors:
        raise ModelError(_by_position(errors))
    return model


def _by_position(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    return sorted(diagnostics, key=lambda d: (d.line, d.column))
