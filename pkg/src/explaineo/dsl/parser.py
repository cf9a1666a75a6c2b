"""Recursive-descent parser for the decision-model language.

Returns a syntactically parsed model plus diagnostics. Panic-mode recovery
resynchronises at the next top-level declaration so one bad rule does not
hide errors in the rest of the file.
"""
from __future__ import annotations

import datetime as dt

from .ast import (
    Action, And, Atom, BinOp, Cond, DecisionModel, Expr, Lit, Message, Neg,
    Not, ObjectType, Or, Pos, Ref, Relation, Rule, Service, SourceRef,
    VariableDecl,
)
from .errors import Diagnostic, error
from .lexer import Token, tokenize
from ..values import Kind

_TOP_LEVEL = {"object", "rule", "service"}
_COMPARATORS = {"=", "!=", "<", "<=", ">", ">="}


class _ParseFailure(Exception):
    pass


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0
        self.diagnostics: list[Diagnostic] = []

    # --- token plumbing ---

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        if token.type != "EOF":
            self.index += 1
        return token

    def at(self, ttype: str, value: str | None = None) -> bool:
        token = self.current
        return token.type == ttype and (value is None or token.value == value)

    def expect(self, ttype: str, value: str | None = None, what: str | None = None) -> Token:
        if self.at(ttype, value):
            return self.advance()
        wanted = what or (value if value is not None else ttype.lower())
        self.fail(f"expected {wanted}, found {self.current}")

    def fail(self, message: str) -> None:
        token = self.current
        self.diagnostics.append(error(message, token.line, token.column))
        raise _ParseFailure

    def pos(self) -> Pos:
        return Pos(self.current.line, self.current.column)

    # --- grammar ---

    def parse_model(self) -> DecisionModel | None:
        if self.at("EOF"):
            self.diagnostics.append(error("empty model", 1, 1))
            return None
        objects: list[ObjectType] = []
        rules: list[Rule] = []
        services: list[Service] = []
        name = "unnamed"
        version = "1"
        try:
            self.expect("KEYWORD", "model")
            name = self.expect("IDENT", what="model name").value
            if self.at("STRING"):
                version = self.advance().value
        except _ParseFailure:
            self.synchronise()
        while not self.at("EOF"):
            try:
                if self.at("KEYWORD", "object"):
                    objects.append(self.parse_object())
                elif self.at("KEYWORD", "rule"):
                    rules.append(self.parse_rule())
                elif self.at("KEYWORD", "service"):
                    services.append(self.parse_service())
                else:
                    self.fail("expected an object, rule or service declaration")
            except _ParseFailure:
                self.synchronise()
        return DecisionModel(
            name=name,
            version=version,
            object_model=tuple(objects),
            rule_model=tuple(rules),
            service_model=tuple(services),
        )

    def synchronise(self) -> None:
        while not self.at("EOF"):
            if self.current.type == "KEYWORD" and self.current.value in _TOP_LEVEL:
                return
            self.advance()

    def parse_object(self) -> ObjectType:
        pos = self.pos()
        self.expect("KEYWORD", "object")
        name = self.expect("IDENT", what="object type name").value
        self.expect("OP", "{")
        variables: list[VariableDecl] = []
        relations: list[Relation] = []
        while not self.at("OP", "}"):
            if self.at("KEYWORD", "relates_to"):
                relations.append(self.parse_relation())
            elif self.at("IDENT"):
                variables.append(self.parse_vardecl())
            else:
                self.fail("expected a variable declaration, relates_to, or '}'")
        self.expect("OP", "}")
        return ObjectType(name, tuple(variables), tuple(relations), pos)

    def parse_vardecl(self) -> VariableDecl:
        pos = self.pos()
        name = self.expect("IDENT", what="variable name").value
        self.expect("OP", ":")
        kind_token = self.current
        kind_name = self.expect("IDENT", what="a kind (boolean, number, money, date, text, enum)").value
        try:
            kind = Kind(kind_name)
        except ValueError:
            self.diagnostics.append(error(f"unknown kind {kind_name!r}", kind_token.line, kind_token.column))
            raise _ParseFailure
        domain = None
        if self.at("KEYWORD", "in"):
            self.advance()
            self.expect("OP", "[")
            literals = [self.parse_literal().value]
            while self.at("OP", ","):
                self.advance()
                literals.append(self.parse_literal().value)
            self.expect("OP", "]")
            domain = tuple(literals)
        unit = None
        if self.at("KEYWORD", "unit"):
            self.advance()
            unit = self.expect("STRING", what="unit string").value
        return VariableDecl(name, kind, domain, unit, pos)

    def parse_relation(self) -> Relation:
        pos = self.pos()
        self.expect("KEYWORD", "relates_to")
        target = self.expect("IDENT", what="target object type").value
        self.expect("KEYWORD", "as")
        name = self.expect("IDENT", what="relation name").value
        return Relation(target, name, pos)

    def parse_rule(self) -> Rule:
        pos = self.pos()
        self.expect("KEYWORD", "rule")
        name = self.expect("IDENT", what="rule name").value
        source = None
        if self.at("KEYWORD", "source"):
            self.advance()
            label = self.expect("STRING", what="source label").value
            uri = self.expect("STRING", what="source uri").value
            source = SourceRef(label, uri)
        condition = None
        if self.at("KEYWORD", "if"):
            self.advance()
            condition = self.parse_condition()
        self.expect("KEYWORD", "then")
        action_pos = self.pos()
        target = self.expect("IDENT", what="target variable").value
        self.expect("OP", "=")
        expr = self.parse_expr()
        return Rule(name, Action(target, expr, action_pos), condition, source, pos)

    def parse_service(self) -> Service:
        pos = self.pos()
        self.expect("KEYWORD", "service")
        name = self.expect("IDENT", what="service name").value
        self.expect("OP", "{")
        inputs: list[Message] = []
        outputs: list[Message] = []
        while not self.at("OP", "}"):
            if self.at("KEYWORD", "in"):
                inputs.append(self.parse_message("in"))
            elif self.at("KEYWORD", "out"):
                outputs.append(self.parse_message("out"))
            else:
                self.fail("expected an in/out message or '}'")
        self.expect("OP", "}")
        return Service(name, tuple(inputs), tuple(outputs), pos)

    def parse_message(self, direction: str) -> Message:
        pos = self.pos()
        self.expect("KEYWORD", direction)
        name = self.expect("IDENT", what="message name").value
        self.expect("OP", "(")
        variables = [self.expect("IDENT", what="variable name").value]
        while self.at("OP", ","):
            self.advance()
            variables.append(self.expect("IDENT", what="variable name").value)
        self.expect("OP", ")")
        return Message(name, tuple(variables), pos)

    # conditions: or > and > not/parens/atom

    def parse_condition(self) -> Cond:
        operands = [self.parse_conjunction()]
        while self.at("KEYWORD", "or"):
            self.advance()
            operands.append(self.parse_conjunction())
        return operands[0] if len(operands) == 1 else Or(tuple(operands))

    def parse_conjunction(self) -> Cond:
        operands = [self.parse_negation()]
        while self.at("KEYWORD", "and"):
            self.advance()
            operands.append(self.parse_negation())
        return operands[0] if len(operands) == 1 else And(tuple(operands))

    def parse_negation(self) -> Cond:
        if self.at("KEYWORD", "not"):
            self.advance()
            return Not(self.parse_negation())
        if self.at("OP", "("):
            self.advance()
            inner = self.parse_condition()
            self.expect("OP", ")")
            return inner
        return self.parse_atom()

    def parse_atom(self) -> Atom:
        pos = self.pos()
        variable = self.expect("IDENT", what="a variable").value
        op_token = self.current
        if not (op_token.type == "OP" and op_token.value in _COMPARATORS):
            self.fail(f"expected a comparator (= != < <= > >=), found {op_token}")
        self.advance()
        if self.at("IDENT"):
            operand: Lit | Ref = Ref(self.advance().value)
        else:
            operand = self.parse_literal()
        return Atom(variable, op_token.value, operand, pos)

    # arithmetic expressions: +,- < *,/ < unary

    def parse_expr(self) -> Expr:
        left = self.parse_term()
        while self.at("OP", "+") or self.at("OP", "-"):
            op = self.advance().value
            left = BinOp(op, left, self.parse_term())
        return left

    def parse_term(self) -> Expr:
        left = self.parse_factor()
        while self.at("OP", "*") or self.at("OP", "/"):
            op = self.advance().value
            left = BinOp(op, left, self.parse_factor())
        return left

    def parse_factor(self) -> Expr:
        if self.at("OP", "-"):
            self.advance()
            return Neg(self.parse_factor())
        if self.at("OP", "("):
            self.advance()
            inner = self.parse_expr()
            self.expect("OP", ")")
            return inner
        if self.at("IDENT"):
            return Ref(self.advance().value)
        return self.parse_literal()

    def parse_literal(self) -> Lit:
        token = self.current
        if token.type == "NUMBER":
            self.advance()
            return Lit(float(token.value) if "." in token.value else int(token.value))
        if token.type == "DATE":
            self.advance()
            try:
                return Lit(dt.date.fromisoformat(token.value))
            except ValueError:
                self.diagnostics.append(error(f"invalid date {token.value!r}", token.line, token.column))
                raise _ParseFailure
        if token.type == "STRING":
            self.advance()
            return Lit(token.value)
        if token.type == "KEYWORD" and token.value in ("true", "false"):
            self.advance()
            return Lit(token.value == "true")
        if self.at("OP", "-"):
            self.advance()
            inner = self.parse_literal()
            if isinstance(inner.value, (int, float)):
                return Lit(-inner.value)
            self.fail("only numbers can be negated")
        self.fail(f"expected a literal, found {token}")
        raise AssertionError("unreachable")


def parse_syntax(text: str) -> tuple[DecisionModel | None, list[Diagnostic]]:
    """Parse source text without semantic validation."""
    tokens, diagnostics = tokenize(text)
    parser = _Parser(tokens)
    model = parser.parse_model()
    return model, diagnostics + parser.diagnostics
