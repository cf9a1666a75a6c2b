from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from explaineo.dsl import (
    And, Atom, Lit, Message, ModelError, ObjectType, Ref, Rule, Service,
    VariableDecl, parse_model, print_model, validate_model,
)
from explaineo.dsl.ast import Action, DecisionModel
from explaineo.values import Kind

from modelgen import random_model


def test_fixture_parses_with_expected_shape(model):
    assert model.name == "tax_interest"
    assert len(model.service_model) == 1
    assert len(model.rule_model) >= 3
    assert {o.name for o in model.object_model} == {"Taxpayer", "TaxAssessment"}
    decls = model.variable_decls()
    assert decls["tax_amount"].kind is Kind.MONEY
    assert decls["payment_due_date"].domain is not None
    late = model.rule("tax_interest_due")
    assert late.source is not None and late.source.uri.startswith("https://")
    service = model.service("TaxInterest")
    assert model.input_variables(service) == [
        "taxpayer_type", "payment_specification_received", "payment_due_date",
        "payment_date", "tax_amount"]


def test_empty_source_is_an_error():
    with pytest.raises(ModelError) as exc:
        parse_model("")
    assert any("empty model" in d.message for d in exc.value.diagnostics)


def test_undeclared_variable_is_reported_with_position():
    source = "model m\nobject O { a: boolean }\nrule r if foo = true then a = true\n"
    with pytest.raises(ModelError) as exc:
        parse_model(source)
    diagnostics = exc.value.diagnostics
    assert len(diagnostics) == 1
    assert "foo" in diagnostics[0].message
    assert diagnostics[0].line == 3
    assert diagnostics[0].column > 0


def test_duplicate_identifiers_rejected():
    source = ("model m\nobject O { a: boolean }\nobject P { a: number }\n"
              "rule r then a = true\nrule r then a = false\n")
    with pytest.raises(ModelError) as exc:
        parse_model(source)
    messages = " | ".join(d.message for d in exc.value.diagnostics)
    assert "declared more than once" in messages
    assert "duplicate rule" in messages


def test_type_incompatible_comparator_rejected():
    source = "model m\nobject O { a: text  b: number }\nrule r if a > 3 then b = 1\n"
    with pytest.raises(ModelError) as exc:
        parse_model(source)
    assert any("comparator" in d.message for d in exc.value.diagnostics)


def test_date_number_arithmetic_type_errors():
    source = "model m\nobject O { a: date  b: boolean }\nrule r then a = b + 1\n"
    with pytest.raises(ModelError):
        parse_model(source)


def test_validate_valid_model_is_clean(model):
    assert validate_model(model) == []


def test_validate_enum_without_domain():
    bad = DecisionModel(
        name="m",
        object_model=(ObjectType("O", (VariableDecl("e", Kind.ENUM, ()),)),),
    )
    diagnostics = validate_model(bad)
    assert len(diagnostics) == 1
    assert "non-empty domain" in diagnostics[0].message


def test_validate_variable_in_two_input_messages():
    bad = DecisionModel(
        name="m",
        object_model=(ObjectType("O", (VariableDecl("a", Kind.BOOLEAN),
                                       VariableDecl("b", Kind.BOOLEAN),)),),
        rule_model=(Rule("r", Action("b", Lit(True)),
                         Atom("a", "=", Lit(True))),),
        service_model=(Service("S",
                               (Message("In1", ("a",)), Message("In2", ("a",))),
                               (Message("Out", ("b",)),)),),
    )
    diagnostics = validate_model(bad)
    assert len(diagnostics) == 1
    assert "input messages" in diagnostics[0].message


def test_source_uri_must_be_a_uri():
    source = ('model m\nobject O { a: boolean }\n'
              'rule r source "law" "not a uri" then a = true\n')
    with pytest.raises(ModelError) as exc:
        parse_model(source)
    assert any("not a valid URI" in d.message for d in exc.value.diagnostics)


def test_parse_print_identity_on_fixture(model, fixture_source):
    assert parse_model(print_model(model)) == model


def test_parse_print_identity_on_random_models():
    rng = random.Random(20230131)
    for _ in range(25):
        generated = random_model(rng)
        assert validate_model(generated) == []
        assert parse_model(print_model(generated)) == generated


def test_condition_printing_preserves_precedence():
    source = ("model m\nobject O { a: number  b: number  c: boolean }\n"
              "rule r if (a > 1 or b < 2) and not (a = 3 and b = 4) then c = true\n"
              "rule s then a = (1 + 2) * 3 - b / (a - 1)\n")
    parsed = parse_model(source)
    assert parse_model(print_model(parsed)) == parsed


def test_multiple_errors_reported_together():
    source = ("model m\nobject O { a: boolean\n"  # missing brace recovers at 'rule'
              "rule r if zonk = true then a = true\n")
    with pytest.raises(ModelError) as exc:
        parse_model(source)
    assert len(exc.value.diagnostics) >= 1


def test_diagnostics_reference_existing_elements():
    bad_sources = [
        "model m\nobject O { a: boolean }\nrule r if foo = true then a = true\n",
        "model m\nobject O { e: enum in [] }\n",
        'model m\nobject O { a: boolean }\nrule r source "x" "no uri" then a = true\n',
        "model m\nobject O { a: text  b: number }\nrule r if a > 3 then b = 1\n",
    ]
    for source in bad_sources:
        with pytest.raises(ModelError) as exc:
            parse_model(source)
        lines = source.splitlines()
        for diagnostic in exc.value.diagnostics:
            if diagnostic.element is not None:
                assert diagnostic.element in source
            assert 1 <= diagnostic.line <= len(lines)
            assert diagnostic.column <= len(lines[diagnostic.line - 1]) + 1


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200))
def test_parse_is_total(text):
    try:
        parse_model(text)
    except ModelError:
        pass  # the only acceptable failure mode


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet="model objectrule service{}()[]:=<>!\"-+*/\n 0123456789abc_",
               max_size=300))
def test_parse_is_total_on_dsl_like_text(text):
    try:
        parse_model(text)
    except ModelError:
        pass
