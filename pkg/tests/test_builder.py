from __future__ import annotations

import random

import pytest

from explaineo import builder, engine
from explaineo.dsl import parse_model
from explaineo.graph import GraphError

from modelgen import random_inputs, random_model


@pytest.fixture(scope="module")
def asg(model):
    return builder.build_asg(model)


@pytest.fixture(scope="module")
def simplified(asg):
    return builder.simplify(asg)


# --- syntax graph ------------------------------------------------------------

def test_empty_model_asg_is_a_single_root():
    empty = parse_model("model nothing\n")
    graph = builder.build_asg(empty)
    assert graph.node_count() == 1
    (root,) = graph.nodes.values()
    assert root.label == "Model" and root.properties["name"] == "nothing"


def test_asg_has_one_variable_node_per_declaration(model, asg):
    assert len(asg.nodes_with_label("Variable")) == len(model.variable_decls())


def test_asg_keeps_condition_atoms_and_actions():
    single = parse_model(
        "model m\nobject O { a: boolean  b: boolean }\nrule r if a = true then b = true\n")
    graph = builder.build_asg(single)
    atoms = graph.nodes_with_label("CondAtom")
    assert len(atoms) == 1
    (atom,) = atoms
    assert graph.out_edges(atom.id, ["ATOM_VAR"])[0].dst == "var:a"
    actions = graph.nodes_with_label("Action")
    assert len(actions) == 1
    assert graph.out_edges(actions[0].id, ["ACTION_TARGET"])[0].dst == "var:b"


def test_asg_is_lossless_for_the_fixture(model, asg):
    assert builder.asg_to_model(asg) == model


def test_asg_is_lossless_for_random_models():
    rng = random.Random(13)
    for _ in range(25):
        generated = random_model(rng)
        assert builder.asg_to_model(builder.build_asg(generated)) == generated


# --- simplified graph ----------------------------------------------------------

def test_simplified_conforms_to_schema(simplified):
    assert builder.conforms_to_schema(simplified) == []


def test_simplified_conforms_on_random_models():
    rng = random.Random(14)
    for _ in range(25):
        graph = builder.build_model_graph(random_model(rng))
        assert builder.conforms_to_schema(graph) == []


def test_late_payment_rule_edges(simplified):
    # condition edges from both date variables, derivation to the overdue flag
    rule = "rule:payment_overdue_when_late"
    sources = {e.src for e in simplified.in_edges(rule, ["CONDITION"])}
    assert sources == {"var:payment_date", "var:payment_due_date"}
    derives = simplified.out_edges(rule, ["DERIVES"])
    assert [e.dst for e in derives] == ["var:payment_overdue"]


def test_rule_node_carries_printable_condition(simplified):
    node = simplified.node("rule:tax_interest_due")
    assert node.properties["condition"] == \
        "payment_specification_received = true and payment_overdue = true"
    assert node.properties["kind"] == "derivation"
    calc = simplified.node("rule:interest_amount")
    assert calc.properties["kind"] == "calculation"
    assert calc.properties["action"] == \
        "tax_interest_amount = tax_amount * interest_rate / 100"


def test_sources_become_nodes_with_uri(simplified):
    sources = simplified.nodes_with_label("Source")
    assert len(sources) == 3  # three distinct law links in the fixture
    by_rule = {e.dst for source in sources
               for e in simplified.out_edges(source.id, ["SOURCE_OF"])}
    assert "rule:tax_interest_due" in by_rule
    for source in sources:
        assert str(source.properties["uri"]).startswith("https://wetten.overheid.nl/")


def test_calc_inputs_become_edges(simplified):
    rule = "rule:interest_amount"
    calc_inputs = {e.src for e in simplified.in_edges(rule, ["CALC_INPUT"])}
    assert calc_inputs == {"var:tax_amount", "var:interest_rate"}


def test_model_without_rules_has_no_rule_or_source_nodes():
    bare = parse_model("model bare\nobject O { a: boolean }\n")
    graph = builder.build_model_graph(bare)
    assert graph.nodes_with_label("Rule") == []
    assert graph.nodes_with_label("Source") == []


def test_service_messages_in_simplified_graph(simplified):
    svc = simplified.out_edges("service:TaxInterest", ["HAS_MESSAGE"])
    assert {simplified.node(e.dst).label for e in svc} == \
        {"InputMessage", "OutputMessage"}
    input_edges = simplified.out_edges("msg:PaymentDetails", ["INPUT"])
    assert len(input_edges) == 5


# --- instance graph -------------------------------------------------------------

def test_instantiate_marks_fired_rules_and_satisfied_conditions(simplified, late_instance):
    graph = builder.instantiate(simplified, late_instance)
    rule = graph.node("rule:tax_interest_due")
    assert rule.properties["fired"] is True
    for edge in graph.in_edges("rule:tax_interest_due", ["CONDITION"]):
        assert edge.properties["satisfied"] is True
    decision = graph.node("var:owes_tax_interest")
    assert decision.properties["value"] is True
    assert decision.properties["origin"] == "derived"
    assert decision.properties["derived_by"] == "tax_interest_due"


def test_instantiate_on_time_rule_not_fired(simplified, ontime_instance):
    graph = builder.instantiate(simplified, ontime_instance)
    assert graph.node("rule:payment_overdue_when_late").properties["fired"] is False
    assert graph.node("rule:tax_interest_due").properties["fired"] is False
    # an unfired rule's derivation edge is inactive
    (derives,) = graph.out_edges("rule:tax_interest_due", ["DERIVES"])
    assert derives.properties["active"] is False
    # its overdue condition cannot be satisfied on time
    edges = {e.src: e.properties["satisfied"]
             for e in graph.in_edges("rule:tax_interest_due", ["CONDITION"])}
    assert edges["var:payment_overdue"] is False


def test_instantiate_partial_instance_marks_unset(simplified, ontime_instance):
    graph = builder.instantiate(simplified, ontime_instance)
    node = graph.node("var:tax_interest_amount")
    assert node.properties["origin"] == "unset"
    assert "value" not in node.properties


def test_instantiate_changes_no_topology(simplified, late_instance):
    graph = builder.instantiate(simplified, late_instance)
    assert set(graph.nodes) == set(simplified.nodes)
    assert set(graph.edges) == set(simplified.edges)


def test_fired_flag_matches_trace(simplified, model, late_instance):
    graph = builder.instantiate(simplified, late_instance)
    fired = set(late_instance.fired_rules())
    for node in graph.nodes_with_label("Rule"):
        assert node.properties["fired"] == (node.properties["name"] in fired)


def test_every_derived_binding_has_a_derives_edge(simplified, late_instance):
    graph = builder.instantiate(simplified, late_instance)
    for name, binding in late_instance.bindings.items():
        if binding.origin != engine.DERIVED:
            continue
        deriving = {graph.node(e.src).properties["name"]
                    for e in graph.in_edges(f"var:{name}", ["DERIVES"])}
        assert binding.rule in deriving


def test_instantiate_rejects_foreign_instances(simplified):
    other = parse_model("model other\nobject O { zz: boolean  yy: boolean }\n"
                        "rule r if zz = true then yy = true\n"
                        "service S { in In(zz) out Out(yy) }\n")
    foreign = engine.evaluate(other, {"zz": True})
    with pytest.raises(GraphError, match="not in this model graph"):
        builder.instantiate(simplified, foreign)


def test_instantiate_random_models_keeps_invariants():
    rng = random.Random(15)
    for _ in range(15):
        generated = random_model(rng, var_count=6, rule_count=4)
        graph = builder.build_model_graph(generated)
        try:
            instance = engine.evaluate(generated, random_inputs(rng, generated))
        except engine.EngineError:
            continue
        decorated = builder.instantiate(graph, instance)
        assert set(decorated.nodes) == set(graph.nodes)
        fired = set(instance.fired_rules())
        for node in decorated.nodes_with_label("Rule"):
            assert node.properties["fired"] == (node.properties["name"] in fired)
