from __future__ import annotations

import itertools
import random

import pytest

from explaineo import builder, verification
from explaineo.dsl import (
    And, Atom, Lit, Not, Or, Ref, parse_model,
)
from explaineo.values import Kind

from modelgen import random_condition, random_model, random_variables


@pytest.fixture(scope="module")
def fixture_graph(model):
    return builder.build_model_graph(model)


@pytest.fixture(scope="module")
def crippled_graph(crippled_model):
    return builder.build_model_graph(crippled_model)


# --- fixture behaviour -----------------------------------------------------------

def test_all_five_checks_pass_on_intact_fixture(model, fixture_graph):
    reports = verification.run_all_checks(model, "TaxInterest", fixture_graph)
    assert [r.check for r in reports] == list(verification.CHECK_IDS)
    assert all(r.verdict == "pass" for r in reports)
    for report in reports:
        assert "Positive" in report.text


def test_crippled_fixture_fails_io_paths_on_exactly_the_period_dates(crippled_graph):
    report = verification.check_io_paths(crippled_graph, "TaxInterest")
    assert report.verdict == "fail"
    failures = {(row.element, row.kind) for row in report.table
                if row.status == "fail"}
    assert failures == {("interest_period_start", "output"),
                        ("interest_period_end", "output")}
    passes = {row.element for row in report.table if row.status == "pass"}
    assert {"owes_tax_interest", "tax_interest_amount", "payment_date",
            "payment_due_date", "payment_specification_received",
            "tax_amount", "taxpayer_type"} <= passes
    highlighted = [n.id for n in report.graph_view.nodes.values()
                   if n.properties.get("highlight")]
    assert sorted(highlighted) == ["var:interest_period_end",
                                   "var:interest_period_start"]
    assert "Negative" in report.text


def test_messages_used_vacuous_and_seeded_defect():
    source = ("model m\nobject O { a: boolean  b: boolean  c: boolean }\n"
              "rule r if a = true then b = true\n"
              "service S { in In(a) out Out(b) out Extra(c) }\n")
    seeded = parse_model(source)
    report = verification.check_messages_used(builder.build_model_graph(seeded), "S")
    rows = {row.element: row.status for row in report.table}
    assert rows == {"In": "pass", "Out": "pass", "Extra": "fail"}

    empty = parse_model("model m\nobject O { a: boolean }\nservice S { }\n")
    report = verification.check_messages_used(builder.build_model_graph(empty), "S")
    assert report.verdict == "pass" and report.table == ()


def test_input_also_output_is_trivially_reachable():
    source = ("model m\nobject O { a: boolean }\n"
              "service S { in In(a) out Out(a) }\n")
    graph = builder.build_model_graph(parse_model(source))
    report = verification.check_io_paths(graph, "S")
    assert report.verdict == "pass"
    assert all("coincide" in row.detail for row in report.table)


def test_variables_used_flags_orphan(model, fixture_source):
    orphaned = parse_model(fixture_source.replace(
        "  interest_days: number unit \"days\"",
        "  interest_days: number unit \"days\"\n  orphan_note: text"))
    report = verification.check_variables_used(builder.build_model_graph(orphaned))
    failures = [row.element for row in report.table if row.status == "fail"]
    assert failures == ["orphan_note"]


def test_variables_used_vacuous_without_variables():
    graph = builder.build_model_graph(parse_model("model m\nobject O { }\n"))
    report = verification.check_variables_used(graph)
    assert report.verdict == "pass" and report.table == ()


def test_variables_assigned_flags_condition_only_variable():
    source = ("model m\nobject O { a: boolean  b: boolean  ghost: boolean }\n"
              "rule r if ghost = true then b = true\n"
              "service S { in In(a) out Out(b) }\n")
    report = verification.check_variables_assigned(
        builder.build_model_graph(parse_model(source)))
    rows = {row.element: row.status for row in report.table}
    assert rows == {"a": "pass", "b": "pass", "ghost": "fail"}


def test_variables_assigned_pure_input_model():
    source = ("model m\nobject O { a: boolean  b: boolean }\n"
              "service S { in In(a) out Out(b) }\n")
    report = verification.check_variables_assigned(
        builder.build_model_graph(parse_model(source)))
    rows = {row.element: row.status for row in report.table}
    assert rows == {"a": "pass", "b": "fail"}


def test_logical_check_interval_contradiction():
    source = ("model m\nobject O { x: number  y: number }\n"
              "rule bad if x > 5 and x < 3 then y = 1\n"
              "rule good if x > 5 or x < 3 then y = 2\n")
    report = verification.check_logical(parse_model(source))
    rows = {row.element: row for row in report.table if row.kind == "rule"}
    assert rows["bad"].status == "fail"
    assert "'x > 5'" in rows["bad"].detail and "'x < 3'" in rows["bad"].detail
    assert rows["good"].status == "pass"
    assert report.verdict == "fail"


def test_logical_check_cross_variable_pairs():
    source = ("model m\nobject O { a: number  b: number  z: number }\n"
              "rule bad if a < b and b < a then z = 1\n"
              "rule alias if a < b and a >= b then z = 2\n"
              "rule fine if a < b and b > a then z = 3\n")
    report = verification.check_logical(parse_model(source))
    rows = {row.element: row.status for row in report.table if row.kind == "rule"}
    assert rows == {"bad": "fail", "alias": "fail", "fine": "pass"}


def test_logical_check_fixture_rules_all_satisfiable(model, fixture_graph):
    report = verification.check_logical(model, fixture_graph)
    rule_rows = [row for row in report.table if row.kind == "rule"]
    assert len(rule_rows) == len(model.rule_model)
    assert all(row.status == "pass" for row in rule_rows)


def test_logical_check_warns_on_overlapping_same_target_rules(model, fixture_graph):
    report = verification.check_logical(model, fixture_graph)
    warns = [row for row in report.table if row.status == "warn"]
    assert [w.element for w in warns] == \
        ["tax_interest_due / no_tax_interest_when_on_time"]
    assert report.verdict == "pass"  # warnings never fail the check


def test_logical_check_boolean_enum_contradictions():
    source = ("model m\nobject O { f: boolean  c: enum in [\"red\", \"blue\"]  z: number }\n"
              "rule bad1 if f = true and f = false then z = 1\n"
              "rule bad2 if c != \"red\" and c != \"blue\" then z = 2\n"
              "rule good if not (f = true and f = false) then z = 3\n")
    report = verification.check_logical(parse_model(source))
    rows = {row.element: row.status for row in report.table if row.kind == "rule"}
    assert rows == {"bad1": "fail", "bad2": "fail", "good": "pass"}


def test_run_all_checks_seeded_defects_fail_only_matching_checks():
    source = ("model m\n"
              "object O {\n"
              "  a: boolean\n  b: boolean\n  c: number\n"
              "  lonely: text\n"          # unused -> variables_used
              "  floating: boolean\n"     # never assigned but used in a rule
              "}\n"
              "rule r1 if a = true then b = true\n"
              "rule dead if c > 5 and c < 2 then b = false\n"  # logical
              "rule uses_floating if floating = true then c = 1\n"
              "service S {\n"
              "  in In(a)\n"
              "  out Out(b)\n"
              "  out Empty(lonely)\n"     # lonely never derived -> messages_used
              "}\n")
    seeded = parse_model(source)
    reports = {r.check: r for r in verification.run_all_checks(seeded, "S")}
    assert reports["messages_used"].verdict == "fail"
    assert reports["io_paths"].verdict == "fail"   # lonely is an unreachable output
    assert reports["variables_used"].verdict == "pass"  # lonely is in a message now
    assert reports["variables_assigned"].verdict == "fail"  # floating, lonely
    assert reports["logical"].verdict == "fail"


def test_run_all_checks_on_empty_model():
    reports = verification.run_all_checks(parse_model("model void\n"))
    assert [r.verdict for r in reports] == ["pass"] * 5
    assert all(r.table == () for r in reports)


def test_reports_cover_scope_exactly_once(model, fixture_graph):
    report = verification.check_variables_used(fixture_graph)
    names = [row.element for row in report.table]
    assert sorted(names) == sorted(model.variable_decls())
    report = verification.check_io_paths(fixture_graph, "TaxInterest")
    service = model.service("TaxInterest")
    expected = sorted(model.input_variables(service)) \
        + sorted(model.output_variables(service))
    assert sorted(r.element for r in report.table) == sorted(expected)


def test_unknown_service_is_an_error(fixture_graph):
    with pytest.raises(verification.VerificationError, match="unknown service"):
        verification.check_io_paths(fixture_graph, "Nope")
    with pytest.raises(verification.VerificationError, match="unknown check"):
        verification.get_check("nope")


def test_monotone_defect_detection(model, fixture_source):
    baseline = verification.check_variables_used(builder.build_model_graph(model))
    baseline_status = {row.element: row.status for row in baseline.table}
    grown = parse_model(fixture_source.replace(
        "object Taxpayer {",
        "object Extra { stray: text }\nobject Taxpayer {"))
    regrown = verification.check_variables_used(builder.build_model_graph(grown))
    grown_status = {row.element: row.status for row in regrown.table}
    for element, status in baseline_status.items():
        if status == "fail":
            assert grown_status[element] == "fail"
    assert grown_status["stray"] == "fail"


# --- oracle equivalence -----------------------------------------------------------

def _model_closure(generated):
    """Reachability oracle built from the model syntax, not the graph:
    adjacency from rule reads/writes, then Warshall closure."""
    succ: dict[str, set[str]] = {}
    for rule in generated.rule_model:
        reads = set(rule.condition_variables()) | set(rule.action.input_variables())
        for name in reads:
            succ.setdefault(name, set()).add(rule.action.target)
    names = sorted(generated.variable_decls())
    reach = {n: {n} | succ.get(n, set()) for n in names}
    for middle in names:
        for start in names:
            if middle in reach[start]:
                reach[start] |= reach[middle]
    return reach


def test_path_and_assignment_checks_match_model_oracle():
    rng = random.Random(4242)
    for index in range(60):
        generated = random_model(rng, var_count=rng.randint(3, 10),
                                 rule_count=rng.randint(0, 8))
        graph = builder.build_model_graph(generated)
        closure = _model_closure(generated)
        service = generated.service_model[0]
        inputs = set(generated.input_variables(service))
        outputs = set(generated.output_variables(service))

        io_report = verification.check_io_paths(graph, service.name)
        for row in io_report.table:
            if row.kind == "input":
                expected = bool(outputs & closure[row.element])
            else:
                expected = any(row.element in closure[i] for i in inputs)
            assert (row.status == "pass") == expected, (index, row)

        targets = {r.action.target for r in generated.rule_model}
        assigned_report = verification.check_variables_assigned(graph)
        for row in assigned_report.table:
            expected = row.element in inputs or row.element in targets
            assert (row.status == "pass") == expected, (index, row)

        used_report = verification.check_variables_used(graph)
        used_vars = set(inputs) | set(outputs) | set(targets)
        for rule in generated.rule_model:
            used_vars |= set(rule.condition_variables())
            used_vars |= set(rule.action.input_variables())
        for row in used_report.table:
            assert (row.status == "pass") == (row.element in used_vars), (index, row)


def _eval_condition(cond, assignment):
    """Independent condition evaluator for the truth-table oracle."""
    if isinstance(cond, Atom):
        left = assignment[cond.variable]
        right = (assignment[cond.operand.name] if isinstance(cond.operand, Ref)
                 else cond.operand.value)
        return {"=": left == right, "!=": left != right}[cond.op]
    if isinstance(cond, Not):
        return not _eval_condition(cond.operand, assignment)
    if isinstance(cond, And):
        return all(_eval_condition(c, assignment) for c in cond.operands)
    if isinstance(cond, Or):
        return any(_eval_condition(c, assignment) for c in cond.operands)
    raise TypeError(cond)


def _truth_table_satisfiable(cond, decls) -> bool:
    names = sorted({name for atom in _atoms(cond)
                    for name in _atom_names(atom)})
    domains = []
    for name in names:
        decl = decls[name]
        domains.append([False, True] if decl.kind is Kind.BOOLEAN
                       else list(decl.domain))
    for combo in itertools.product(*domains):
        if _eval_condition(cond, dict(zip(names, combo))):
            return True
    return False


def _atoms(cond):
    if isinstance(cond, Atom):
        yield cond
    elif isinstance(cond, Not):
        yield from _atoms(cond.operand)
    else:
        for child in cond.operands:
            yield from _atoms(child)


def _atom_names(atom):
    yield atom.variable
    if isinstance(atom.operand, Ref):
        yield atom.operand.name


def test_logical_check_matches_truth_table_on_boolean_enum_rules():
    from explaineo.dsl import Action, DecisionModel, ObjectType, Rule

    rng = random.Random(31337)
    agreements = 0
    for index in range(220):
        decls = random_variables(rng, rng.randint(2, 4), (Kind.BOOLEAN, Kind.ENUM))
        condition = random_condition(rng, decls, depth=rng.randint(1, 3))
        generated = DecisionModel(
            name="logic",
            object_model=(ObjectType("O", tuple(decls)),),
            rule_model=(Rule("r", Action(decls[0].name,
                                         Lit(_some_value(decls[0]))), condition),),
        )
        report = verification.check_logical(generated)
        (row,) = [r for r in report.table if r.kind == "rule"]
        expected = _truth_table_satisfiable(condition, generated.variable_decls())
        assert (row.status == "pass") == expected, (index, condition)
        agreements += 1
    assert agreements == 220


def _some_value(decl):
    if decl.kind is Kind.BOOLEAN:
        return True
    return decl.domain[0]
