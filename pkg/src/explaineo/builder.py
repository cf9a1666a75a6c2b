"""Project decision models into property graphs.

Three stages: a lossless syntax graph of every declaration and expression
(build_asg), a simplified graph that keeps only the schema-level structure
(simplify), and an instance graph decorated with one decision's values and
fired rules (instantiate). build_asg is invertible via asg_to_model.
"""
from __future__ import annotations

from .dsl import (
    Action, And, Atom, BinOp, Cond, DecisionModel, Expr, Lit, Message, Neg,
    Not, ObjectType, Or, Ref, Relation, Rule, Service, SourceRef,
    VariableDecl, condition_atoms, print_atom, print_condition, print_expr,
)
from .dsl.lexer import tokenize
from .engine import DecisionInstance
from .graph import GraphBuilder, GraphError, PropertyGraph
from .values import Kind, Value, encode_value, literal_dsl

#: allowed (source label, target label) pairs per simplified-graph edge label
EDGE_SCHEMA: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    "RELATES_TO": (frozenset({"ObjectType"}), frozenset({"ObjectType"})),
    "HAS_VARIABLE": (frozenset({"ObjectType"}), frozenset({"Variable"})),
    "CONDITION": (frozenset({"Variable"}), frozenset({"Rule"})),
    "DERIVES": (frozenset({"Rule"}), frozenset({"Variable"})),
    "CALC_INPUT": (frozenset({"Variable"}), frozenset({"Rule"})),
    "INPUT": (frozenset({"InputMessage"}), frozenset({"Variable"})),
    "OUTPUT": (frozenset({"Variable"}), frozenset({"OutputMessage"})),
    "SOURCE_OF": (frozenset({"Source"}), frozenset({"Rule"})),
    "HAS_MESSAGE": (frozenset({"Service"}), frozenset({"InputMessage", "OutputMessage"})),
}

SCHEMA_NODE_LABELS = frozenset({
    "ObjectType", "Variable", "Rule", "Service", "InputMessage",
    "OutputMessage", "Source",
})


def node_id(kind: str, name: str) -> str:
    return f"{kind}:{name}"


def variable_id(name: str) -> str:
    return node_id("var", name)


def rule_id(name: str) -> str:
    return node_id("rule", name)


# --- abstract syntax graph ---------------------------------------------------

def build_asg(model: DecisionModel) -> PropertyGraph:
    """Lossless graph of the whole model; see asg_to_model for the inverse."""
    b = GraphBuilder()
    root = b.add_node(node_id("model", model.name), "Model",
                      name=model.name, version=model.version)

    for position, obj in enumerate(model.object_model):
        obj_id = b.add_node(node_id("object", obj.name), "ObjectType", name=obj.name)
        b.add_edge(root, obj_id, "CONTAINS", position=position)
        for var_pos, var in enumerate(obj.variables):
            props: dict = {"name": var.name, "kind": var.kind.value}
            if var.unit is not None:
                props["unit"] = var.unit
            if var.domain is not None:
                props["domain"] = ", ".join(literal_dsl(v) for v in var.domain)
            var_id = b.add_node(variable_id(var.name), "Variable", **props)
            b.add_edge(obj_id, var_id, "HAS_VARIABLE", position=var_pos)

    for obj in model.object_model:
        for rel_pos, rel in enumerate(obj.relations):
            b.add_edge(node_id("object", obj.name), node_id("object", rel.target),
                       "RELATES_TO", name=rel.name, position=rel_pos)

    sources: dict[tuple[str, str], str] = {}
    for position, rule in enumerate(model.rule_model):
        rid = b.add_node(rule_id(rule.name), "Rule", name=rule.name)
        b.add_edge(root, rid, "CONTAINS", position=position)
        if rule.source is not None:
            key = (rule.source.label, rule.source.uri)
            if key not in sources:
                sources[key] = b.add_node(node_id("source", str(len(sources) + 1)),
                                          "Source", name=rule.source.label,
                                          label_text=rule.source.label,
                                          uri=rule.source.uri)
            b.add_edge(sources[key], rid, "SOURCE_OF")
        if rule.condition is not None:
            cond_root = _add_condition(b, rule.name, rule.condition, "cond")
            b.add_edge(rid, cond_root, "HAS_CONDITION")
        action = rule.action
        act_id = b.add_node(node_id("act", rule.name), "Action",
                            name=f"{action.target} = {print_expr(action.expr)}",
                            kind=action.kind)
        b.add_edge(rid, act_id, "HAS_ACTION")
        b.add_edge(act_id, variable_id(action.target), "ACTION_TARGET")
        expr_root = _add_expr(b, rule.name, action.expr, "expr")
        b.add_edge(act_id, expr_root, "HAS_EXPR")

    for position, service in enumerate(model.service_model):
        svc_id = b.add_node(node_id("service", service.name), "Service", name=service.name)
        b.add_edge(root, svc_id, "CONTAINS", position=position)
        for msg_pos, msg in enumerate(service.input_messages):
            msg_id = b.add_node(node_id("msg", msg.name), "InputMessage", name=msg.name)
            b.add_edge(svc_id, msg_id, "HAS_MESSAGE", position=msg_pos)
            for var_pos, name in enumerate(msg.variables):
                b.add_edge(msg_id, variable_id(name), "INPUT", position=var_pos)
        for msg_pos, msg in enumerate(service.output_messages):
            msg_id = b.add_node(node_id("msg", msg.name), "OutputMessage", name=msg.name)
            b.add_edge(svc_id, msg_id, "HAS_MESSAGE", position=msg_pos)
            for var_pos, name in enumerate(msg.variables):
                b.add_edge(variable_id(name), msg_id, "OUTPUT", position=var_pos)

    return b.freeze()


def _add_condition(b: GraphBuilder, rule_name: str, cond: Cond, path: str) -> str:
    cid = f"{path}:{rule_name}" if ":" not in path else path
    if isinstance(cond, Atom):
        props: dict = {"name": print_atom(cond), "variable": cond.variable,
                       "comparator": cond.op}
        if isinstance(cond.operand, Lit):
            props["operand_literal"] = literal_dsl(cond.operand.value)
        node = b.add_node(cid, "CondAtom", **props)
        b.add_edge(node, variable_id(cond.variable), "ATOM_VAR")
        if isinstance(cond.operand, Ref):
            b.add_edge(node, variable_id(cond.operand.name), "ATOM_OPERAND")
        return node
    label = {And: "CondAnd", Or: "CondOr", Not: "CondNot"}[type(cond)]
    node = b.add_node(cid, label, name=label[4:].lower())
    children = cond.operands if isinstance(cond, (And, Or)) else (cond.operand,)
    for index, child in enumerate(children):
        child_id = _add_condition(b, rule_name, child, f"{cid}.{index}")
        b.add_edge(node, child_id, "HAS_OPERAND", position=index)
    return node


def _add_expr(b: GraphBuilder, rule_name: str, expr: Expr, path: str) -> str:
    eid = f"{path}:{rule_name}" if ":" not in path else path
    if isinstance(expr, Lit):
        return b.add_node(eid, "ExprLit", name=literal_dsl(expr.value),
                          value=literal_dsl(expr.value))
    if isinstance(expr, Ref):
        node = b.add_node(eid, "ExprVar", name=expr.name)
        b.add_edge(node, variable_id(expr.name), "REFERS_TO")
        return node
    if isinstance(expr, Neg):
        node = b.add_node(eid, "ExprOp", name="neg", op="neg")
        child = _add_expr(b, rule_name, expr.operand, f"{eid}.0")
        b.add_edge(node, child, "HAS_OPERAND", position=0)
        return node
    if isinstance(expr, BinOp):
        node = b.add_node(eid, "ExprOp", name=expr.op, op=expr.op)
        for index, child in enumerate((expr.left, expr.right)):
            child_id = _add_expr(b, rule_name, child, f"{eid}.{index}")
            b.add_edge(node, child_id, "HAS_OPERAND", position=index)
        return node
    raise TypeError(f"not an expression: {expr!r}")


# --- inverse: syntax graph back to a model -----------------------------------

def asg_to_model(asg: PropertyGraph) -> DecisionModel:
    """Rebuild the decision model from its syntax graph (formatting aside)."""
    roots = asg.nodes_with_label("Model")
    if len(roots) != 1:
        raise GraphError("expected exactly one Model node")
    root = roots[0]

    def contained(label: str) -> list:
        items = [(e.properties["position"], asg.node(e.dst))
                 for e in asg.out_edges(root.id, ["CONTAINS"])
                 if asg.node(e.dst).label == label]
        return [node for _, node in sorted(items, key=lambda pair: pair[0])]

    objects = []
    for obj_node in contained("ObjectType"):
        variables = []
        for edge in sorted(asg.out_edges(obj_node.id, ["HAS_VARIABLE"]),
                           key=lambda e: e.properties["position"]):
            var = asg.node(edge.dst)
            kind = Kind(var.properties["kind"])
            domain = None
            if "domain" in var.properties:
                domain = tuple(_parse_literal_list(str(var.properties["domain"])))
            variables.append(VariableDecl(var.properties["name"], kind, domain,
                                          var.properties.get("unit")))
        relations = [
            Relation(asg.node(e.dst).properties["name"], e.properties["name"])
            for e in sorted(asg.out_edges(obj_node.id, ["RELATES_TO"]),
                            key=lambda e: e.properties["position"])
        ]
        objects.append(ObjectType(obj_node.properties["name"],
                                  tuple(variables), tuple(relations)))

    rules = []
    for rule_node in contained("Rule"):
        rules.append(_rule_from_asg(asg, rule_node.id))

    services = []
    for svc_node in contained("Service"):
        inputs, outputs = [], []
        for edge in sorted(asg.out_edges(svc_node.id, ["HAS_MESSAGE"]),
                           key=lambda e: e.properties["position"]):
            msg = asg.node(edge.dst)
            if msg.label == "InputMessage":
                member_edges = sorted(asg.out_edges(msg.id, ["INPUT"]),
                                      key=lambda e: e.properties["position"])
                names = tuple(asg.node(e.dst).properties["name"] for e in member_edges)
                inputs.append(Message(msg.properties["name"], names))
            else:
                member_edges = sorted(asg.in_edges(msg.id, ["OUTPUT"]),
                                      key=lambda e: e.properties["position"])
                names = tuple(asg.node(e.src).properties["name"] for e in member_edges)
                outputs.append(Message(msg.properties["name"], names))
        services.append(Service(svc_node.properties["name"], tuple(inputs), tuple(outputs)))

    return DecisionModel(
        name=root.properties["name"],
        version=str(root.properties["version"]),
        object_model=tuple(objects),
        rule_model=tuple(rules),
        service_model=tuple(services),
    )


def _rule_from_asg(asg: PropertyGraph, rid: str) -> Rule:
    rule_node = asg.node(rid)
    source = None
    for edge in asg.in_edges(rid, ["SOURCE_OF"]):
        src = asg.node(edge.src)
        source = SourceRef(str(src.properties["label_text"]), str(src.properties["uri"]))
    condition = None
    for edge in asg.out_edges(rid, ["HAS_CONDITION"]):
        condition = _condition_from_asg(asg, edge.dst)
    action_edges = asg.out_edges(rid, ["HAS_ACTION"])
    if len(action_edges) != 1:
        raise GraphError(f"rule {rid!r} must have exactly one action")
    act_id = action_edges[0].dst
    target_edges = asg.out_edges(act_id, ["ACTION_TARGET"])
    expr_edges = asg.out_edges(act_id, ["HAS_EXPR"])
    if len(target_edges) != 1 or len(expr_edges) != 1:
        raise GraphError(f"malformed action on {rid!r}")
    target = asg.node(target_edges[0].dst).properties["name"]
    expr = _expr_from_asg(asg, expr_edges[0].dst)
    return Rule(str(rule_node.properties["name"]), Action(str(target), expr),
                condition, source)


def _condition_from_asg(asg: PropertyGraph, cid: str) -> Cond:
    node = asg.node(cid)
    if node.label == "CondAtom":
        operand_edges = asg.out_edges(cid, ["ATOM_OPERAND"])
        operand: Lit | Ref
        if operand_edges:
            operand = Ref(str(asg.node(operand_edges[0].dst).properties["name"]))
        else:
            operand = Lit(_parse_literal_list(str(node.properties["operand_literal"]))[0])
        return Atom(str(node.properties["variable"]), str(node.properties["comparator"]), operand)
    children = [
        _condition_from_asg(asg, e.dst)
        for e in sorted(asg.out_edges(cid, ["HAS_OPERAND"]),
                        key=lambda e: e.properties["position"])
    ]
    if node.label == "CondNot":
        return Not(children[0])
    if node.label == "CondAnd":
        return And(tuple(children))
    if node.label == "CondOr":
        return Or(tuple(children))
    raise GraphError(f"not a condition node: {cid!r}")


def _expr_from_asg(asg: PropertyGraph, eid: str) -> Expr:
    node = asg.node(eid)
    if node.label == "ExprLit":
        return Lit(_parse_literal_list(str(node.properties["value"]))[0])
    if node.label == "ExprVar":
        return Ref(str(node.properties["name"]))
    if node.label == "ExprOp":
        children = [
            _expr_from_asg(asg, e.dst)
            for e in sorted(asg.out_edges(eid, ["HAS_OPERAND"]),
                            key=lambda e: e.properties["position"])
        ]
        op = str(node.properties["op"])
        if op == "neg":
            return Neg(children[0])
        return BinOp(op, children[0], children[1])
    raise GraphError(f"not an expression node: {eid!r}")


def _parse_literal_list(text: str) -> list[Value]:
    """Parse a comma-separated list of literals as written in model source."""
    import datetime as dt

    tokens, diags = tokenize(text)
    if diags:
        raise GraphError(f"cannot read literal list {text!r}")
    values: list[Value] = []
    index = 0
    while tokens[index].type != "EOF":
        token = tokens[index]
        sign = 1
        if token.type == "OP" and token.value == "-":
            sign = -1
            index += 1
            token = tokens[index]
        if token.type == "NUMBER":
            number = float(token.value) if "." in token.value else int(token.value)
            values.append(sign * number)
        elif token.type == "DATE":
            values.append(dt.date.fromisoformat(token.value))
        elif token.type == "STRING":
            values.append(token.value)
        elif token.type == "KEYWORD" and token.value in ("true", "false"):
            values.append(token.value == "true")
        else:
            raise GraphError(f"cannot read literal list {text!r}")
        index += 1
        if tokens[index].type == "OP" and tokens[index].value == ",":
            index += 1
    return values


# --- simplified graph ---------------------------------------------------------

def simplify(asg: PropertyGraph) -> PropertyGraph:
    """Reduce the syntax graph to the schema-level structure.

    Expression internals collapse: a rule keeps printable condition/action
    properties, one CONDITION edge per distinct condition variable and one
    CALC_INPUT edge per distinct calculation input variable.
    """
    b = GraphBuilder()
    for label in ("ObjectType", "Variable", "Service", "InputMessage",
                  "OutputMessage", "Source"):
        for node in asg.nodes_with_label(label):
            b.add_node(node.id, label, **dict(node.properties))

    for node in asg.nodes_with_label("Rule"):
        rule = _rule_from_asg(asg, node.id)
        props: dict = {"name": rule.name, "kind": rule.action.kind,
                       "action": f"{rule.action.target} = {print_expr(rule.action.expr)}"}
        if rule.condition is not None:
            props["condition"] = print_condition(rule.condition)
        b.add_node(node.id, "Rule", **props)

    for edge in sorted(asg.edges.values(), key=lambda e: e.id):
        if edge.label in ("HAS_VARIABLE", "INPUT", "OUTPUT", "HAS_MESSAGE", "SOURCE_OF"):
            b.add_edge(edge.src, edge.dst, edge.label)
        elif edge.label == "RELATES_TO":
            b.add_edge(edge.src, edge.dst, edge.label, name=edge.properties["name"])

    for node in sorted(asg.nodes_with_label("Rule"), key=lambda n: n.id):
        rule = _rule_from_asg(asg, node.id)
        for name in rule.condition_variables():
            b.add_edge(variable_id(name), node.id, "CONDITION")
        for name in rule.action.input_variables():
            b.add_edge(variable_id(name), node.id, "CALC_INPUT")
        b.add_edge(node.id, variable_id(rule.action.target), "DERIVES")

    return b.freeze()


def build_model_graph(model: DecisionModel) -> PropertyGraph:
    """Convenience: the simplified graph straight from a model."""
    return simplify(build_asg(model))


def conforms_to_schema(graph: PropertyGraph) -> list[str]:
    """Check a simplified/instance graph against the fixed schema table."""
    violations: list[str] = []
    for node in graph.nodes.values():
        if node.label not in SCHEMA_NODE_LABELS:
            violations.append(f"node {node.id!r} has non-schema label {node.label!r}")
    for edge in graph.edges.values():
        spec = EDGE_SCHEMA.get(edge.label)
        if spec is None:
            violations.append(f"edge {edge.id!r} has non-schema label {edge.label!r}")
            continue
        src_labels, dst_labels = spec
        if graph.node(edge.src).label not in src_labels:
            violations.append(
                f"edge {edge.id!r}: {edge.label} cannot start at a "
                f"{graph.node(edge.src).label}")
        if graph.node(edge.dst).label not in dst_labels:
            violations.append(
                f"edge {edge.id!r}: {edge.label} cannot end at a "
                f"{graph.node(edge.dst).label}")
    return violations


# --- instance graph -----------------------------------------------------------

def instantiate(simplified: PropertyGraph, instance: DecisionInstance) -> PropertyGraph:
    """Decorate the simplified graph with one decision's values.

    Topology is unchanged: variables gain value/origin, rules gain a fired
    flag, CONDITION edges gain per-variable satisfied flags, and DERIVES
    edges of unfired rules are marked inactive.
    """
    model = instance.model
    for name in instance.bindings:
        if not simplified.has_node(variable_id(name)):
            raise GraphError(f"instance variable {name!r} is not in this model graph")
    for step in instance.trace:
        if not simplified.has_node(rule_id(step.rule)):
            raise GraphError(f"instance rule {step.rule!r} is not in this model graph")

    fired = set(instance.fired_rules())
    node_updates: dict[str, dict] = {}
    for node in simplified.nodes_with_label("Variable"):
        name = str(node.properties["name"])
        binding = instance.bindings.get(name)
        if binding is None:
            node_updates[node.id] = {"origin": "unset"}
        elif binding.origin == "input":
            node_updates[node.id] = {"value": encode_value(binding.value), "origin": "input"}
        else:
            node_updates[node.id] = {"value": encode_value(binding.value),
                                     "origin": "derived", "derived_by": binding.rule}
    for node in simplified.nodes_with_label("Rule"):
        node_updates[node.id] = {"fired": str(node.properties["name"]) in fired}

    edge_updates: dict[str, dict] = {}
    for edge in simplified.edges.values():
        if edge.label == "CONDITION":
            rule = model.rule(str(simplified.node(edge.dst).properties["name"]))
            variable = str(simplified.node(edge.src).properties["name"])
            edge_updates[edge.id] = {
                "satisfied": _variable_atoms_satisfied(rule, variable, instance)}
        elif edge.label == "DERIVES":
            if str(simplified.node(edge.src).properties["name"]) not in fired:
                edge_updates[edge.id] = {"active": False}

    return simplified.with_updates(node_updates, edge_updates)


def _variable_atoms_satisfied(rule: Rule | None, variable: str,
                              instance: DecisionInstance) -> bool:
    """Conjunction of the truth of every atom of the rule mentioning the variable."""
    from .engine import _atom_holds  # shared atom semantics

    if rule is None or rule.condition is None:
        return False
    result = True
    for atom in condition_atoms(rule.condition):
        involved = atom.variable == variable or (
            isinstance(atom.operand, Ref) and atom.operand.name == variable)
        if not involved:
            continue
        for name in {atom.variable} | (
                {atom.operand.name} if isinstance(atom.operand, Ref) else set()):
            if name not in instance.bindings:
                return False
        result = result and _atom_holds(atom, instance.bindings)
    return result
