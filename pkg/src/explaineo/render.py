"""Renderers: prose, aligned/CSV tables, DOT diagrams, openCypher export.

Every renderer is deterministic: the same value always yields byte-identical
output. DOT and the openCypher export come with small parsers for their own
output so round-trips can be checked without external tooling.
"""
from __future__ import annotations

import csv
import io
import re

from .explain import Answer, AnswerTable
from .graph import GraphBuilder, PropertyGraph, Scalar
from .verification import CheckReport

# --- prose ---------------------------------------------------------------------

def render_text(answer: Answer) -> str:
    """The answer's prose plus a source list, law links as 'label <uri>'."""
    parts = [answer.text] if answer.text else []
    if answer.citations:
        lines = ["Sources:"]
        lines += [f"  {c.label} <{c.uri}>" for c in answer.citations]
        parts.append("\n".join(lines))
    return "\n\n".join(parts) + ("\n" if parts else "")


def render_report_text(report: CheckReport) -> str:
    lines = [f"[{report.verdict.upper()}] {report.check}: {report.text}"]
    for row in report.table:
        lines.append(f"  {row.status:4} {row.kind:15} {row.element}: {row.detail}")
    return "\n".join(lines) + "\n"


# --- tables ----------------------------------------------------------------------

def render_table(table: AnswerTable, fmt: str = "text") -> str:
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow(row)
        return out.getvalue()
    widths = [len(c) for c in table.columns]
    for row in table.rows:
        for index, cell in enumerate(row):
            widths[index] = max(widths[index], len(cell))
    def line(cells):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()
    lines = [line(table.columns), line(tuple("-" * w for w in widths))]
    lines += [line(row) for row in table.rows]
    return "\n".join(lines) + "\n"


def render_tables(answer: Answer, fmt: str = "text") -> str:
    """All tables of an answer, titled, in declaration order."""
    blocks = []
    for table in answer.tables:
        title = f"# {table.title}" if fmt == "csv" else f"{table.title}"
        underline = "" if fmt == "csv" else "=" * len(table.title) + "\n"
        blocks.append(f"{title}\n{underline}{render_table(table, fmt)}")
    return "\n".join(blocks)


# --- DOT -------------------------------------------------------------------------

_SHAPES = {
    "Variable": "ellipse",
    "Rule": "box",
    "InputMessage": "parallelogram",
    "OutputMessage": "parallelogram",
    "Source": "note",
    "ObjectType": "folder",
    "Service": "hexagon",
    "Model": "tab",
}
_DEFAULT_SHAPE = "plaintext"  # syntax-graph internals

_HIGHLIGHT_ATTRS = 'color="crimson", penwidth=2'
_DIMMED_ATTRS = 'style="dashed", color="gray50", fontcolor="gray50"'


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def _node_caption(node) -> str:
    caption = str(node.properties.get("name", node.id))
    if "value" in node.properties:
        value = node.properties["value"]
        rendered = {True: "true", False: "false"}.get(value, str(value))
        caption += f"\n= {rendered}"
    return caption


def render_dot(graph: PropertyGraph, name: str = "view") -> str:
    """A DOT digraph: one statement per node and per edge, ordered by id."""
    lines = [f'digraph "{_dot_escape(name)}" {{', "  rankdir=LR;"]
    nodes = graph.nodes
    for node_id in sorted(nodes):
        node = nodes[node_id]
        attrs = [f'label="{_dot_escape(_node_caption(node))}"',
                 f'shape={_SHAPES.get(node.label, _DEFAULT_SHAPE)}']
        if node.properties.get("highlight"):
            attrs.append(_HIGHLIGHT_ATTRS)
        if node.label == "Rule" and node.properties.get("fired") is False:
            attrs.append(_DIMMED_ATTRS)
        lines.append(f'  "{_dot_escape(node_id)}" [{", ".join(attrs)}];')
    edges = graph.edges
    for edge_id in sorted(edges):
        edge = edges[edge_id]
        attrs = [f'label="{_dot_escape(edge.label)}"']
        if edge.properties.get("highlight"):
            attrs.append(_HIGHLIGHT_ATTRS)
        if edge.properties.get("satisfied") is True:
            attrs.append('color="darkgreen"')
        elif edge.properties.get("satisfied") is False or edge.properties.get("active") is False:
            attrs.append(_DIMMED_ATTRS)
        lines.append(f'  "{_dot_escape(edge.src)}" -> "{_dot_escape(edge.dst)}" '
                     f'[{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE_RE = re.compile(r'^\s*"((?:\\.|[^"\\])*)"\s*\[(.*)\];$')
_DOT_EDGE_RE = re.compile(r'^\s*"((?:\\.|[^"\\])*)"\s*->\s*"((?:\\.|[^"\\])*)"\s*\[(.*)\];$')
_DOT_HEADER_RE = re.compile(r'^digraph\s+"(?:\\.|[^"\\])*"\s*\{$')


def _dot_unescape(text: str) -> str:
    return (text.replace("\\n", "\n").replace('\\"', '"').replace("\\\\", "\\"))


def parse_dot(text: str) -> tuple[list[str], list[tuple[str, str]]]:
    """Parse the DOT subset render_dot emits: node ids and edge endpoint pairs.

    Raises ValueError when a statement does not fit the emitted grammar,
    which makes it a structural well-formedness check in tests.
    """
    lines = text.splitlines()
    if not lines or not _DOT_HEADER_RE.match(lines[0]):
        raise ValueError("missing digraph header")
    if not lines[-1].strip() == "}":
        raise ValueError("missing closing brace")
    nodes: list[str] = []
    edges: list[tuple[str, str]] = []
    for line in lines[1:-1]:
        stripped = line.strip()
        if not stripped or stripped.startswith("rankdir"):
            continue
        edge_match = _DOT_EDGE_RE.match(line)
        if edge_match:
            edges.append((_dot_unescape(edge_match.group(1)),
                          _dot_unescape(edge_match.group(2))))
            continue
        node_match = _DOT_NODE_RE.match(line)
        if node_match:
            nodes.append(_dot_unescape(node_match.group(1)))
            continue
        raise ValueError(f"unparseable DOT statement: {stripped!r}")
    return nodes, edges


# --- openCypher export ------------------------------------------------------------

def _cypher_value(value: Scalar) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    escaped = str(value).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def _cypher_props(pairs: dict[str, Scalar]) -> str:
    inner = ", ".join(f"`{key}`: {_cypher_value(pairs[key])}" for key in sorted(pairs))
    return "{" + inner + "}"


def export_graph_script(graph: PropertyGraph) -> str:
    """openCypher statements that rebuild the graph: one CREATE per node,
    one MATCH+CREATE per edge (matched by the id property)."""
    statements: list[str] = []
    nodes = graph.nodes
    for node_id in sorted(nodes):
        node = nodes[node_id]
        props = {"id": node.id, **dict(node.properties)}
        statements.append(f"CREATE (:{node.label} {_cypher_props(props)});")
    edges = graph.edges
    for edge_id in sorted(edges):
        edge = edges[edge_id]
        props = {"id": edge.id, **dict(edge.properties)}
        statements.append(
            f'MATCH (a {{id: {_cypher_value(edge.src)}}}), '
            f'(b {{id: {_cypher_value(edge.dst)}}}) '
            f"CREATE (a)-[:{edge.label} {_cypher_props(props)}]->(b);")
    return "\n".join(statements) + ("\n" if statements else "")


_CYPHER_NODE_RE = re.compile(r"^CREATE \(:(\w+) \{(.*)\}\);$")
_CYPHER_EDGE_RE = re.compile(
    r"^MATCH \(a \{id: (.+?)\}\), \(b \{id: (.+?)\}\) "
    r"CREATE \(a\)-\[:(\w+) \{(.*)\}\]->\(b\);$")


def _parse_cypher_scalar(text: str) -> Scalar:
    text = text.strip()
    if text == "true":
        return True
    if text == "false":
        return False
    if text.startswith('"'):
        body = text[1:-1]
        out = []
        index = 0
        while index < len(body):
            ch = body[index]
            if ch == "\\" and index + 1 < len(body):
                out.append({"n": "\n", '"': '"', "\\": "\\"}.get(body[index + 1],
                                                                body[index + 1]))
                index += 2
            else:
                out.append(ch)
                index += 1
        return "".join(out)
    return float(text) if ("." in text or "e" in text or "E" in text) else int(text)


def _parse_cypher_props(text: str) -> dict[str, Scalar]:
    props: dict[str, Scalar] = {}
    index = 0
    while index < len(text):
        if text[index] in ", ":
            index += 1
            continue
        if text[index] != "`":
            raise ValueError(f"expected a backquoted key at {text[index:]!r}")
        end = text.index("`", index + 1)
        key = text[index + 1:end]
        index = end + 1
        if text[index] != ":":
            raise ValueError("expected ':' after property key")
        index += 2  # skip ': '
        if text[index] == '"':
            cursor = index + 1
            while cursor < len(text):
                if text[cursor] == "\\":
                    cursor += 2
                    continue
                if text[cursor] == '"':
                    break
                cursor += 1
            value_text = text[index:cursor + 1]
            index = cursor + 1
        else:
            cursor = index
            while cursor < len(text) and text[cursor] != ",":
                cursor += 1
            value_text = text[index:cursor]
            index = cursor
        props[key] = _parse_cypher_scalar(value_text)
    return props


def parse_graph_script(script: str) -> PropertyGraph:
    """Rebuild a PropertyGraph from export_graph_script output."""
    builder = GraphBuilder()
    pending_edges = []
    for line in script.splitlines():
        if not line.strip():
            continue
        node_match = _CYPHER_NODE_RE.match(line)
        if node_match:
            label = node_match.group(1)
            props = _parse_cypher_props(node_match.group(2))
            node_id = str(props.pop("id"))
            builder.add_node(node_id, label, **props)
            continue
        edge_match = _CYPHER_EDGE_RE.match(line)
        if edge_match:
            src = str(_parse_cypher_scalar(edge_match.group(1)))
            dst = str(_parse_cypher_scalar(edge_match.group(2)))
            label = edge_match.group(3)
            props = _parse_cypher_props(edge_match.group(4))
            edge_id = str(props.pop("id"))
            pending_edges.append((src, dst, label, edge_id, props))
            continue
        raise ValueError(f"unparseable statement: {line!r}")
    for src, dst, label, edge_id, props in pending_edges:
        builder.add_edge(src, dst, label, edge_id=edge_id, **props)
    return builder.freeze()
