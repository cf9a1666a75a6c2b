"""In-memory labelled property graph.

Directed multigraph with closed node/edge label vocabularies. Graphs are
built mutably through GraphBuilder and frozen into immutable PropertyGraph
values; every query returns a new frozen graph. All orderings (JSON output,
traversal, witness paths) are deterministic.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

Scalar = bool | int | float | str

# the simplified-schema vocabulary plus the structural labels used by the
# lossless syntax graph
NODE_LABELS = frozenset({
    "ObjectType", "Variable", "Rule", "Service", "InputMessage",
    "OutputMessage", "Source",
    "Model", "CondAnd", "CondOr", "CondNot", "CondAtom", "Action",
    "ExprOp", "ExprLit", "ExprVar",
})

EDGE_LABELS = frozenset({
    "RELATES_TO", "HAS_VARIABLE", "CONDITION", "DERIVES", "CALC_INPUT",
    "INPUT", "OUTPUT", "SOURCE_OF", "HAS_MESSAGE",
    "CONTAINS", "HAS_CONDITION", "HAS_OPERAND", "HAS_ACTION",
    "ACTION_TARGET", "HAS_EXPR", "ATOM_VAR", "ATOM_OPERAND", "REFERS_TO",
})


class GraphError(Exception):
    pass


@dataclass(frozen=True)
class Node:
    id: str
    label: str
    properties: Mapping[str, Scalar]

    def to_json(self) -> dict:
        return {"id": self.id, "label": self.label,
                "properties": {k: self.properties[k] for k in sorted(self.properties)}}


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    label: str
    properties: Mapping[str, Scalar]

    def to_json(self) -> dict:
        return {"id": self.id, "from": self.src, "to": self.dst, "label": self.label,
                "properties": {k: self.properties[k] for k in sorted(self.properties)}}


@dataclass(frozen=True)
class Path:
    nodes: tuple[str, ...]
    edges: tuple[str, ...]


@dataclass(frozen=True)
class ReachResult:
    found: bool
    path: Path | None = None


class GraphBuilder:
    """Mutable construction phase; freeze() yields the immutable graph."""

    def __init__(self) -> None:
        self._nodes: dict[str, Node] = {}
        self._edges: dict[str, Edge] = {}

    def add_node(self, node_id: str, label: str, **properties: Scalar) -> str:
        if node_id in self._nodes:
            raise GraphError(f"duplicate node id {node_id!r}")
        if label not in NODE_LABELS:
            raise GraphError(f"unknown node label {label!r}")
        if "name" not in properties:
            raise GraphError(f"node {node_id!r} has no name property")
        self._nodes[node_id] = Node(node_id, label, dict(properties))
        return node_id

    def add_edge(self, src: str, dst: str, label: str,
                 edge_id: str | None = None, **properties: Scalar) -> str:
        if label not in EDGE_LABELS:
            raise GraphError(f"unknown edge label {label!r}")
        if src not in self._nodes:
            raise GraphError(f"edge source {src!r} does not exist")
        if dst not in self._nodes:
            raise GraphError(f"edge target {dst!r} does not exist")
        if edge_id is None:
            edge_id = f"{src}-[{label}]->{dst}"
            if edge_id in self._edges:
                n = 2
                while f"{edge_id}#{n}" in self._edges:
                    n += 1
                edge_id = f"{edge_id}#{n}"
        elif edge_id in self._edges:
            raise GraphError(f"duplicate edge id {edge_id!r}")
        self._edges[edge_id] = Edge(edge_id, src, dst, label, dict(properties))
        return edge_id

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def freeze(self) -> "PropertyGraph":
        return PropertyGraph(self._nodes, self._edges)


class PropertyGraph:
    """Frozen directed multigraph; safe to share between readers."""

    def __init__(self, nodes: dict[str, Node], edges: dict[str, Edge]):
        self._nodes = dict(nodes)
        self._edges = dict(edges)
        self._out: dict[str, list[str]] = {nid: [] for nid in self._nodes}
        self._in: dict[str, list[str]] = {nid: [] for nid in self._nodes}
        for edge in self._edges.values():
            if edge.src not in self._nodes or edge.dst not in self._nodes:
                raise GraphError(f"edge {edge.id!r} has a dangling endpoint")
            self._out[edge.src].append(edge.id)
            self._in[edge.dst].append(edge.id)
        for adjacency in (self._out, self._in):
            for edge_ids in adjacency.values():
                edge_ids.sort()

    # --- access ---

    @property
    def nodes(self) -> dict[str, Node]:
        return dict(self._nodes)

    @property
    def edges(self) -> dict[str, Edge]:
        return dict(self._edges)

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise GraphError(f"unknown node {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def node_count(self) -> int:
        return len(self._nodes)

    def edge_count(self) -> int:
        return len(self._edges)

    def nodes_with_label(self, label: str) -> list[Node]:
        return [n for n in self._nodes.values() if n.label == label]

    def edges_with_label(self, label: str) -> list[Edge]:
        return [e for e in self._edges.values() if e.label == label]

    def out_edges(self, node_id: str, labels: Iterable[str] | None = None) -> list[Edge]:
        allowed = None if labels is None else set(labels)
        return [self._edges[eid] for eid in self._out.get(node_id, ())
                if allowed is None or self._edges[eid].label in allowed]

    def in_edges(self, node_id: str, labels: Iterable[str] | None = None) -> list[Edge]:
        allowed = None if labels is None else set(labels)
        return [self._edges[eid] for eid in self._in.get(node_id, ())
                if allowed is None or self._edges[eid].label in allowed]

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PropertyGraph)
                and self._nodes == other._nodes and self._edges == other._edges)

    def __repr__(self) -> str:
        return f"PropertyGraph({len(self._nodes)} nodes, {len(self._edges)} edges)"

    # --- queries ---

    def filter(self, node_pred: Callable[[Node], bool],
               edge_pred: Callable[[Edge], bool] | None = None) -> "PropertyGraph":
        """Induced subgraph: kept nodes plus kept edges whose endpoints survive."""
        nodes = {nid: n for nid, n in self._nodes.items() if node_pred(n)}
        edges = {
            eid: e for eid, e in self._edges.items()
            if e.src in nodes and e.dst in nodes and (edge_pred is None or edge_pred(e))
        }
        return PropertyGraph(nodes, edges)

    def reachable(self, from_ids: Iterable[str], to_ids: Iterable[str],
                  labels: Iterable[str] | None = None,
                  direction: str = "forward") -> ReachResult:
        """Directed reachability with a deterministic witness path.

        The witness is the shortest path; ties break on the lexicographically
        smallest node-id sequence. `direction="reverse"` walks edges backwards.
        """
        sources = sorted(set(from_ids))
        targets = set(to_ids)
        if not sources or not targets:
            raise GraphError("reachable() needs non-empty node sets")
        for node_id in list(sources) + sorted(targets):
            self.node(node_id)

        overlap = sorted(set(sources) & targets)
        if overlap:
            return ReachResult(True, Path((overlap[0],), ()))

        allowed = None if labels is None else set(labels)
        # heap of (length, node-id path, edge-id path): pop order gives the
        # shortest path first, smallest node sequence among equals
        heap: list[tuple[int, tuple[str, ...], tuple[str, ...]]] = [
            (0, (nid,), ()) for nid in sources
        ]
        heapq.heapify(heap)
        visited: set[str] = set()
        while heap:
            length, node_path, edge_path = heapq.heappop(heap)
            current = node_path[-1]
            if current in visited:
                continue
            visited.add(current)
            if current in targets:
                return ReachResult(True, Path(node_path, edge_path))
            steps = (self.out_edges(current, allowed) if direction == "forward"
                     else self.in_edges(current, allowed))
            for edge in steps:
                nxt = edge.dst if direction == "forward" else edge.src
                if nxt not in visited:
                    heapq.heappush(heap, (length + 1, node_path + (nxt,),
                                          edge_path + (edge.id,)))
        return ReachResult(False, None)

    def reach_set(self, starts: Iterable[str], labels: Iterable[str] | None = None,
                  direction: str = "forward") -> frozenset[str]:
        """Every node reachable from the start set (which is included)."""
        allowed = None if labels is None else set(labels)
        seen: set[str] = set()
        stack = sorted(set(starts))
        for node_id in stack:
            self.node(node_id)
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            steps = (self.out_edges(current, allowed) if direction == "forward"
                     else self.in_edges(current, allowed))
            for edge in steps:
                nxt = edge.dst if direction == "forward" else edge.src
                if nxt not in seen:
                    stack.append(nxt)
        return frozenset(seen)

    def neighbourhood(self, centre: str, radius: int,
                      labels: Iterable[str] | None = None) -> "PropertyGraph":
        """Nodes within `radius` hops of the centre, ignoring edge direction,
        travelling (and keeping) only edges with allowed labels."""
        self.node(centre)
        allowed = None if labels is None else set(labels)
        distance = {centre: 0}
        frontier = [centre]
        for hop in range(1, radius + 1):
            next_frontier: list[str] = []
            for node_id in frontier:
                for edge in self.out_edges(node_id, allowed) + self.in_edges(node_id, allowed):
                    for nxt in (edge.dst, edge.src):
                        if nxt not in distance:
                            distance[nxt] = hop
                            next_frontier.append(nxt)
            frontier = next_frontier
        return self.filter(lambda n: n.id in distance,
                           None if allowed is None else (lambda e: e.label in allowed))

    # --- derived copies ---

    def with_updates(self, node_props: Mapping[str, Mapping[str, Scalar]] | None = None,
                     edge_props: Mapping[str, Mapping[str, Scalar]] | None = None) -> "PropertyGraph":
        """Copy with extra properties merged onto some nodes/edges (same topology)."""
        nodes = dict(self._nodes)
        for node_id, extra in (node_props or {}).items():
            node = self.node(node_id)
            merged = dict(node.properties)
            merged.update(extra)
            nodes[node_id] = Node(node.id, node.label, merged)
        edges = dict(self._edges)
        for edge_id, extra in (edge_props or {}).items():
            if edge_id not in edges:
                raise GraphError(f"unknown edge {edge_id!r}")
            edge = edges[edge_id]
            merged = dict(edge.properties)
            merged.update(extra)
            edges[edge_id] = Edge(edge.id, edge.src, edge.dst, edge.label, merged)
        return PropertyGraph(nodes, edges)

    def highlighted(self, node_ids: Iterable[str] = (), edge_ids: Iterable[str] = ()) -> "PropertyGraph":
        return self.with_updates(
            {nid: {"highlight": True} for nid in node_ids},
            {eid: {"highlight": True} for eid in edge_ids},
        )

    # --- JSON ---

    def to_json(self) -> dict:
        return {
            "nodes": [self._nodes[nid].to_json() for nid in sorted(self._nodes)],
            "edges": [self._edges[eid].to_json() for eid in sorted(self._edges)],
        }

    @staticmethod
    def from_json(doc: Mapping) -> "PropertyGraph":
        builder = GraphBuilder()
        for node in doc.get("nodes", []):
            builder.add_node(node["id"], node["label"], **node.get("properties", {}))
        for edge in doc.get("edges", []):
            builder.add_edge(edge["from"], edge["to"], edge["label"],
                             edge_id=edge["id"], **edge.get("properties", {}))
        return builder.freeze()


def empty_graph() -> PropertyGraph:
    return PropertyGraph({}, {})
