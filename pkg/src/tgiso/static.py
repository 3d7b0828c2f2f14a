"""Directed, node-labeled, edge-weighted static graphs.

One type hosts every static representation of a temporal graph: the event
graph, the augmented event graph, their compressed variants, and the
time-aggregated/concatenated graphs.  Each node carries an integer label and a
provenance record saying whether it stands for an original temporal-graph node
or for a timestamped edge (an event node).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .temporal import TimestampedEdge


@dataclass(frozen=True)
class OriginalNode:
    """Provenance of a static node that mirrors a temporal-graph node."""

    node: int


@dataclass(frozen=True)
class EventNode:
    """Provenance of a static node that mirrors a timestamped edge."""

    edge: TimestampedEdge


Provenance = OriginalNode | EventNode


@dataclass(frozen=True)
class StaticGraph:
    """An immutable directed graph with integer node labels and edge weights >= 1.

    ``weights`` maps each directed edge ``(u, v)`` to its weight; the mapping
    also serves as the edge set (no duplicate pairs by construction).
    """

    labels: tuple[int, ...]
    provenance: tuple[Provenance, ...]
    weights: dict[tuple[int, int], int]
    node_names: tuple[str, ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.provenance) != n or len(self.node_names) != n:
            raise ValueError("labels, provenance and node_names must have equal length")
        if any(l < 0 for l in self.labels):
            raise ValueError("node labels must be non-negative")
        for (u, v), w in self.weights.items():
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge endpoint out of range: {(u, v)}")
            if w < 1:
                raise ValueError(f"edge weight must be >= 1, got {w} on {(u, v)}")

    @property
    def num_nodes(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.weights)

    @property
    def edges(self) -> tuple[tuple[int, int, int], ...]:
        """Edges as sorted ``(src, dst, weight)`` triples."""
        return tuple((u, v, w) for (u, v), w in sorted(self.weights.items()))

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.weights

    def weight(self, u: int, v: int) -> int:
        return self.weights[(u, v)]

    @cached_property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in self.weights:
            adj[u].append(v)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in self.weights:
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def total_weight(self) -> int:
        return sum(self.weights.values())

    def induced_subgraph(self, nodes: Sequence[int]) -> "StaticGraph":
        """Subgraph induced by ``nodes``, renumbered in the given order."""
        remap = {old: new for new, old in enumerate(nodes)}
        if len(remap) != len(nodes):
            raise ValueError("duplicate nodes in selection")
        return StaticGraph(
            labels=tuple(self.labels[v] for v in nodes),
            provenance=tuple(self.provenance[v] for v in nodes),
            weights={
                (remap[u], remap[v]): w
                for (u, v), w in self.weights.items()
                if u in remap and v in remap
            },
            node_names=tuple(self.node_names[v] for v in nodes),
        )


def plain_graph(
    num_nodes: int,
    edges: Iterable[tuple[int, int]] | dict[tuple[int, int], int],
    node_names: Sequence[str] | None = None,
) -> StaticGraph:
    """A label-0 graph over original nodes; convenience for generators and tests."""
    weights = dict(edges) if isinstance(edges, dict) else {e: 1 for e in edges}
    names = tuple(node_names) if node_names is not None else tuple(str(i) for i in range(num_nodes))
    return StaticGraph(
        labels=(0,) * num_nodes,
        provenance=tuple(OriginalNode(i) for i in range(num_nodes)),
        weights=weights,
        node_names=names,
    )


# ---------------------------------------------------------------------------
# Export formats


def to_dot(g: StaticGraph) -> str:
    """GraphViz DOT: label-0 nodes render as boxes, label-1 nodes as ellipses."""
    lines = ["digraph G {"]
    for i in range(g.num_nodes):
        shape = "box" if g.labels[i] == 0 else "ellipse"
        name = g.node_names[i].replace('"', '\\"')
        lines.append(f'  n{i} [label="{name}", shape={shape}];')
    for (u, v), w in sorted(g.weights.items()):
        lines.append(f"  n{u} -> n{v} [weight={w}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _provenance_obj(p: Provenance) -> dict:
    if isinstance(p, OriginalNode):
        return {"kind": "original", "node": p.node}
    return {"kind": "event", "edge": list(p.edge.as_tuple())}


def _provenance_from_obj(obj: dict) -> Provenance:
    if obj["kind"] == "original":
        return OriginalNode(int(obj["node"]))
    if obj["kind"] == "event":
        u, v, t = obj["edge"]
        return EventNode(TimestampedEdge(int(u), int(v), int(t)))
    raise ValueError(f"unknown provenance kind {obj.get('kind')!r}")


def to_json_obj(g: StaticGraph) -> dict:
    """JSON-serializable form with explicit provenance so event nodes round-trip."""
    return {
        "nodes": [
            {"label": g.labels[i], "name": g.node_names[i], "provenance": _provenance_obj(g.provenance[i])}
            for i in range(g.num_nodes)
        ],
        "edges": [[u, v, w] for (u, v), w in sorted(g.weights.items())],
    }


def from_json_obj(obj: dict) -> StaticGraph:
    nodes = obj["nodes"]
    return StaticGraph(
        labels=tuple(int(n["label"]) for n in nodes),
        provenance=tuple(_provenance_from_obj(n["provenance"]) for n in nodes),
        weights={(int(u), int(v)): int(w) for u, v, w in obj["edges"]},
        node_names=tuple(str(n["name"]) for n in nodes),
    )


def to_json(g: StaticGraph) -> str:
    return json.dumps(to_json_obj(g), indent=2) + "\n"


def from_json(text: str) -> StaticGraph:
    return from_json_obj(json.loads(text))
