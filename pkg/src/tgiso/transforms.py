"""Static representations of temporal graphs.

Builders for the temporal event graph, the augmented event graph, the
compressed augmented event graph, the time-aggregated and time-concatenated
graphs, and the snapshot sequence.  All builders are pure functions over
immutable inputs.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass

from .errors import EmptyGraphError
from .static import EventNode, OriginalNode, StaticGraph
from .temporal import (
    TemporalGraph,
    TimestampedEdge,
    iter_pairs_with_times,
    time_respecting_successors,
)


@dataclass(frozen=True)
class TimestampSetAnnotation:
    """Per-edge sets of timestamp offsets relative to the graph's earliest timestamp."""

    offsets: dict[tuple[int, int], tuple[int, ...]]

    def __post_init__(self):
        seen_zero = False
        for pair, offs in self.offsets.items():
            if not offs:
                raise ValueError(f"empty offset set on {pair}")
            if list(offs) != sorted(set(offs)):
                raise ValueError(f"offsets on {pair} must be sorted and unique")
            if offs[0] < 0:
                raise ValueError(f"negative offset on {pair}")
            seen_zero = seen_zero or offs[0] == 0
        if self.offsets and not seen_zero:
            raise ValueError("minimum offset over all edges must be 0")


@dataclass(frozen=True)
class SnapshotSequence:
    """Ordered snapshots ``(t_i, E_i)`` with strictly increasing timestamps."""

    num_nodes: int
    snapshots: tuple[tuple[int, frozenset[tuple[int, int]]], ...]
    node_names: tuple[str, ...] | None = None

    def __post_init__(self):
        times = [t for t, _ in self.snapshots]
        if times != sorted(set(times)):
            raise ValueError("snapshot timestamps must be strictly increasing")
        if any(not edges for _, edges in self.snapshots):
            raise ValueError("snapshots must be non-empty")

    def __len__(self) -> int:
        return len(self.snapshots)

    def relative_offsets(self) -> tuple[int, ...]:
        t0 = self.snapshots[0][0]
        return tuple(t - t0 for t, _ in self.snapshots)


@dataclass(frozen=True)
class ComponentClass:
    """An equivalence class of event-graph components under per-pair time ranking."""

    representative: StaticGraph
    cardinality: int
    canonical_key: bytes


def _event_node_name(g: TemporalGraph, e: TimestampedEdge) -> str:
    return f"({g.name_of(e.src)},{g.name_of(e.dst)};{e.t})"


def build_event_graph(g: TemporalGraph, delta: int) -> StaticGraph:
    """Static graph with one node per timestamped edge and an arc ``e -> e'``
    whenever ``e`` and ``e'`` form a time-respecting path of length two."""
    index = {e: i for i, e in enumerate(g.edges)}
    weights: dict[tuple[int, int], int] = {}
    for i, e in enumerate(g.edges):
        for f in time_respecting_successors(g, e, delta):
            weights[(i, index[f])] = 1
    return StaticGraph(
        labels=(1,) * len(g.edges),
        provenance=tuple(EventNode(e) for e in g.edges),
        weights=weights,
        node_names=tuple(_event_node_name(g, e) for e in g.edges),
    )


def build_augmented_event_graph(g: TemporalGraph, delta: int) -> StaticGraph:
    """Event graph plus the original nodes (label 0), wired to every event node
    ``(u,v;t)`` by incidence arcs ``u -> (u,v;t) -> v``."""
    n = g.num_nodes
    eg = build_event_graph(g, delta)
    weights = {(n + u, n + v): w for (u, v), w in eg.weights.items()}
    for i, e in enumerate(g.edges):
        weights[(e.src, n + i)] = 1
        weights[(n + i, e.dst)] = 1
    return StaticGraph(
        labels=(0,) * n + eg.labels,
        provenance=tuple(OriginalNode(v) for v in range(n)) + eg.provenance,
        weights=weights,
        node_names=tuple(g.name_of(v) for v in range(n)) + eg.node_names,
    )


def _require_event_graph(eg: StaticGraph) -> None:
    if any(l != 1 for l in eg.labels):
        raise ValueError("expected an event graph (all node labels 1)")
    if any(not isinstance(p, EventNode) for p in eg.provenance):
        raise ValueError("expected an event graph (all nodes with event provenance)")


def connected_components(eg: StaticGraph) -> list[StaticGraph]:
    """Weakly connected components of an event graph, as induced subgraphs.

    Weak connectivity is required: a component such as ``{ab, bd, cd, de}``
    where ``cd`` feeds ``de`` but nothing feeds ``cd`` must stay in one piece.
    Components are ordered by their smallest node index.
    """
    _require_event_graph(eg)
    undirected: list[set[int]] = [set() for _ in range(eg.num_nodes)]
    for u, v in eg.weights:
        undirected[u].add(v)
        undirected[v].add(u)
    seen: set[int] = set()
    components = []
    for start in range(eg.num_nodes):
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        members = [start]
        while queue:
            u = queue.popleft()
            for v in undirected[u]:
                if v not in seen:
                    seen.add(v)
                    members.append(v)
                    queue.append(v)
        components.append(eg.induced_subgraph(sorted(members)))
    return components


def tau_relabel(component: StaticGraph) -> StaticGraph:
    """Replace each event node ``(u,v;t)`` by ``(u,v;rank)`` where ranks count the
    component's own timestamps for that node pair in ascending order from 1."""
    _require_event_graph(component)
    pair_ts: dict[tuple[int, int], list[int]] = {}
    for p in component.provenance:
        pair_ts.setdefault((p.edge.src, p.edge.dst), []).append(p.edge.t)
    rank = {
        (u, v, t): i + 1
        for (u, v), ts in pair_ts.items()
        for i, t in enumerate(sorted(ts))
    }
    relabeled = tuple(
        TimestampedEdge(p.edge.src, p.edge.dst, rank[p.edge.as_tuple()])
        for p in component.provenance
    )
    return StaticGraph(
        labels=component.labels,
        provenance=tuple(EventNode(e) for e in relabeled),
        weights=dict(component.weights),
        node_names=tuple(f"({e.src},{e.dst};{e.t})" for e in relabeled),
    )


def component_canonical_key(component: StaticGraph) -> bytes:
    """Canonical serialization of the tau-relabeled component; equal keys define
    equivalent components."""
    tau = tau_relabel(component)
    nodes = sorted(p.edge.as_tuple() for p in tau.provenance)
    arcs = sorted(
        (tau.provenance[u].edge.as_tuple(), tau.provenance[v].edge.as_tuple())
        for (u, v) in tau.weights
    )
    return json.dumps([nodes, arcs], separators=(",", ":")).encode()


def _member_sort_key(component: StaticGraph) -> tuple:
    originals = sorted(p.edge.as_tuple() for p in component.provenance)
    min_t = min(p.edge.t for p in component.provenance)
    return (min_t, originals)


def compress_event_graph(eg: StaticGraph) -> tuple[StaticGraph, list[ComponentClass]]:
    """Group weakly connected components by their canonical key and keep one
    representative per class, weighting its internal arcs by the class size.

    The representative is the member with the smallest original timestamp
    (ties broken by its sorted original edge list).  Classes are ordered by
    canonical key so the output is deterministic.
    """
    groups: dict[bytes, list[StaticGraph]] = {}
    for comp in connected_components(eg):
        groups.setdefault(component_canonical_key(comp), []).append(comp)
    classes = []
    for key in sorted(groups):
        members = sorted(groups[key], key=_member_sort_key)
        classes.append(
            ComponentClass(representative=members[0], cardinality=len(members), canonical_key=key)
        )
    labels: list[int] = []
    provenance: list = []
    names: list[str] = []
    weights: dict[tuple[int, int], int] = {}
    for cls in classes:
        offset = len(labels)
        rep = cls.representative
        labels.extend(rep.labels)
        provenance.extend(rep.provenance)
        names.extend(rep.node_names)
        for (u, v), _ in rep.weights.items():
            weights[(offset + u, offset + v)] = cls.cardinality
    compressed = StaticGraph(
        labels=tuple(labels),
        provenance=tuple(provenance),
        weights=weights,
        node_names=tuple(names),
    )
    return compressed, classes


def build_compressed_augmented_event_graph(
    g: TemporalGraph, delta: int, weighted_incidence: bool = False
) -> StaticGraph:
    """Compress the event graph, then attach the original nodes by incidence arcs.

    Incidence arcs carry weight 1; ``weighted_incidence=True`` weights them by
    the class cardinality instead (for ablation studies).
    """
    n = g.num_nodes
    compressed, classes = compress_event_graph(build_event_graph(g, delta))
    cardinality_of: dict[TimestampedEdge, int] = {}
    for cls in classes:
        for p in cls.representative.provenance:
            cardinality_of[p.edge] = cls.cardinality
    weights = {(n + u, n + v): w for (u, v), w in compressed.weights.items()}
    for i, p in enumerate(compressed.provenance):
        w = cardinality_of[p.edge] if weighted_incidence else 1
        weights[(p.edge.src, n + i)] = w
        weights[(n + i, p.edge.dst)] = w
    return StaticGraph(
        labels=(0,) * n + compressed.labels,
        provenance=tuple(OriginalNode(v) for v in range(n)) + compressed.provenance,
        weights=weights,
        node_names=tuple(g.name_of(v) for v in range(n)) + compressed.node_names,
    )


def build_time_aggregated(g: TemporalGraph) -> StaticGraph:
    """Static graph over the original nodes; edge weight counts the timestamped
    edges per node pair.  Discards all timing information."""
    counts = Counter((e.src, e.dst) for e in g.edges)
    return StaticGraph(
        labels=(0,) * g.num_nodes,
        provenance=tuple(OriginalNode(v) for v in range(g.num_nodes)),
        weights=dict(counts),
        node_names=tuple(g.name_of(v) for v in range(g.num_nodes)),
    )


def build_time_concatenated(g: TemporalGraph) -> tuple[StaticGraph, TimestampSetAnnotation]:
    """Time-aggregated topology plus, per static edge, the full set of timestamp
    offsets relative to the earliest timestamp.  Lossless up to a time shift."""
    if not g.edges:
        raise EmptyGraphError("time-concatenated graph needs at least one edge")
    t_min = g.t_min
    offsets = {
        pair: tuple(t - t_min for t in ts) for pair, ts in iter_pairs_with_times(g)
    }
    return build_time_aggregated(g), TimestampSetAnnotation(offsets=offsets)


def to_snapshots(g: TemporalGraph) -> SnapshotSequence:
    """One snapshot per distinct timestamp, ascending; ``E_i`` holds the node
    pairs active at ``t_i``."""
    if not g.edges:
        raise EmptyGraphError("snapshot sequence needs at least one edge")
    by_t: dict[int, set[tuple[int, int]]] = {}
    for e in g.edges:
        by_t.setdefault(e.t, set()).add((e.src, e.dst))
    snaps = tuple((t, frozenset(by_t[t])) for t in sorted(by_t))
    return SnapshotSequence(num_nodes=g.num_nodes, snapshots=snaps, node_names=g.node_names)


def snapshots_to_graph(s: SnapshotSequence) -> TemporalGraph:
    """Flatten a snapshot sequence back into a temporal graph."""
    edges = tuple(
        TimestampedEdge(u, v, t) for t, pairs in s.snapshots for (u, v) in pairs
    )
    return TemporalGraph(num_nodes=s.num_nodes, edges=edges, node_names=s.node_names)
