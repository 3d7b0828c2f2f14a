"""Exact isomorphism tests for temporal graphs, with witness mappings.

Four notions are implemented on top of one labeled-digraph search engine:

* consistent event graph isomorphism — static isomorphism of the augmented
  event graphs, which is equivalent to preservation of all time-respecting
  paths;
* time-aggregated isomorphism — static isomorphism with per-pair edge counts
  as labels;
* time-concatenated isomorphism — static isomorphism with full timestamp
  offset sets as labels;
* timewise isomorphism of snapshot sequences — one node bijection that is an
  isomorphism in every snapshot, with matching relative timestamps.

A brute-force oracle checks time-respecting path preservation directly from
the definition by enumerating node and edge bijections; it shares no code
with the search engine and exists to validate it.

The search engine prunes with color refinement, then backtracks inside color
cells, most-constrained cell first.  Budgets count attempted node-pair
assignments; an exhausted budget is a distinct verdict, never conflated with
non-isomorphism.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Hashable

from .errors import EmptyGraphError, SizeCapExceededError
from .static import EventNode, StaticGraph
from .temporal import TemporalGraph, TimestampedEdge, enumerate_time_respecting_paths
from .transforms import (
    SnapshotSequence,
    build_augmented_event_graph,
    build_event_graph,
    build_time_aggregated,
    build_time_concatenated,
)
from .wl import ColorDictionary, refine_labeled


class Verdict(Enum):
    ISOMORPHIC = "isomorphic"
    NOT_ISOMORPHIC = "not_isomorphic"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class SearchBudget:
    """Cap on attempted node-pair assignments during backtracking."""

    max_nodes_expanded: int = 10_000_000

    def __post_init__(self):
        if self.max_nodes_expanded < 1:
            raise ValueError("budget must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class IsoResult:
    """Verdict plus witness mappings when isomorphic.

    ``node_map`` maps nodes of the first graph to nodes of the second;
    ``edge_map`` (for temporal notions) maps timestamped edges and is
    node-consistent with ``node_map``.
    """

    verdict: Verdict
    node_map: dict[int, int] | None = None
    edge_map: dict[TimestampedEdge, TimestampedEdge] | None = None

    def __post_init__(self):
        if (self.verdict == Verdict.ISOMORPHIC) != (self.node_map is not None):
            raise ValueError("node_map must be present exactly when isomorphic")
        if self.edge_map is not None and self.verdict != Verdict.ISOMORPHIC:
            raise ValueError("edge_map only valid on an isomorphic verdict")

    @property
    def isomorphic(self) -> bool:
        return self.verdict == Verdict.ISOMORPHIC


def _normalize_budget(budget: SearchBudget | int | None) -> int:
    if budget is None:
        return DEFAULT_BUDGET.max_nodes_expanded
    if isinstance(budget, SearchBudget):
        return budget.max_nodes_expanded
    return SearchBudget(budget).max_nodes_expanded


# ---------------------------------------------------------------------------
# Labeled-digraph search engine

_LabelMap = dict[tuple[int, int], Hashable]


def _labeled_iso_search(
    labels1: tuple[Hashable, ...],
    edges1: _LabelMap,
    labels2: tuple[Hashable, ...],
    edges2: _LabelMap,
    budget: int,
) -> tuple[Verdict, dict[int, int] | None]:
    n = len(labels1)
    if n != len(labels2):
        return Verdict.NOT_ISOMORPHIC, None
    if Counter(labels1) != Counter(labels2):
        return Verdict.NOT_ISOMORPHIC, None
    if len(edges1) != len(edges2):
        return Verdict.NOT_ISOMORPHIC, None
    if Counter(edges1.values()) != Counter(edges2.values()):
        return Verdict.NOT_ISOMORPHIC, None
    if n == 0:
        return Verdict.ISOMORPHIC, {}

    shared = ColorDictionary()
    a1 = refine_labeled(labels1, edges1, n, shared)
    a2 = refine_labeled(labels2, edges2, n, shared)
    for t in range(n + 1):
        if a1.histogram(t) != a2.histogram(t):
            return Verdict.NOT_ISOMORPHIC, None
    colors1, colors2 = a1.rounds[-1], a2.rounds[-1]

    cells2: dict[int, list[int]] = {}
    for v, c in enumerate(colors2):
        cells2.setdefault(c, []).append(v)
    cell_size = {c: len(vs) for c, vs in cells2.items()}
    order = sorted(range(n), key=lambda v: (cell_size[colors1[v]], colors1[v], v))

    out1: list[dict[int, Hashable]] = [{} for _ in range(n)]
    in1: list[dict[int, Hashable]] = [{} for _ in range(n)]
    for (u, v), lab in edges1.items():
        out1[u][v] = lab
        in1[v][u] = lab
    out2: list[dict[int, Hashable]] = [{} for _ in range(n)]
    in2: list[dict[int, Hashable]] = [{} for _ in range(n)]
    for (u, v), lab in edges2.items():
        out2[u][v] = lab
        in2[v][u] = lab

    mapping = [-1] * n
    used = [False] * n
    expansions = 0

    def consistent(u: int, v: int, depth: int) -> bool:
        for i in range(depth):
            x = order[i]
            y = mapping[x]
            if out1[u].get(x) != out2[v].get(y):
                return False
            if in1[u].get(x) != in2[v].get(y):
                return False
        return True

    # Iterative backtracking; depth d assigns order[d].
    iters: list = [None] * (n + 1)
    depth = 0
    iters[0] = iter(cells2[colors1[order[0]]])
    while True:
        advanced = False
        for v in iters[depth]:
            expansions += 1
            if expansions > budget:
                return Verdict.BUDGET_EXCEEDED, None
            if used[v] or not consistent(order[depth], v, depth):
                continue
            mapping[order[depth]] = v
            used[v] = True
            depth += 1
            if depth == n:
                return Verdict.ISOMORPHIC, {u: mapping[u] for u in range(n)}
            iters[depth] = iter(cells2[colors1[order[depth]]])
            advanced = True
            break
        if not advanced:
            depth -= 1
            if depth < 0:
                return Verdict.NOT_ISOMORPHIC, None
            v = mapping[order[depth]]
            mapping[order[depth]] = -1
            used[v] = False


def _validate_labeled_witness(
    labels1: tuple[Hashable, ...],
    edges1: _LabelMap,
    labels2: tuple[Hashable, ...],
    edges2: _LabelMap,
    mapping: dict[int, int],
) -> bool:
    """Independent re-check of a witness: bijectivity plus label/edge preservation."""
    n = len(labels1)
    if len(labels2) != n or len(mapping) != n:
        return False
    if sorted(mapping.values()) != list(range(n)):
        return False
    if any(labels1[u] != labels2[mapping[u]] for u in range(n)):
        return False
    mapped = {(mapping[u], mapping[v]): lab for (u, v), lab in edges1.items()}
    return mapped == edges2


class WitnessValidationError(RuntimeError):
    """The search produced a mapping that fails independent validation (a bug)."""


def _checked_result(
    verdict: Verdict,
    mapping: dict[int, int] | None,
    labels1,
    edges1,
    labels2,
    edges2,
) -> tuple[Verdict, dict[int, int] | None]:
    if verdict == Verdict.ISOMORPHIC:
        assert mapping is not None
        if not _validate_labeled_witness(labels1, edges1, labels2, edges2, mapping):
            raise WitnessValidationError("witness mapping failed validation")
    return verdict, mapping


def _run_labeled(labels1, edges1, labels2, edges2, budget) -> tuple[Verdict, dict[int, int] | None]:
    verdict, mapping = _labeled_iso_search(labels1, edges1, labels2, edges2, budget)
    return _checked_result(verdict, mapping, labels1, edges1, labels2, edges2)


# ---------------------------------------------------------------------------
# Public operations


def static_iso(
    g1: StaticGraph, g2: StaticGraph, budget: SearchBudget | int | None = None
) -> IsoResult:
    """Exact isomorphism of static graphs, respecting node labels and edge weights."""
    verdict, mapping = _run_labeled(
        g1.labels, dict(g1.weights), g2.labels, dict(g2.weights), _normalize_budget(budget)
    )
    return IsoResult(verdict=verdict, node_map=mapping)


def _decompose_augmented_witness(
    g1: TemporalGraph,
    aug1: StaticGraph,
    aug2: StaticGraph,
    mapping: dict[int, int],
) -> tuple[dict[int, int], dict[TimestampedEdge, TimestampedEdge]]:
    n1 = g1.num_nodes
    node_map = {u: mapping[u] for u in range(n1)}
    edge_map = {}
    for i in range(n1, aug1.num_nodes):
        p1 = aug1.provenance[i]
        p2 = aug2.provenance[mapping[i]]
        assert isinstance(p1, EventNode) and isinstance(p2, EventNode)
        edge_map[p1.edge] = p2.edge
    return node_map, edge_map


def validate_temporal_witness(
    g1: TemporalGraph,
    g2: TemporalGraph,
    delta: int,
    node_map: dict[int, int],
    edge_map: dict[TimestampedEdge, TimestampedEdge],
) -> bool:
    """Check a claimed consistent-event-graph witness directly against the definition:
    both maps bijective, the edge map node-consistent with the node map, and the
    edge map an isomorphism between the two event graphs."""
    if sorted(node_map.keys()) != list(range(g1.num_nodes)):
        return False
    if sorted(node_map.values()) != list(range(g2.num_nodes)):
        return False
    if set(edge_map.keys()) != g1.edge_set or set(edge_map.values()) != g2.edge_set:
        return False
    if len(edge_map) != g1.num_edges:
        return False
    for e, f in edge_map.items():
        if f.src != node_map[e.src] or f.dst != node_map[e.dst]:
            return False
    eg1 = build_event_graph(g1, delta)
    eg2 = build_event_graph(g2, delta)
    idx1 = {p.edge: i for i, p in enumerate(eg1.provenance)}
    idx2 = {p.edge: i for i, p in enumerate(eg2.provenance)}
    if len(eg1.weights) != len(eg2.weights):
        return False
    for (i, j) in eg1.weights:
        e, f = eg1.provenance[i].edge, eg1.provenance[j].edge
        if (idx2[edge_map[e]], idx2[edge_map[f]]) not in eg2.weights:
            return False
    return True


def consistent_event_graph_iso(
    g1: TemporalGraph,
    g2: TemporalGraph,
    delta: int,
    budget: SearchBudget | int | None = None,
) -> IsoResult:
    """Test whether two temporal graphs have the same causal topology.

    Builds both augmented event graphs and reduces to static isomorphism; the
    static witness decomposes into a node bijection (label-0 nodes) and a
    timestamped-edge bijection (label-1 nodes).
    """
    aug1 = build_augmented_event_graph(g1, delta)
    aug2 = build_augmented_event_graph(g2, delta)
    verdict, mapping = _run_labeled(
        aug1.labels, dict(aug1.weights), aug2.labels, dict(aug2.weights), _normalize_budget(budget)
    )
    if verdict != Verdict.ISOMORPHIC:
        return IsoResult(verdict=verdict)
    assert mapping is not None
    node_map, edge_map = _decompose_augmented_witness(g1, aug1, aug2, mapping)
    if not validate_temporal_witness(g1, g2, delta, node_map, edge_map):
        raise WitnessValidationError("decomposed witness failed the definition checks")
    return IsoResult(verdict=Verdict.ISOMORPHIC, node_map=node_map, edge_map=edge_map)


def time_aggregated_iso(
    g1: TemporalGraph, g2: TemporalGraph, budget: SearchBudget | int | None = None
) -> IsoResult:
    """Isomorphism of the time-aggregated graphs (edge counts as labels)."""
    return static_iso(build_time_aggregated(g1), build_time_aggregated(g2), budget)


def time_concatenated_iso(
    g1: TemporalGraph, g2: TemporalGraph, budget: SearchBudget | int | None = None
) -> IsoResult:
    """Isomorphism of the time-concatenated graphs (offset sets as edge labels).

    On success the witness includes the induced edge map, which shifts every
    timestamp by the difference of the earliest timestamps.
    """
    if not g1.edges or not g2.edges:
        raise EmptyGraphError("time-concatenated isomorphism needs non-empty graphs")
    sg1, ann1 = build_time_concatenated(g1)
    sg2, ann2 = build_time_concatenated(g2)
    verdict, mapping = _run_labeled(
        sg1.labels, dict(ann1.offsets), sg2.labels, dict(ann2.offsets), _normalize_budget(budget)
    )
    if verdict != Verdict.ISOMORPHIC:
        return IsoResult(verdict=verdict)
    assert mapping is not None
    shift = g2.t_min - g1.t_min
    edge_map = {
        e: TimestampedEdge(mapping[e.src], mapping[e.dst], e.t + shift) for e in g1.edges
    }
    if set(edge_map.values()) != g2.edge_set:
        raise WitnessValidationError("shifted edge map does not land on the second edge set")
    return IsoResult(verdict=Verdict.ISOMORPHIC, node_map=mapping, edge_map=edge_map)


def timewise_iso(
    s1: SnapshotSequence, s2: SnapshotSequence, budget: SearchBudget | int | None = None
) -> IsoResult:
    """One node bijection that is an isomorphism in every snapshot, requiring
    equal snapshot counts and equal relative timestamps.

    Implemented as a single static-isomorphism run on the union graph whose
    edge labels record the snapshot indices in which each edge occurs.
    """
    if len(s1) != len(s2) or s1.relative_offsets() != s2.relative_offsets():
        return IsoResult(verdict=Verdict.NOT_ISOMORPHIC)
    if s1.num_nodes != s2.num_nodes:
        return IsoResult(verdict=Verdict.NOT_ISOMORPHIC)

    def union_labels(s: SnapshotSequence) -> _LabelMap:
        occ: dict[tuple[int, int], list[int]] = {}
        for i, (_, pairs) in enumerate(s.snapshots):
            for pair in pairs:
                occ.setdefault(pair, []).append(i)
        return {pair: tuple(ixs) for pair, ixs in occ.items()}

    labels = (0,) * s1.num_nodes
    verdict, mapping = _run_labeled(
        labels, union_labels(s1), labels, union_labels(s2), _normalize_budget(budget)
    )
    if verdict != Verdict.ISOMORPHIC:
        return IsoResult(verdict=verdict)
    assert mapping is not None
    edge_map = {}
    for (t1, pairs), (t2, _) in zip(s1.snapshots, s2.snapshots):
        for (u, v) in pairs:
            edge_map[TimestampedEdge(u, v, t1)] = TimestampedEdge(mapping[u], mapping[v], t2)
    return IsoResult(verdict=Verdict.ISOMORPHIC, node_map=mapping, edge_map=edge_map)


# ---------------------------------------------------------------------------
# Brute-force oracle


def brute_force_trp_iso(
    g1: TemporalGraph,
    g2: TemporalGraph,
    delta: int,
    max_nodes: int = 6,
    max_edges: int = 7,
) -> IsoResult:
    """Oracle for time-respecting path isomorphism, straight from the definition.

    Enumerates every node bijection and, for each, every node-consistent edge
    bijection, accepting when the image of the first graph's set of
    time-respecting paths equals the second graph's set.  Exponential; inputs
    beyond the size cap raise :class:`SizeCapExceededError`.
    """
    for g in (g1, g2):
        if g.num_nodes > max_nodes or g.num_edges > max_edges:
            raise SizeCapExceededError(
                f"oracle caps at {max_nodes} nodes / {max_edges} edges"
            )
    n = g1.num_nodes
    if n != g2.num_nodes or g1.num_edges != g2.num_edges:
        return IsoResult(verdict=Verdict.NOT_ISOMORPHIC)

    paths1 = [tuple(p.edges) for p in enumerate_time_respecting_paths(g1, delta)]
    paths2 = {tuple(p.edges) for p in enumerate_time_respecting_paths(g2, delta)}
    if len(paths1) != len(paths2):
        return IsoResult(verdict=Verdict.NOT_ISOMORPHIC)

    def pair_groups(g: TemporalGraph) -> dict[tuple[int, int], list[TimestampedEdge]]:
        groups: dict[tuple[int, int], list[TimestampedEdge]] = {}
        for e in g.edges:
            groups.setdefault((e.src, e.dst), []).append(e)
        return groups

    groups1 = pair_groups(g1)
    groups2 = pair_groups(g2)
    if len(groups1) != len(groups2):
        return IsoResult(verdict=Verdict.NOT_ISOMORPHIC)
    pair_keys = sorted(groups1)

    for perm in itertools.permutations(range(n)):
        targets = []
        feasible = True
        for (u, v) in pair_keys:
            target = groups2.get((perm[u], perm[v]))
            if target is None or len(target) != len(groups1[(u, v)]):
                feasible = False
                break
            targets.append(target)
        if not feasible:
            continue
        for assignment in itertools.product(
            *(itertools.permutations(t) for t in targets)
        ):
            edge_map = {}
            for pair, assigned in zip(pair_keys, assignment):
                for e, f in zip(groups1[pair], assigned):
                    edge_map[e] = f
            if all(tuple(edge_map[e] for e in p) in paths2 for p in paths1):
                return IsoResult(
                    verdict=Verdict.ISOMORPHIC,
                    node_map={u: perm[u] for u in range(n)},
                    edge_map=edge_map,
                )
    return IsoResult(verdict=Verdict.NOT_ISOMORPHIC)
