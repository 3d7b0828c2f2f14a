"""Temporal graph data model, parsing, and time-respecting path search.

A temporal graph is a set of nodes together with a set of directed edges that
carry integer timestamps.  Timestamped edges are instantaneous events.  A
sequence of edges forms a *time-respecting path* for a maximum waiting time
``delta`` when consecutive timestamps increase by at least 1 and at most
``delta``.  Repeated nodes are allowed: paths and walks are not distinguished.

Nodes are dense integer indices ``0 .. num_nodes-1``; external string names
from input files are retained for display and round-tripping.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import (
    BudgetExceededError,
    DuplicateEdgeError,
    EmptyGraphError,
    EmptyInputError,
    ParseError,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

_CSV_HEADER = "src,dst,t"


@dataclass(frozen=True)
class TimestampedEdge:
    """A directed interaction ``src -> dst`` at integer time ``t``."""

    src: int
    dst: int
    t: int

    def sort_key(self) -> tuple[int, int, int]:
        return (self.t, self.src, self.dst)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.src, self.dst, self.t)


def _check_delta(delta: int) -> None:
    if not isinstance(delta, int) or isinstance(delta, bool) or delta < 1:
        raise ValueError(f"delta must be a positive integer, got {delta!r}")


@dataclass(frozen=True)
class TemporalGraph:
    """An immutable temporal graph ``(V, E)`` with timestamped edge set ``E``.

    Edges are stored sorted by ``(t, src, dst)`` so that iteration order is
    deterministic.  Duplicate ``(src, dst, t)`` triples are rejected: the edge
    set is a set, not a multiset.
    """

    num_nodes: int
    edges: tuple[TimestampedEdge, ...]
    node_names: tuple[str, ...] | None = None

    def __post_init__(self):
        edges = tuple(sorted(self.edges, key=TimestampedEdge.sort_key))
        object.__setattr__(self, "edges", edges)
        if self.num_nodes < 0:
            raise ValueError("num_nodes must be non-negative")
        if len(set(edges)) != len(edges):
            raise DuplicateEdgeError("duplicate (src, dst, t) triple")
        for e in edges:
            if not (0 <= e.src < self.num_nodes and 0 <= e.dst < self.num_nodes):
                raise ValueError(f"edge endpoint out of range: {e}")
        if self.node_names is not None:
            names = tuple(self.node_names)
            object.__setattr__(self, "node_names", names)
            if len(names) != self.num_nodes:
                raise ValueError("node_names length must equal num_nodes")
            if len(set(names)) != len(names):
                raise ValueError("node names must be unique")

    @cached_property
    def edge_set(self) -> frozenset[TimestampedEdge]:
        return frozenset(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def t_min(self) -> int:
        """Earliest timestamp occurring in the graph."""
        if not self.edges:
            raise EmptyGraphError("graph has no edges")
        return self.edges[0].t

    def name_of(self, v: int) -> str:
        if self.node_names is not None:
            return self.node_names[v]
        return str(v)

    def node_index(self, name: str) -> int:
        if self.node_names is None:
            return int(name)
        return self.node_names.index(name)

    @cached_property
    def _out_index(self) -> dict[int, tuple[tuple[int, ...], tuple[TimestampedEdge, ...]]]:
        """Per-source edges sorted by time, with a parallel timestamp list for bisect."""
        buckets: dict[int, list[TimestampedEdge]] = {}
        for e in self.edges:
            buckets.setdefault(e.src, []).append(e)
        index = {}
        for src, es in buckets.items():
            es.sort(key=TimestampedEdge.sort_key)
            index[src] = (tuple(e.t for e in es), tuple(es))
        return index


@dataclass(frozen=True)
class TemporalPath:
    """An alternating node/edge sequence; ``edges[i]`` goes ``nodes[i] -> nodes[i+1]``."""

    nodes: tuple[int, ...]
    edges: tuple[TimestampedEdge, ...]

    def __post_init__(self):
        if len(self.nodes) != len(self.edges) + 1 or not self.edges:
            raise ValueError("a path needs k>=1 edges and k+1 nodes")
        for i, e in enumerate(self.edges):
            if e.src != self.nodes[i] or e.dst != self.nodes[i + 1]:
                raise ValueError(f"edge {e} does not connect nodes {i} -> {i + 1}")

    @classmethod
    def from_edges(cls, edges: Iterable[TimestampedEdge]) -> "TemporalPath":
        edges = tuple(edges)
        nodes = (edges[0].src,) + tuple(e.dst for e in edges)
        return cls(nodes=nodes, edges=edges)

    @property
    def length(self) -> int:
        return len(self.edges)

    def is_time_respecting(self, delta: int) -> bool:
        _check_delta(delta)
        return all(
            1 <= self.edges[i].t - self.edges[i - 1].t <= delta
            for i in range(1, len(self.edges))
        )


# ---------------------------------------------------------------------------
# Parsing and serialization


def parse_temporal_graph(text: str, fmt: str = "csv") -> TemporalGraph:
    """Parse a temporal graph from CSV (``src,dst,t`` per line, optional header)
    or NDJSON (one ``{"src":..,"dst":..,"t":..}`` object per line).

    Node ids are assigned densely in first-appearance order; original names
    are retained.  Raises :class:`ParseError` with the offending line number,
    :class:`DuplicateEdgeError` on repeated triples, and
    :class:`EmptyInputError` when no edges are present.
    """
    if fmt not in ("csv", "ndjson"):
        raise ValueError(f"unknown format {fmt!r}")
    names: dict[str, int] = {}
    edges: list[TimestampedEdge] = []
    seen: set[TimestampedEdge] = set()
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if fmt == "csv":
            if not edges and not saw_header and line == _CSV_HEADER:
                saw_header = True
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                raise ParseError(f"expected 'src,dst,t', got {line!r}", line=lineno)
            s, d, t_raw = parts
            if not s or not d:
                raise ParseError("empty node name", line=lineno)
            try:
                t = int(t_raw)
            except ValueError:
                raise ParseError(f"timestamp {t_raw!r} is not an integer", line=lineno) from None
        else:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}", line=lineno) from None
            if not isinstance(obj, dict) or not {"src", "dst", "t"} <= obj.keys():
                raise ParseError("object must have keys src, dst, t", line=lineno)
            s, d = str(obj["src"]), str(obj["dst"])
            t = obj["t"]
            if isinstance(t, bool) or not isinstance(t, int):
                raise ParseError(f"timestamp {t!r} is not an integer", line=lineno)
        if not (INT64_MIN <= t <= INT64_MAX):
            raise ParseError(f"timestamp {t} does not fit in 64 bits", line=lineno)
        u = names.setdefault(s, len(names))
        v = names.setdefault(d, len(names))
        e = TimestampedEdge(u, v, t)
        if e in seen:
            raise DuplicateEdgeError(f"duplicate edge ({s},{d},{t})", line=lineno)
        seen.add(e)
        edges.append(e)
    if not edges:
        raise EmptyInputError("input contains no edges")
    return TemporalGraph(num_nodes=len(names), edges=tuple(edges), node_names=tuple(names))


def to_csv(g: TemporalGraph) -> str:
    lines = [_CSV_HEADER]
    lines.extend(f"{g.name_of(e.src)},{g.name_of(e.dst)},{e.t}" for e in g.edges)
    return "\n".join(lines) + "\n"


def to_ndjson(g: TemporalGraph) -> str:
    lines = [
        json.dumps({"src": g.name_of(e.src), "dst": g.name_of(e.dst), "t": e.t})
        for e in g.edges
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Time-respecting path machinery


def time_respecting_successors(
    g: TemporalGraph, e: TimestampedEdge, delta: int
) -> set[TimestampedEdge]:
    """All edges ``(v, w; t')`` that extend ``e = (u, v; t)``, i.e. ``1 <= t'-t <= delta``."""
    _check_delta(delta)
    if e not in g.edge_set:
        raise ValueError(f"edge {e} is not in the graph")
    ts, es = g._out_index.get(e.dst, ((), ()))
    lo = bisect_left(ts, e.t + 1)
    hi = bisect_right(ts, e.t + delta)
    return set(es[lo:hi])


def _successors_sorted(
    g: TemporalGraph, e: TimestampedEdge, delta: int
) -> tuple[TimestampedEdge, ...]:
    ts, es = g._out_index.get(e.dst, ((), ()))
    lo = bisect_left(ts, e.t + 1)
    hi = bisect_right(ts, e.t + delta)
    return es[lo:hi]


def enumerate_time_respecting_paths(
    g: TemporalGraph,
    delta: int,
    max_len: int | None = None,
    max_paths: int | None = None,
) -> list[TemporalPath]:
    """Enumerate every time-respecting path of length ``1 .. max_len``.

    With ``max_len=None`` the enumeration is unbounded but still finite:
    timestamps strictly increase along a path, so no path is longer than
    ``|E|``.  Paths are emitted in depth-first order starting from edges
    sorted by ``(t, src, dst)``, which makes the output deterministic.
    ``max_paths`` aborts with :class:`BudgetExceededError` once exceeded.
    """
    _check_delta(delta)
    if max_len is not None and max_len < 1:
        raise ValueError("max_len must be >= 1")
    out: list[TemporalPath] = []

    def extend(acc: list[TimestampedEdge]) -> None:
        if max_paths is not None and len(out) >= max_paths:
            raise BudgetExceededError(f"more than {max_paths} time-respecting paths")
        out.append(TemporalPath.from_edges(acc))
        if max_len is not None and len(acc) >= max_len:
            return
        for nxt in _successors_sorted(g, acc[-1], delta):
            acc.append(nxt)
            extend(acc)
            acc.pop()

    for start in g.edges:
        extend([start])
    return out


def temporal_reachability(g: TemporalGraph, delta: int, source: int) -> set[int]:
    """Nodes reachable from ``source`` via some time-respecting path (plus ``source``).

    Runs a BFS over event-graph adjacencies seeded at the edges leaving
    ``source``, so no explicit path enumeration is needed.
    """
    _check_delta(delta)
    if not 0 <= source < g.num_nodes:
        raise ValueError(f"source {source} out of range")
    reached = {source}
    seen: set[TimestampedEdge] = set()
    frontier: deque[TimestampedEdge] = deque(
        e for e in g._out_index.get(source, ((), ()))[1]
    )
    while frontier:
        e = frontier.popleft()
        if e in seen:
            continue
        seen.add(e)
        reached.add(e.dst)
        frontier.extend(f for f in _successors_sorted(g, e, delta) if f not in seen)
    return reached


def iter_pairs_with_times(g: TemporalGraph) -> Iterator[tuple[tuple[int, int], list[int]]]:
    """Yield ``((u, v), sorted timestamps)`` for every node pair with at least one edge."""
    pairs: dict[tuple[int, int], list[int]] = {}
    for e in g.edges:
        pairs.setdefault((e.src, e.dst), []).append(e.t)
    for pair in sorted(pairs):
        yield pair, sorted(pairs[pair])
