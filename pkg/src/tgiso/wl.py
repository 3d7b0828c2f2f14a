"""Directed Weisfeiler-Leman color refinement and fingerprint features.

The refinement keeps the multisets of incoming and outgoing neighbor colors
separate, which makes it strictly more expressive than the undirected variant
on directed graphs.  Colors are dense ids handed out by an append-only
dictionary, so the "hash" is injective by construction; two graphs refined
against the same dictionary have directly comparable colors.

Edge weights enter the refinement as ``(color, weight)`` pairs inside the
neighbor multisets.  This extension beyond plain neighbor colors is
deliberate (compressed event graphs carry class sizes as weights) and can be
switched off with ``use_weights=False``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Hashable

from .static import StaticGraph

_EPOCHS = itertools.count()


class ColorDictionary:
    """Append-only injective map from refinement keys to dense color ids.

    The same key always yields the same id within one dictionary instance
    ("epoch"); colors from different epochs are not comparable.
    """

    __slots__ = ("_ids", "epoch")

    def __init__(self):
        self._ids: dict[Hashable, int] = {}
        self.epoch = next(_EPOCHS)

    def id_for(self, key: Hashable) -> int:
        existing = self._ids.get(key)
        if existing is not None:
            return existing
        fresh = len(self._ids)
        self._ids[key] = fresh
        return fresh

    def __len__(self) -> int:
        return len(self._ids)


@dataclass(frozen=True)
class ColorAssignment:
    """Node colors per refinement iteration 0..K (``rounds[t][v]``)."""

    rounds: tuple[tuple[int, ...], ...]

    @property
    def iterations(self) -> int:
        return len(self.rounds) - 1

    def histogram(self, t: int) -> Counter:
        return Counter(self.rounds[t])

    def distinct_counts(self) -> tuple[int, ...]:
        return tuple(len(set(r)) for r in self.rounds)


@dataclass(frozen=True)
class WLFingerprint:
    """Sparse histogram of colors aggregated over iterations 0..K.

    Total count is ``(K+1) * |V|``.  Comparable only between fingerprints
    produced with the same dictionary epoch.
    """

    counts: dict[int, int]
    iterations: int
    epoch: int

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json_obj(self) -> dict:
        return {
            "iterations": self.iterations,
            "epoch": self.epoch,
            "counts": {str(c): k for c, k in sorted(self.counts.items())},
        }


def _neighbor_lists(
    edges: dict[tuple[int, int], Hashable], n: int
) -> tuple[list[list[tuple[int, Hashable]]], list[list[tuple[int, Hashable]]]]:
    ins: list[list[tuple[int, Hashable]]] = [[] for _ in range(n)]
    outs: list[list[tuple[int, Hashable]]] = [[] for _ in range(n)]
    for (u, v), label in edges.items():
        outs[u].append((v, label))
        ins[v].append((u, label))
    return ins, outs


def refine_labeled(
    node_labels: tuple[Hashable, ...],
    edges: dict[tuple[int, int], Hashable],
    iterations: int,
    dictionary: ColorDictionary,
    directed: bool = True,
) -> ColorAssignment:
    """Core refinement over an arbitrary labeled digraph.

    Iteration 0 encodes the node labels; iteration t hashes the previous color
    together with the multisets of (neighbor color, edge label) pairs, kept
    separate for incoming and outgoing neighbors when ``directed``.  Once the
    partition stops splitting the remaining iterations copy the stable
    coloring; refinement never merges cells, so stability is reached as soon
    as the number of distinct colors stops growing.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    n = len(node_labels)
    ins, outs = _neighbor_lists(edges, n)
    colors = [dictionary.id_for(("label", l)) for l in node_labels]
    rounds = [tuple(colors)]
    stable = False
    for _ in range(iterations):
        if stable:
            rounds.append(rounds[-1])
            continue
        prev = rounds[-1]
        fresh = []
        for v in range(n):
            in_ms = tuple(sorted((prev[u], label) for u, label in ins[v]))
            out_ms = tuple(sorted((prev[u], label) for u, label in outs[v]))
            if directed:
                key = ("refine", prev[v], in_ms, out_ms)
            else:
                key = ("refine-u", prev[v], tuple(sorted(in_ms + out_ms)))
            fresh.append(dictionary.id_for(key))
        if len(set(fresh)) == len(set(prev)):
            stable = True
        rounds.append(tuple(fresh))
    return ColorAssignment(rounds=tuple(rounds))


def _graph_edge_labels(g: StaticGraph, use_weights: bool) -> dict[tuple[int, int], Hashable]:
    if use_weights:
        return dict(g.weights)
    return {pair: 0 for pair in g.weights}


def dwl_refine(
    g: StaticGraph,
    iterations: int,
    dictionary: ColorDictionary | None = None,
    use_weights: bool = True,
    directed: bool = True,
) -> ColorAssignment:
    """Run directed WL refinement on a static graph for ``iterations`` rounds."""
    if dictionary is None:
        dictionary = ColorDictionary()
    return refine_labeled(
        tuple(g.labels), _graph_edge_labels(g, use_weights), iterations, dictionary, directed
    )


def first_distinguishing_iteration(
    g1: StaticGraph,
    g2: StaticGraph,
    iterations: int,
    use_weights: bool = True,
    directed: bool = True,
) -> int | None:
    """Smallest t in 0..K at which the color multisets of g1 and g2 differ, or None.

    Both graphs are refined against one fresh shared dictionary so colors are
    comparable.
    """
    shared = ColorDictionary()
    a1 = dwl_refine(g1, iterations, shared, use_weights, directed)
    a2 = dwl_refine(g2, iterations, shared, use_weights, directed)
    for t in range(iterations + 1):
        if a1.histogram(t) != a2.histogram(t):
            return t
    return None


def dwl_distinguish(
    g1: StaticGraph,
    g2: StaticGraph,
    iterations: int,
    use_weights: bool = True,
    directed: bool = True,
) -> bool:
    """True iff refinement separates the two graphs within ``iterations`` rounds."""
    return first_distinguishing_iteration(g1, g2, iterations, use_weights, directed) is not None


def wl_fingerprint(
    g: StaticGraph,
    iterations: int,
    dictionary: ColorDictionary,
    use_weights: bool = True,
) -> WLFingerprint:
    """Histogram of all colors over iterations 0..K against a shared dictionary."""
    assignment = dwl_refine(g, iterations, dictionary, use_weights)
    counts: Counter = Counter()
    for r in assignment.rounds:
        counts.update(r)
    return WLFingerprint(counts=dict(counts), iterations=iterations, epoch=dictionary.epoch)
