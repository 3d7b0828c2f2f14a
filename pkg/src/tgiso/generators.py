"""Synthetic temporal graph generators for the classification experiments.

All randomness flows through numpy's PCG64 generator (``default_rng``), so a
fixed integer seed reproduces byte-identical graphs across runs and platforms.
Functions also accept an existing ``Generator`` so callers can chain several
draws off one stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DeadEndError, InfeasibleDegreeError, RetriesExhaustedError
from .static import StaticGraph, plain_graph
from .temporal import TemporalGraph, TimestampedEdge


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class SigmaBias:
    """Second-step reweighting toward (sigma > 0) or away from (sigma < 0)
    cross-community transitions, relative to the walker's previous node."""

    communities: dict[int, int]
    sigma: float

    def __post_init__(self):
        if not -1.0 < self.sigma < 1.0:
            raise ValueError("sigma must lie in (-1, 1)")


def k_regular_random_graph(
    n: int, k: int, seed, max_retries: int = 1000
) -> StaticGraph:
    """Random simple k-regular undirected graph on n nodes, stored as symmetric
    directed edges of weight 1.

    Uses the pairing (configuration) model: shuffle n*k stubs, pair them up,
    and restart whenever a self-loop or duplicate pair appears.
    """
    if n < 1 or k < 0 or k >= n or (n * k) % 2 != 0:
        raise InfeasibleDegreeError(f"no simple {k}-regular graph on {n} nodes")
    rng = _rng(seed)
    stubs = np.repeat(np.arange(n), k)
    for _ in range(max_retries):
        shuffled = rng.permutation(stubs)
        pairs = set()
        ok = True
        for a, b in zip(shuffled[0::2], shuffled[1::2]):
            u, v = int(min(a, b)), int(max(a, b))
            if u == v or (u, v) in pairs:
                ok = False
                break
            pairs.add((u, v))
        if ok:
            edges = {}
            for u, v in pairs:
                edges[(u, v)] = 1
                edges[(v, u)] = 1
            return plain_graph(n, edges)
    raise RetriesExhaustedError(f"no simple pairing found in {max_retries} tries")


def two_community_graph(
    n1: int, n2: int, k: int, bridges: int, seed
) -> tuple[StaticGraph, dict[int, int]]:
    """Two independent k-regular graphs joined by ``bridges`` undirected edges
    between distinct, uniformly chosen cross-community node pairs.

    Returns the graph and the community assignment (0 for nodes 0..n1-1,
    1 for the rest).
    """
    if bridges < 0 or bridges > n1 * n2:
        raise ValueError(f"bridges must lie in [0, {n1 * n2}]")
    rng = _rng(seed)
    g1 = k_regular_random_graph(n1, k, rng)
    g2 = k_regular_random_graph(n2, k, rng)
    edges = dict(g1.weights)
    for (u, v), w in g2.weights.items():
        edges[(u + n1, v + n1)] = w
    chosen = rng.choice(n1 * n2, size=bridges, replace=False)
    for idx in sorted(int(i) for i in chosen):
        u, v = idx // n2, n1 + idx % n2
        edges[(u, v)] = 1
        edges[(v, u)] = 1
    communities = {v: (0 if v < n1 else 1) for v in range(n1 + n2)}
    return plain_graph(n1 + n2, edges), communities


def sigma_bias(
    previous: int,
    current: int,
    candidates: tuple[int, ...],
    communities: dict[int, int],
    sigma: float,
) -> np.ndarray:
    """Transition probabilities over ``candidates`` for the second step of a walk.

    Starting from uniform weights, a candidate whose community differs from the
    previous node's community (so the length-2 path crosses communities) is
    reweighted by (1 + sigma), all others by (1 - sigma); the result is
    renormalized.  sigma = 0 reduces to the uniform distribution.
    """
    if not candidates:
        raise ValueError("candidates must be non-empty")
    w = np.full(len(candidates), 1.0 / len(candidates))
    prev_comm = communities[previous]
    for i, c in enumerate(candidates):
        w[i] *= (1.0 + sigma) if communities[c] != prev_comm else (1.0 - sigma)
    return w / w.sum()


def walk_temporal_graph(
    static: StaticGraph,
    num_walks: int,
    walk_len: int,
    seed,
    bias: SigmaBias | None = None,
) -> TemporalGraph:
    """Temporal graph traced by ``num_walks`` random walks of ``walk_len`` steps.

    Walk j assigns its i-th traversed edge the timestamp j*(walk_len+1)+i+1,
    i.e. consecutive timestamps within a walk and an unused gap timestamp
    between walks, so at delta=1 paths never chain across walks.  Start nodes
    are uniform; steps are uniform over out-neighbors, except that with a bias
    every step after the first is reweighted by :func:`sigma_bias` with respect
    to the walker's previous node.  The timestamp scheme makes duplicate
    (src, dst, t) triples impossible.
    """
    if walk_len < 1:
        raise ValueError("walk_len must be >= 1")
    n = static.num_nodes
    if n == 0:
        raise ValueError("empty substrate")
    isolated = [v for v in range(n) if not static.out_adj[v] and not static.in_adj[v]]
    if isolated:
        raise ValueError(f"substrate has isolated nodes: {isolated}")
    rng = _rng(seed)
    edges = []
    for j in range(num_walks):
        current = int(rng.integers(n))
        previous = None
        for i in range(walk_len):
            nbrs = static.out_adj[current]
            if not nbrs:
                raise DeadEndError(f"node {current} has no outgoing edges")
            if bias is not None and previous is not None:
                probs = sigma_bias(previous, current, nbrs, bias.communities, bias.sigma)
                nxt = int(rng.choice(len(nbrs), p=probs))
            else:
                nxt = int(rng.integers(len(nbrs)))
            target = nbrs[nxt]
            t = j * (walk_len + 1) + i + 1
            edges.append(TimestampedEdge(current, target, t))
            previous, current = current, target
    return TemporalGraph(num_nodes=n, edges=tuple(edges), node_names=static.node_names)


def shuffle_timestamps(
    g: TemporalGraph, alpha: float, seed, max_retries: int = 1000
) -> TemporalGraph:
    """Randomly permute the timestamps of a fraction ``alpha`` of the edges.

    ceil(alpha * |E|) edges are chosen uniformly without replacement and their
    timestamps are permuted among themselves, so the multiset of timestamps
    and every per-pair edge count are preserved: the time-aggregated graph is
    unchanged.  If a permutation would collide with an existing (src, dst, t)
    triple it is resampled, keeping |E| constant.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    m = math.ceil(alpha * g.num_edges)
    if m == 0:
        return g
    rng = _rng(seed)
    edges = list(g.edges)
    selected = sorted(int(i) for i in rng.choice(len(edges), size=m, replace=False))
    times = [edges[i].t for i in selected]
    untouched = {e for i, e in enumerate(edges) if i not in set(selected)}
    for _ in range(max_retries):
        perm = rng.permutation(m)
        new_edges = [
            TimestampedEdge(edges[i].src, edges[i].dst, times[int(p)])
            for i, p in zip(selected, perm)
        ]
        if len(set(new_edges)) == m and not untouched.intersection(new_edges):
            result = list(untouched) + new_edges
            return TemporalGraph(
                num_nodes=g.num_nodes, edges=tuple(result), node_names=g.node_names
            )
    raise RetriesExhaustedError(f"no collision-free permutation in {max_retries} tries")
