"""Community detection: edge betweenness, Girvan-Newman, modularity.

Betweenness uses Brandes' accumulation over single-source shortest paths.
Shortest paths are unweighted (hop count) by default; with weighted=True,
distance is 1/weight per edge, computed in exact rational arithmetic so that
equal path lengths compare equal and path counting stays deterministic.

Girvan-Newman repeatedly removes every edge tied for maximal betweenness
(recomputing after each removal round) and records a partition whenever the
component count grows. Each recorded level's modularity is evaluated on the
original weighted graph; the modularity-maximal level is the selected
partition. Expect O(E^2 * V) overall, fine for the few-hundred-node graphs
this package targets.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from .graph import Pair, WeightedGraph, pair_key

# Betweenness values within this absolute distance of the maximum count as
# tied. Distinct exact values on small graphs differ by far more; float
# round-off differs by far less.
_TIE_EPS = 1e-9


@dataclass(frozen=True)
class Partition:
    """Disjoint node communities plus the partition's modularity.

    Communities are canonically ordered: size descending, then smallest
    member ascending.
    """

    communities: tuple[frozenset[str], ...]
    modularity: float

    def __len__(self) -> int:
        return len(self.communities)

    def community_of(self) -> dict[str, int]:
        """Node -> index of its community in canonical order."""
        return {v: i for i, c in enumerate(self.communities) for v in c}

    def as_sets(self) -> set[frozenset[str]]:
        return set(self.communities)


@dataclass(frozen=True)
class Dendrogram:
    """Partitions recorded by Girvan-Newman, coarsest first.

    Level 0 is the connected-component partition; every later level refines
    the one before it; the last level is all singletons.
    """

    levels: tuple[Partition, ...]


@dataclass(frozen=True)
class DiagnosticsRow:
    """Layer summary: sizes, components, and within-community edge share."""

    n_nodes: int
    n_edges: int
    n_components: int
    lcc_size: int
    within_share: float


def canonical_communities(communities: Iterable[Iterable[str]]) -> tuple[frozenset[str], ...]:
    comms = [frozenset(c) for c in communities]
    comms.sort(key=lambda c: (-len(c), min(c)))
    return tuple(comms)


def make_partition(g: WeightedGraph, communities: Iterable[Iterable[str]]) -> Partition:
    comms = canonical_communities(communities)
    return Partition(communities=comms, modularity=modularity(g, comms))


def _check_partition(g: WeightedGraph, communities: Iterable[Iterable[str]]) -> list[frozenset[str]]:
    comms = [frozenset(c) for c in communities]
    total = 0
    union: set[str] = set()
    for c in comms:
        if not c:
            raise ValueError("empty community in partition")
        total += len(c)
        union |= c
    if total != len(union) or union != g.nodes:
        raise ValueError("communities do not partition the graph's node set")
    return comms


# -- shortest-path machinery ------------------------------------------------


def _bfs_sssp(g: WeightedGraph, source: str):
    """Order of settlement, predecessor lists and path counts from `source`."""
    dist = {source: 0}
    sigma = {source: 1}
    preds: dict[str, list[str]] = {source: []}
    order = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in g.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                sigma[w] = 0
                preds[w] = []
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def _dijkstra_sssp(g: WeightedGraph, source: str):
    """Weighted variant: edge distance 1/weight, exact Fraction arithmetic."""
    dist: dict[str, Fraction] = {}
    sigma = {source: 1}
    preds: dict[str, list[str]] = {source: []}
    order = []
    seen = {source: Fraction(0)}
    heap = [(Fraction(0), source)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        order.append(v)
        for w, weight in g.neighbors(v).items():
            if w in dist:
                continue
            nd = d + Fraction(1, weight)
            old = seen.get(w)
            if old is None or nd < old:
                seen[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, w))
            elif nd == old:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def edge_betweenness(g: WeightedGraph, weighted: bool = False) -> dict[Pair, float]:
    """Betweenness per edge: summed shortest-path fractions over node pairs.

    Each unordered pair of distinct, connected nodes contributes, per edge,
    the fraction of their shortest paths passing through that edge
    (equivalently: ordered-pair contributions halved).
    """
    bt = {pair: 0.0 for pair, _ in g.edge_items()}
    for source in g.sorted_nodes():
        if weighted:
            order, preds, sigma = _dijkstra_sssp(g, source)
        else:
            order, preds, sigma = _bfs_sssp(g, source)
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                contribution = sigma[v] * coeff
                bt[pair_key(v, w)] += contribution
                delta[v] += contribution
    for pair in bt:
        bt[pair] /= 2.0
    return bt


# -- Girvan-Newman -----------------------------------------------------------


def girvan_newman(g: WeightedGraph, weighted: bool = False) -> Dendrogram:
    """Hierarchical community dendrogram by iterated edge removal.

    Each round removes all edges tied (within 1e-9) for maximal betweenness
    of the current residual graph; a new level is recorded whenever the
    number of connected components increases. Modularity of every level is
    computed against the original graph.
    """
    levels = [make_partition(g, g.connected_components())]
    residual = g.edge_dict()
    nodes = g.nodes
    while residual:
        work = WeightedGraph(residual, nodes=nodes)
        bt = edge_betweenness(work, weighted=weighted)
        top = max(bt.values())
        for pair in [p for p, b in bt.items() if b >= top - _TIE_EPS]:
            del residual[pair]
        components = WeightedGraph(residual, nodes=nodes).connected_components()
        if len(components) > len(levels[-1]):
            levels.append(make_partition(g, components))
    return Dendrogram(levels=tuple(levels))


def modularity(g: WeightedGraph, communities: Iterable[Iterable[str]]) -> float:
    """Newman modularity of a partition, with edge weights.

    Q = sum over communities of [within-weight/W - (community degree/2W)^2],
    where W is the total edge weight. Defined as 0 for edgeless graphs.
    Raises ValueError when `communities` is not a partition of the nodes.
    """
    comms = _check_partition(g, communities)
    total = g.total_weight
    if total == 0:
        return 0.0
    q = 0.0
    for community in comms:
        internal = 0
        strength = 0
        for v in community:
            strength += g.weighted_degree(v)
            for u, w in g.neighbors(v).items():
                if u in community:
                    internal += w
        q += (internal / 2) / total - (strength / (2 * total)) ** 2
    return q


def select_partition(dendrogram: Dendrogram) -> Partition:
    """Level with maximal modularity; ties go to fewer communities, then to
    the earlier level."""
    if not dendrogram.levels:
        raise ValueError("empty dendrogram")
    best = dendrogram.levels[0]
    for level in dendrogram.levels[1:]:
        if level.modularity > best.modularity or (
            level.modularity == best.modularity and len(level) < len(best)
        ):
            best = level
    return best


def diagnostics(g: WeightedGraph, partition: Partition) -> DiagnosticsRow:
    """Node/edge/component counts plus the within-community edge share.

    within_share is the fraction of edges whose endpoints fall in the same
    community; it is defined as 1.0 for edgeless graphs.
    """
    _check_partition(g, partition.communities)
    community_of = partition.community_of()
    within = sum(1 for (a, b), _ in g.edge_items() if community_of[a] == community_of[b])
    components = g.connected_components()
    return DiagnosticsRow(
        n_nodes=g.n_nodes,
        n_edges=g.n_edges,
        n_components=len(components),
        lcc_size=len(components[0]) if components else 0,
        within_share=within / g.n_edges if g.n_edges else 1.0,
    )
