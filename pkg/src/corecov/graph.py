"""Weighted undirected co-occurrence graphs.

Nodes are hashtag tokens (plain lowercase strings), edges carry positive
integer weights equal to the number of posts in which the pair co-occurred.
Graphs are immutable after construction; every derived graph is a new object,
so instances are safe to share across threads.

Iteration order is deterministic everywhere: adjacency is stored sorted and
`edge_items` / `connected_components` return sorted results, independent of
string hash randomization.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

from .ingest import PostRecord

Pair = tuple[str, str]


def pair_key(a: str, b: str) -> Pair:
    """Canonical unordered key for an edge: endpoints sorted ascending."""
    return (a, b) if a <= b else (b, a)


class WeightedGraph:
    """Undirected graph with positive integer edge weights and no self-loops.

    `edges` may be a mapping {(a, b): weight} or an iterable of
    (a, b, weight) triples; keys are canonicalized so (a, b) and (b, a)
    address the same edge. `nodes` adds isolated nodes on top of all edge
    endpoints.
    """

    __slots__ = ("_adj", "_n_edges", "_total_weight")

    def __init__(
        self,
        edges: Mapping[Pair, int] | Iterable[tuple[str, str, int]] = (),
        nodes: Iterable[str] = (),
    ):
        adj: dict[str, dict[str, int]] = {}
        for v in nodes:
            adj.setdefault(v, {})
        if isinstance(edges, Mapping):
            triples: Iterable[tuple[str, str, int]] = (
                (a, b, w) for (a, b), w in edges.items()
            )
        else:
            triples = edges
        n_edges = 0
        total = 0
        for a, b, w in triples:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise ValueError(f"edge ({a!r}, {b!r}) weight must be a positive integer, got {w!r}")
            row = adj.setdefault(a, {})
            if b in row:
                raise ValueError(f"duplicate edge ({a!r}, {b!r})")
            row[b] = w
            adj.setdefault(b, {})[a] = w
            n_edges += 1
            total += w
        # Sorted adjacency makes all traversals deterministic.
        self._adj = {v: dict(sorted(adj[v].items())) for v in sorted(adj)}
        self._n_edges = n_edges
        self._total_weight = total

    # -- basic views ---------------------------------------------------

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self._adj)

    @property
    def n_nodes(self) -> int:
        return len(self._adj)

    @property
    def n_edges(self) -> int:
        return self._n_edges

    @property
    def total_weight(self) -> int:
        """Sum of edge weights (each edge counted once)."""
        return self._total_weight

    def __contains__(self, node: str) -> bool:
        return node in self._adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self):  # mutable-looking internals; identity hash is a trap
        raise TypeError("WeightedGraph is not hashable")

    def __repr__(self) -> str:
        return f"WeightedGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"

    def has_edge(self, a: str, b: str) -> bool:
        return b in self._adj.get(a, ())

    def weight(self, a: str, b: str) -> int:
        """Weight of edge (a, b) in either orientation; 0 if absent."""
        return self._adj.get(a, {}).get(b, 0)

    def neighbors(self, node: str) -> Mapping[str, int]:
        """Neighbor -> weight mapping for `node` (sorted by neighbor)."""
        return self._adj[node]

    def degree(self, node: str) -> int:
        """Unweighted degree: number of incident edges."""
        return len(self._adj[node])

    def weighted_degree(self, node: str) -> int:
        return sum(self._adj[node].values())

    def sorted_nodes(self) -> list[str]:
        return list(self._adj)

    def edge_items(self) -> Iterator[tuple[Pair, int]]:
        """Yield ((a, b), weight) with a < b, sorted by (a, b)."""
        for a, row in self._adj.items():
            for b, w in row.items():
                if a < b:
                    yield (a, b), w

    def edge_dict(self) -> dict[Pair, int]:
        return dict(self.edge_items())

    # -- derived graphs ------------------------------------------------

    def subgraph(self, keep: Iterable[str]) -> WeightedGraph:
        """Induced subgraph on `keep` (unknown names ignored)."""
        keep_set = set(keep) & self.nodes
        edges = {
            (a, b): w
            for (a, b), w in self.edge_items()
            if a in keep_set and b in keep_set
        }
        return WeightedGraph(edges, nodes=keep_set)

    def connected_components(self) -> list[frozenset[str]]:
        """Components sorted by size descending, then smallest member."""
        seen: set[str] = set()
        components: list[frozenset[str]] = []
        for start in self._adj:
            if start in seen:
                continue
            comp = {start}
            frontier = [start]
            while frontier:
                v = frontier.pop()
                for u in self._adj[v]:
                    if u not in comp:
                        comp.add(u)
                        frontier.append(u)
            seen |= comp
            components.append(frozenset(comp))
        components.sort(key=lambda c: (-len(c), min(c)))
        return components

    def largest_component_size(self) -> int:
        comps = self.connected_components()
        return len(comps[0]) if comps else 0


@dataclass(frozen=True)
class GraphStats:
    """Corpus-level counts behind one epoch graph."""

    n_posts: int
    n_unique_hashtags: int
    n_bigrams: int


def post_bigrams(record: PostRecord) -> set[Pair]:
    """All unordered hashtag pairs co-occurring in one post.

    Duplicates in the record (normally removed at parse time) collapse to a
    single occurrence; posts with fewer than two distinct hashtags yield
    nothing.
    """
    tags = sorted(set(record.hashtags))
    return {(tags[i], tags[j]) for i in range(len(tags)) for j in range(i + 1, len(tags))}


def build_yearly_graph(records: Iterable[PostRecord], year: int) -> WeightedGraph:
    """Co-occurrence graph for one calendar year (UTC).

    Edge weight = number of posts containing both endpoints. Hashtags that
    appear only alone are kept as degree-0 nodes so later stages can report
    them as unassigned.
    """
    counts: Counter[Pair] = Counter()
    nodes: set[str] = set()
    for record in records:
        if record.year() != year:
            raise ValueError(
                f"record {record.post_id!r} dated {record.year()} passed to year {year}"
            )
        nodes.update(record.hashtags)
        counts.update(post_bigrams(record))
    return WeightedGraph(dict(counts), nodes=nodes)


def aggregate_epoch(yearly: Iterable[WeightedGraph]) -> WeightedGraph:
    """Union the node sets and sum per-pair weights of yearly graphs."""
    counts: Counter[Pair] = Counter()
    nodes: set[str] = set()
    for g in yearly:
        nodes |= g.nodes
        for pair, w in g.edge_items():
            counts[pair] += w
    return WeightedGraph(dict(counts), nodes=nodes)


def build_epoch_graph(records: Iterable[PostRecord]) -> WeightedGraph:
    """Yearly graphs for all years present in `records`, aggregated."""
    by_year: dict[int, list[PostRecord]] = {}
    for record in records:
        by_year.setdefault(record.year(), []).append(record)
    return aggregate_epoch(
        build_yearly_graph(by_year[year], year) for year in sorted(by_year)
    )


def graph_stats(records: Iterable[PostRecord], graph: WeightedGraph) -> GraphStats:
    """Post / distinct-hashtag / distinct-bigram counts for one epoch.

    The hashtag count includes tags that never co-occur (degree-0 nodes).
    """
    records = list(records)
    return GraphStats(
        n_posts=len(records),
        n_unique_hashtags=graph.n_nodes,
        n_bigrams=graph.n_edges,
    )
