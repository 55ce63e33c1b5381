"""Synthetic corpora with planted structure, plus naive reference oracles.

The generator plants disjoint backbone communities (every tag pair of a
community co-occurs in `backbone_repeat` posts, enough to survive the core
thresholds) and long-tail fringe seeds (each co-occurs `fringe_attach_weight`
times with a single backbone anchor, too weakly for the core but visible to
the coverage layer and projectable). Ground truth ships with the corpus, so
every pipeline stage can be validated without any restricted dataset.

The reference oracles here are deliberately naive re-implementations used
for equivalence testing: betweenness by explicit all-pairs BFS path
enumeration in exact rational arithmetic, k-core by repeated full rescans,
modularity by a direct double loop over node pairs.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from fractions import Fraction

from .communities import girvan_newman, select_partition
from .graph import Pair, WeightedGraph, build_epoch_graph, pair_key
from .ingest import EpochConfig, EpochSpan, PostRecord
from .layers import build_layers
from .projection import PROJECTED, project_coverage, recovery_rate

_ORACLE_MAX_NODES = 12


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one planted corpus.

    backbone_repeat must be at least the core weight threshold (2) for the
    backbone to survive it; fringe_attach_weight below the threshold keeps
    fringe tags out of the core.
    """

    n_communities: int = 3
    backbone_tags_per_community: int = 6
    backbone_repeat: int = 3
    n_fringe_seeds: int = 20
    fringe_attach_weight: int = 1
    rng_seed: int = 7
    epoch_labels: tuple[str, ...] = ("E0",)
    start_year: int = 2020
    # None spreads fringe anchors over communities via the rng; an index
    # pins every fringe seed to that one community.
    fringe_anchor_community: int | None = None

    def __post_init__(self):
        if self.n_communities < 1 or self.backbone_tags_per_community < 2:
            raise ValueError("need at least one community with two tags")
        if self.backbone_repeat < 1 or self.fringe_attach_weight < 1:
            raise ValueError("repeat counts must be >= 1")
        if self.n_fringe_seeds < 0:
            raise ValueError("n_fringe_seeds must be >= 0")
        if not self.epoch_labels or len(set(self.epoch_labels)) != len(self.epoch_labels):
            raise ValueError("epoch_labels must be non-empty and distinct")
        if self.fringe_anchor_community is not None and not (
            0 <= self.fringe_anchor_community < self.n_communities
        ):
            raise ValueError("fringe_anchor_community out of range")

    def epoch_config(self) -> EpochConfig:
        return EpochConfig(
            tuple(
                EpochSpan(label, self.start_year + i, self.start_year + i)
                for i, label in enumerate(self.epoch_labels)
            )
        )

    def community_tags(self, i: int) -> list[str]:
        return [f"c{i}t{j}" for j in range(self.backbone_tags_per_community)]

    def fringe_tags(self) -> list[str]:
        return [f"fringe{k:02d}" for k in range(self.n_fringe_seeds)]


@dataclass(frozen=True)
class GroundTruth:
    """Planted membership and fringe attachments, identical in every epoch."""

    communities: tuple[frozenset[str], ...]
    # fringe tag -> (anchor backbone tag, community index)
    fringe_attachment: dict[str, tuple[str, int]]

    def to_json_obj(self) -> dict:
        return {
            "communities": [sorted(c) for c in self.communities],
            "fringe_attachment": {
                tag: {"anchor": anchor, "community": i}
                for tag, (anchor, i) in sorted(self.fringe_attachment.items())
            },
        }


def generate_synthetic_corpus(spec: SynthSpec) -> tuple[list[PostRecord], GroundTruth]:
    """Emit planted posts and their ground truth, deterministic per seed."""
    rng = random.Random(spec.rng_seed)
    attachments: dict[str, tuple[str, int]] = {}
    for tag in spec.fringe_tags():
        if spec.fringe_anchor_community is None:
            community = rng.randrange(spec.n_communities)
        else:
            community = spec.fringe_anchor_community
        anchor = rng.choice(spec.community_tags(community))
        attachments[tag] = (anchor, community)

    records: list[PostRecord] = []
    for epoch_index, label in enumerate(spec.epoch_labels):
        base = datetime(spec.start_year + epoch_index, 6, 1, tzinfo=timezone.utc)
        serial = 0

        def emit(tags: list[str]):
            nonlocal serial
            records.append(
                PostRecord(
                    post_id=f"synth-{label}-{serial:04d}",
                    timestamp=base + timedelta(minutes=serial),
                    text=" ".join("#" + t for t in tags),
                    hashtags=tuple(tags),
                    author_id=f"author-{serial % 7}",
                    lang_tag="xx",
                )
            )
            serial += 1

        for i in range(spec.n_communities):
            tags = spec.community_tags(i)
            for _ in range(spec.backbone_repeat):
                emit(tags)
        for tag in spec.fringe_tags():
            anchor, _ = attachments[tag]
            for _ in range(spec.fringe_attach_weight):
                emit([tag, anchor])

    truth = GroundTruth(
        communities=tuple(
            frozenset(spec.community_tags(i)) for i in range(spec.n_communities)
        ),
        fringe_attachment=attachments,
    )
    return records, truth


# -- naive reference oracles --------------------------------------------------


def _guard_size(g: WeightedGraph, limit: int = _ORACLE_MAX_NODES):
    if g.n_nodes > limit:
        raise ValueError(f"oracle size guard exceeded: {g.n_nodes} > {limit} nodes")


def reference_betweenness(g: WeightedGraph) -> dict[Pair, Fraction]:
    """Edge betweenness by enumerating every shortest path of every pair.

    Exact Fractions; intended for graphs of at most 12 nodes.
    """
    _guard_size(g)
    bt = {pair: Fraction(0) for pair, _ in g.edge_items()}
    nodes = g.sorted_nodes()
    for idx, source in enumerate(nodes):
        dist = {source: 0}
        preds: dict[str, list[str]] = {source: []}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    preds[w] = []
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    preds[w].append(v)

        def all_paths(v: str) -> list[list[str]]:
            if v == source:
                return [[source]]
            return [path + [v] for u in preds[v] for path in all_paths(u)]

        for target in nodes[idx + 1 :]:
            if target not in dist:
                continue
            paths = all_paths(target)
            share = Fraction(1, len(paths))
            for path in paths:
                for a, b in zip(path, path[1:]):
                    bt[pair_key(a, b)] += share
    return bt


def reference_kcore(g: WeightedGraph, k: int) -> WeightedGraph:
    """k-core by rescanning all remaining nodes until none falls below k."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    nodes = set(g.nodes)
    while True:
        bad = {
            v for v in nodes if len([u for u in g.neighbors(v) if u in nodes]) < k
        }
        if not bad:
            break
        nodes -= bad
    return g.subgraph(nodes)


def reference_modularity(g: WeightedGraph, communities) -> float:
    """Modularity by the direct double loop over same-community node pairs."""
    total = g.total_weight
    if total == 0:
        return 0.0
    two_w = 2 * total
    acc = 0.0
    for community in communities:
        members = sorted(community)
        for i in members:
            k_i = g.weighted_degree(i)
            for j in members:
                acc += g.weight(i, j) - k_i * g.weighted_degree(j) / two_w
    return acc / two_w


def _naive_components(nodes: set[str], edges: dict[Pair, int]) -> list[frozenset[str]]:
    adj: dict[str, set[str]] = {v: set() for v in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    out = []
    left = set(nodes)
    while left:
        start = min(left)
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for u in adj[v]:
                if u not in comp:
                    comp.add(u)
                    frontier.append(u)
        left -= comp
        out.append(frozenset(comp))
    out.sort(key=lambda c: (-len(c), min(c)))
    return out


def reference_girvan_newman(g: WeightedGraph) -> list[set[frozenset[str]]]:
    """Dendrogram levels (as sets of communities) via the betweenness oracle.

    Exact arithmetic makes the tie set unambiguous: every edge achieving the
    maximal betweenness is removed per round.
    """
    _guard_size(g)
    nodes = set(g.nodes)
    edges = g.edge_dict()
    levels = [set(_naive_components(nodes, edges))]
    while edges:
        bt = reference_betweenness(WeightedGraph(edges, nodes=nodes))
        top = max(bt.values())
        for pair in [p for p, b in bt.items() if b == top]:
            del edges[pair]
        components = set(_naive_components(nodes, edges))
        if len(components) > len(levels[-1]):
            levels.append(components)
    return levels


def random_connected_graphs(
    count: int,
    rng_seed: int = 20240601,
    min_nodes: int = 3,
    max_nodes: int = 8,
    edge_probs: tuple[float, ...] = (0.3, 0.5, 0.8),
    max_weight: int = 3,
) -> list[WeightedGraph]:
    """Seeded sample of connected weighted G(n, p) graphs for oracle tests."""
    rng = random.Random(rng_seed)
    graphs: list[WeightedGraph] = []
    while len(graphs) < count:
        n = rng.randint(min_nodes, max_nodes)
        p = rng.choice(edge_probs)
        names = [f"n{i}" for i in range(n)]
        edges = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    edges[(names[i], names[j])] = rng.randint(1, max_weight)
        g = WeightedGraph(edges, nodes=names)
        if g.n_edges and len(g.connected_components()) == 1:
            graphs.append(g)
    return graphs


# -- planted end-to-end evaluation --------------------------------------------


@dataclass(frozen=True)
class PlantedEpochEval:
    epoch_label: str
    core_recovery: float
    augmented_recovery: float
    attribution_accuracy: float
    n_fringe: int

    @property
    def delta(self) -> float:
        return self.augmented_recovery - self.core_recovery


@dataclass(frozen=True)
class PlantedEvalReport:
    epochs: tuple[PlantedEpochEval, ...] = field(default_factory=tuple)

    def _mean(self, attr: str) -> float:
        if not self.epochs:
            return 0.0
        return sum(getattr(e, attr) for e in self.epochs) / len(self.epochs)

    @property
    def core_recovery(self) -> float:
        return self._mean("core_recovery")

    @property
    def augmented_recovery(self) -> float:
        return self._mean("augmented_recovery")

    @property
    def attribution_accuracy(self) -> float:
        return self._mean("attribution_accuracy")

    @property
    def delta(self) -> float:
        return self.augmented_recovery - self.core_recovery


def planted_recovery_eval(spec: SynthSpec) -> PlantedEvalReport:
    """Run the full layered pipeline on a planted corpus and score it.

    Per epoch: seed recovery of the bare core, recovery after projection,
    and the fraction of fringe seeds projected onto the community that holds
    their planted anchor. Assertions live in the test suite; this returns
    the measured report.
    """
    records, truth = generate_synthetic_corpus(spec)
    fringe = set(truth.fringe_attachment)
    by_epoch: dict[str, list[PostRecord]] = {label: [] for label in spec.epoch_labels}
    years = {spec.start_year + i: label for i, label in enumerate(spec.epoch_labels)}
    for record in records:
        by_epoch[years[record.year()]].append(record)

    evals = []
    for label in spec.epoch_labels:
        epoch_graph = build_epoch_graph(by_epoch[label])
        layers = build_layers(epoch_graph, epoch_label=label)
        partition = select_partition(girvan_newman(layers.core))
        assign = project_coverage(
            partition,
            layers.coverage,
            extra_unassigned=epoch_graph.nodes - layers.coverage.nodes,
        )
        community_of = partition.community_of()
        correct = 0
        for tag, (anchor, _) in truth.fringe_attachment.items():
            expected = community_of.get(anchor)
            got = assign[tag] if tag in assign else None
            if (
                got is not None
                and got.status == PROJECTED
                and expected is not None
                and got.community == str(expected)
            ):
                correct += 1
        evals.append(
            PlantedEpochEval(
                epoch_label=label,
                core_recovery=recovery_rate(fringe, layers.core.nodes),
                augmented_recovery=recovery_rate(fringe, assign.augmented_nodes()),
                attribution_accuracy=correct / len(fringe) if fringe else 1.0,
                n_fringe=len(fringe),
            )
        )
    return PlantedEvalReport(epochs=tuple(evals))
