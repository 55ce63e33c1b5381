"""Core and coverage layers of an epoch graph.

The core layer keeps only repeatedly-seen edges (weight >= core_min_weight,
default 2) and then reduces to the k-core (default k=2), yielding the stable
backbone. The coverage layer keeps every co-occurrence (weight >= 1) and
drops only degree-0 nodes, preserving the long tail.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import WeightedGraph


@dataclass(frozen=True)
class LayerPair:
    """Core and coverage layers derived from one epoch graph."""

    core: WeightedGraph
    coverage: WeightedGraph
    epoch_label: str = ""
    core_min_weight: int = 2
    k: int = 2


def threshold_edges(g: WeightedGraph, min_weight: int) -> WeightedGraph:
    """Keep edges with weight >= min_weight; drop nodes left isolated."""
    if min_weight < 1:
        raise ValueError(f"min_weight must be >= 1, got {min_weight}")
    edges = {pair: w for pair, w in g.edge_items() if w >= min_weight}
    return WeightedGraph(edges)


def k_core(g: WeightedGraph, k: int) -> WeightedGraph:
    """Maximal subgraph in which every node has at least k neighbors.

    Degree is the unweighted neighbor count. Computed by iterative peeling:
    nodes below k are removed, neighbor degrees updated, until fixpoint.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    degrees = {v: g.degree(v) for v in g.sorted_nodes()}
    doomed = [v for v, d in degrees.items() if d < k]
    removed = set(doomed)
    while doomed:
        v = doomed.pop()
        for u in g.neighbors(v):
            if u not in removed:
                degrees[u] -= 1
                if degrees[u] < k:
                    removed.add(u)
                    doomed.append(u)
    return g.subgraph(g.nodes - removed)


def build_layers(
    epoch_graph: WeightedGraph,
    core_min_weight: int = 2,
    k: int = 2,
    epoch_label: str = "",
) -> LayerPair:
    """Derive both layers: weight threshold then k-core for the core,
    all edges minus isolated nodes for the coverage."""
    if core_min_weight < 1 or k < 1:
        raise ValueError("core_min_weight and k must be >= 1")
    core = k_core(threshold_edges(epoch_graph, core_min_weight), k)
    coverage = threshold_edges(epoch_graph, 1)
    return LayerPair(
        core=core,
        coverage=coverage,
        epoch_label=epoch_label,
        core_min_weight=core_min_weight,
        k=k,
    )
