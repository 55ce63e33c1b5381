import random
from collections import deque
from fractions import Fraction

import pytest

from corecov import (
    WeightedGraph,
    diagnostics,
    edge_betweenness,
    girvan_newman,
    make_partition,
    modularity,
    random_connected_graphs,
    reference_betweenness,
    reference_girvan_newman,
    reference_modularity,
    select_partition,
)


# -- edge betweenness ------------------------------------------------------------


def test_single_edge_betweenness():
    g = WeightedGraph({("a", "b"): 1})
    assert edge_betweenness(g) == {("a", "b"): pytest.approx(1.0)}


def test_path_betweenness(path3):
    bt = edge_betweenness(path3)
    assert bt[("a", "b")] == pytest.approx(2.0)
    assert bt[("b", "c")] == pytest.approx(2.0)


def test_barbell_bridge_is_strictly_maximal(barbell):
    bt = edge_betweenness(barbell)
    bridge = bt[("c", "d")]
    for pair, value in bt.items():
        if pair != ("c", "d"):
            assert value < bridge


def test_betweenness_matches_oracle_sample():
    for g in random_connected_graphs(40, rng_seed=11):
        got = edge_betweenness(g)
        want = reference_betweenness(g)
        for pair, value in want.items():
            assert got[pair] == pytest.approx(float(value), abs=1e-9)


def _pair_distances(g: WeightedGraph) -> int:
    total = 0
    for source in g.sorted_nodes():
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        total += sum(dist.values())
    return total // 2  # each unordered pair counted twice


def test_betweenness_sums_to_pair_distances():
    for g in random_connected_graphs(30, rng_seed=23):
        bt = edge_betweenness(g)
        assert sum(bt.values()) == pytest.approx(_pair_distances(g), abs=1e-6)


def test_weighted_betweenness_uses_inverse_weight_distances():
    # a-c carries weight 1 (distance 1); a-b-c costs 1/2 + 1/2, a tie, so
    # the (a, c) pair splits between the direct edge and the two-hop route.
    g = WeightedGraph({("a", "b"): 2, ("b", "c"): 2, ("a", "c"): 1})
    bt = edge_betweenness(g, weighted=True)
    assert bt[("a", "b")] == pytest.approx(1.5)
    assert bt[("b", "c")] == pytest.approx(1.5)
    assert bt[("a", "c")] == pytest.approx(0.5)


def test_weighted_gn_splits_on_weak_bridge():
    # two heavy triangles joined by a heavy bridge: under 1/weight distances
    # the bridge is still the only inter-triangle route, removed first
    g = WeightedGraph(
        {("a", "b"): 3, ("b", "c"): 3, ("a", "c"): 3,
         ("d", "e"): 3, ("e", "f"): 3, ("d", "f"): 3,
         ("c", "d"): 5}
    )
    d = girvan_newman(g, weighted=True)
    assert d.levels[1].as_sets() == {frozenset("abc"), frozenset("def")}


# -- modularity -------------------------------------------------------------------


def test_whole_graph_modularity_zero(triangle):
    assert modularity(triangle, [{"a", "b", "c"}]) == pytest.approx(0.0)


def test_two_clique_split_is_half(two_triangles):
    q = modularity(two_triangles, [{"a", "b", "c"}, {"d", "e", "f"}])
    assert q == pytest.approx(0.5)


def test_modularity_requires_partition(triangle):
    with pytest.raises(ValueError):
        modularity(triangle, [{"a", "b"}])
    with pytest.raises(ValueError):
        modularity(triangle, [{"a", "b"}, {"b", "c"}])
    with pytest.raises(ValueError):
        modularity(triangle, [{"a", "b", "c"}, set()])


def _random_partition(rng: random.Random, nodes):
    nodes = sorted(nodes)
    k = rng.randint(1, len(nodes))
    communities = [set() for _ in range(k)]
    for i, v in enumerate(nodes):
        communities[i % k].add(v)
    rest = communities[1:]
    rng.shuffle(rest)
    return [c for c in [communities[0], *rest] if c]


def test_modularity_matches_direct_formula_oracle():
    rng = random.Random(17)
    for g in random_connected_graphs(60, rng_seed=17):
        communities = _random_partition(rng, g.nodes)
        got = modularity(g, communities)
        want = reference_modularity(g, communities)
        assert got == pytest.approx(want, abs=1e-12)
        assert -0.5 - 1e-12 <= got <= 1.0 + 1e-12


# -- girvan_newman -----------------------------------------------------------------


def test_triangle_dendrogram(triangle):
    d = girvan_newman(triangle)
    assert d.levels[0].as_sets() == {frozenset("abc")}
    assert d.levels[-1].as_sets() == {frozenset("a"), frozenset("b"), frozenset("c")}


def test_disjoint_triangles_start_as_two_communities(two_triangles):
    d = girvan_newman(two_triangles)
    assert d.levels[0].as_sets() == {frozenset("abc"), frozenset("def")}


def test_barbell_first_split_removes_bridge(barbell):
    d = girvan_newman(barbell)
    assert d.levels[1].as_sets() == {frozenset("abc"), frozenset("def")}


def test_dendrogram_levels_refine():
    for g in random_connected_graphs(25, rng_seed=3):
        d = girvan_newman(g)
        for coarse, fine in zip(d.levels, d.levels[1:]):
            assert len(fine) > len(coarse)
            for community in fine.communities:
                assert any(community <= parent for parent in coarse.communities)
        assert d.levels[-1].as_sets() == {frozenset([v]) for v in g.nodes}


def test_gn_matches_reference_dendrogram_sample():
    for g in random_connected_graphs(30, rng_seed=29):
        got = [level.as_sets() for level in girvan_newman(g).levels]
        want = reference_girvan_newman(g)
        assert got == want


def test_gn_on_edgeless_graph():
    g = WeightedGraph(nodes=["a", "b"])
    d = girvan_newman(g)
    assert len(d.levels) == 1
    assert d.levels[0].as_sets() == {frozenset("a"), frozenset("b")}


# -- select_partition ---------------------------------------------------------------


def test_select_two_triangles(two_triangles):
    best = select_partition(girvan_newman(two_triangles))
    assert best.as_sets() == {frozenset("abc"), frozenset("def")}


def test_select_single_edge_prefers_whole_graph():
    g = WeightedGraph({("a", "b"): 1})
    best = select_partition(girvan_newman(g))
    assert best.as_sets() == {frozenset("ab")}
    assert best.modularity == pytest.approx(0.0)


def test_select_barbell(barbell):
    best = select_partition(girvan_newman(barbell))
    assert best.as_sets() == {frozenset("abc"), frozenset("def")}


def test_selection_maximizes_modularity():
    for g in random_connected_graphs(30, rng_seed=31):
        d = girvan_newman(g)
        best = select_partition(d)
        assert all(best.modularity >= level.modularity for level in d.levels)


# -- diagnostics ----------------------------------------------------------------------


def test_component_partition_has_full_within_share(two_triangles):
    p = make_partition(two_triangles, two_triangles.connected_components())
    row = diagnostics(two_triangles, p)
    assert row.within_share == 1.0
    assert row.n_components == 2
    assert row.lcc_size == 3
    assert (row.n_nodes, row.n_edges) == (6, 6)


def test_within_share_counts_cross_edges(barbell):
    p = make_partition(barbell, [{"a", "b", "c"}, {"d", "e", "f"}])
    row = diagnostics(barbell, p)
    assert row.within_share == pytest.approx(6 / 7)
    assert row.n_components == 1
    assert row.lcc_size == 6


def test_edgeless_graph_within_share_is_one():
    g = WeightedGraph(nodes=["a", "b"])
    p = make_partition(g, [{"a"}, {"b"}])
    assert diagnostics(g, p).within_share == 1.0


def test_diagnostics_validates_partition(triangle):
    bad = make_partition(triangle, triangle.connected_components())
    g2 = WeightedGraph({("a", "b"): 1})
    with pytest.raises(ValueError):
        diagnostics(g2, bad)


# -- ordering determinism ---------------------------------------------------------------


def test_partition_canonical_order():
    g = WeightedGraph({("x", "y"): 1, ("a", "b"): 1, ("b", "c"): 1})
    p = make_partition(g, g.connected_components())
    assert [sorted(c) for c in p.communities] == [["a", "b", "c"], ["x", "y"]]


def test_reference_betweenness_exact_values(path3):
    assert reference_betweenness(path3) == {
        ("a", "b"): Fraction(2),
        ("b", "c"): Fraction(2),
    }
