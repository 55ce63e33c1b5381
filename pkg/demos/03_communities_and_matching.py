"""
Hierarchical communities and cross-epoch matching
=================================================

Girvan-Newman peels a graph apart along its highest-betweenness edges and
records a dendrogram of partitions; the modularity-maximal level is the
working partition. Partitions from consecutive epochs are then matched by
Jaccard overlap so that a coalition keeps one stable id over time.
"""

from corecov import (
    WeightedGraph,
    diagnostics,
    edge_betweenness,
    girvan_newman,
    match_communities,
    select_partition,
)

# Two triangles joined by a single bridge: the textbook case where the
# bridge carries every inter-triangle shortest path.
barbell = WeightedGraph(
    {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1,
     ("d", "e"): 1, ("e", "f"): 1, ("d", "f"): 1,
     ("c", "d"): 1}
)
bt = edge_betweenness(barbell)
print("edge betweenness:")
for pair, value in sorted(bt.items(), key=lambda item: -item[1]):
    print(f"  {pair[0]} -- {pair[1]}: {value:.2f}")

dendrogram = girvan_newman(barbell)
print("\ndendrogram levels (communities, modularity):")
for level in dendrogram.levels:
    print(f"  {[''.join(sorted(c)) for c in level.communities]}  Q={level.modularity:.4f}")

best = select_partition(dendrogram)
print("selected partition:", [''.join(sorted(c)) for c in best.communities])

row = diagnostics(barbell, best)
print(f"diagnostics: N={row.n_nodes} E={row.n_edges} C={row.n_components} "
      f"LCC={row.lcc_size} W-in={row.within_share:.2f}")

# Match communities across two epochs: the prevention-style cluster drifts
# by one member, the other disappears and a new one shows up.
epoch_a = select_partition(girvan_newman(WeightedGraph(
    {("screening", "prevention"): 2, ("prevention", "checkup"): 2, ("screening", "checkup"): 2,
     ("doubt", "distrust"): 2, ("distrust", "rumor"): 2, ("doubt", "rumor"): 2}
)))
epoch_b = select_partition(girvan_newman(WeightedGraph(
    {("screening", "prevention"): 2, ("prevention", "paptest"): 2, ("screening", "paptest"): 2,
     ("freedom", "choice"): 2, ("choice", "mandate"): 2, ("freedom", "mandate"): 2}
)))
ids, results = match_communities([("2015-2019", epoch_a), ("2020-2024", epoch_b)],
                                 threshold=0.2)
print("\nstable community ids:")
for cid in ids:
    members = {epoch: sorted(tags) for epoch, tags in cid.epoch_members.items()}
    print(f"  {cid.stable_id}: {members}")
for result in results:
    for pair in result.pairs:
        print(f"matched {sorted(pair.community_from)} -> {sorted(pair.community_to)} "
              f"(jaccard {pair.jaccard:.2f})")
