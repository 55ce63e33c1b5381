import io
from fractions import Fraction

import pytest

from corecov import (
    SynthSpec,
    WeightedGraph,
    build_epoch_graph,
    build_layers,
    generate_synthetic_corpus,
    planted_recovery_eval,
    random_connected_graphs,
    reference_betweenness,
    reference_girvan_newman,
    reference_kcore,
    reference_modularity,
    write_corpus,
)


# -- generator ---------------------------------------------------------------


def test_generator_is_deterministic():
    out = []
    for _ in range(2):
        records, truth = generate_synthetic_corpus(SynthSpec())
        buf = io.StringIO()
        write_corpus(records, buf)
        out.append((buf.getvalue(), truth))
    assert out[0][0] == out[1][0]
    assert out[0][1] == out[1][1]


def test_different_seeds_move_fringe_anchors():
    _, t1 = generate_synthetic_corpus(SynthSpec(rng_seed=1))
    _, t2 = generate_synthetic_corpus(SynthSpec(rng_seed=2))
    assert t1.fringe_attachment != t2.fringe_attachment


def test_zero_fringe_collapses_coverage_onto_backbone():
    records, truth = generate_synthetic_corpus(SynthSpec(n_fringe_seeds=0))
    layers = build_layers(build_epoch_graph(records))
    assert layers.coverage == layers.core
    assert set(layers.core.connected_components()) == set(truth.communities)


def test_planted_graph_structure():
    spec = SynthSpec()
    records, truth = generate_synthetic_corpus(spec)
    g = build_epoch_graph(records)
    # complete backbone cliques at the repeat weight, fringe at weight 1
    for community in truth.communities:
        members = sorted(community)
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                assert g.weight(a, b) == spec.backbone_repeat
    for tag, (anchor, _) in truth.fringe_attachment.items():
        assert g.weight(tag, anchor) == 1
        assert g.degree(tag) == 1


def test_ground_truth_json_shape():
    _, truth = generate_synthetic_corpus(SynthSpec(n_communities=2, n_fringe_seeds=2))
    obj = truth.to_json_obj()
    assert len(obj["communities"]) == 2
    assert set(obj["fringe_attachment"]) == set(truth.fringe_attachment)


def test_synth_spec_validation():
    with pytest.raises(ValueError):
        SynthSpec(n_communities=0)
    with pytest.raises(ValueError):
        SynthSpec(backbone_tags_per_community=1)
    with pytest.raises(ValueError):
        SynthSpec(epoch_labels=("a", "a"))
    with pytest.raises(ValueError):
        SynthSpec(fringe_anchor_community=9)


# -- reference oracles ----------------------------------------------------------


def test_reference_betweenness_hand_cases(path3, triangle_pendant):
    assert reference_betweenness(path3) == {
        ("a", "b"): Fraction(2),
        ("b", "c"): Fraction(2),
    }
    assert reference_kcore(triangle_pendant, 2).nodes == {"a", "b", "c"}


def test_reference_modularity_single_community(triangle):
    assert reference_modularity(triangle, [{"a", "b", "c"}]) == pytest.approx(0.0)


def test_oracle_size_guard():
    big = WeightedGraph({(f"n{i}", f"n{i+1}"): 1 for i in range(14)})
    with pytest.raises(ValueError, match="size guard"):
        reference_betweenness(big)
    with pytest.raises(ValueError, match="size guard"):
        reference_girvan_newman(big)


def test_random_connected_graphs_contract():
    graphs = random_connected_graphs(25, rng_seed=1)
    assert len(graphs) == 25
    for g in graphs:
        assert 3 <= g.n_nodes <= 8
        assert len(g.connected_components()) == 1
    again = random_connected_graphs(25, rng_seed=1)
    assert all(a == b for a, b in zip(graphs, again))


# -- planted end-to-end eval -------------------------------------------------------


def test_planted_eval_default_spec():
    report = planted_recovery_eval(SynthSpec())
    assert report.core_recovery == 0.0
    assert report.augmented_recovery == 1.0
    assert report.attribution_accuracy == 1.0
    assert report.delta == 1.0
    assert report.epochs[0].n_fringe == 20


def test_planted_eval_heavy_fringe_still_blocked_by_kcore():
    # Doubling the attachment weight lets fringe edges past the weight
    # threshold, but a single-anchor fringe tag has degree 1 and the 2-core
    # still prunes it: recovery numbers do not move.
    report = planted_recovery_eval(SynthSpec(fringe_attach_weight=2))
    assert report.core_recovery == 0.0
    assert report.augmented_recovery == 1.0
    assert report.delta == 1.0


def test_planted_eval_no_fringe():
    report = planted_recovery_eval(SynthSpec(n_fringe_seeds=0))
    assert report.core_recovery == 0.0
    assert report.augmented_recovery == 0.0
    assert report.delta == 0.0
    assert report.attribution_accuracy == 1.0


def test_planted_eval_multi_epoch():
    report = planted_recovery_eval(SynthSpec(epoch_labels=("A", "B")))
    assert len(report.epochs) == 2
    for row in report.epochs:
        assert row.core_recovery == 0.0
        assert row.augmented_recovery == 1.0
