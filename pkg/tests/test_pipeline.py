import json
import xml.etree.ElementTree as ET

import pytest

from corecov import ConfigError, PipelineError
from corecov import pipeline as pl

FIXTURE_EPOCHS = "E1:2010-2010,E2:2011-2011,E3:2012-2012"


def fixture_config(data_dir, out_dir, **extra) -> pl.PipelineConfig:
    values = {
        "input_path": data_dir / "fixture_corpus.jsonl",
        "out_dir": out_dir,
        "epochs": FIXTURE_EPOCHS,
        "seed_lexicon_path": data_dir / "fixture_seeds.json",
    }
    values.update(extra)
    return pl.load_config(None, values)


# -- configuration ---------------------------------------------------------------


def test_load_config_from_toml_with_overrides(tmp_path, data_dir):
    toml = tmp_path / "run.toml"
    toml.write_text(
        f"""
input = "{data_dir / 'fixture_corpus.jsonl'}"
epochs = "{FIXTURE_EPOCHS}"
out = "{tmp_path / 'out'}"
core_min_weight = 3
k = 2
""",
        encoding="utf-8",
    )
    config = pl.load_config(toml, {"core_min_weight": 2})
    assert config.core_min_weight == 2  # CLI override wins
    assert config.k == 2
    assert config.epochs.labels == ("E1", "E2", "E3")


def test_load_config_rejects_unknown_keys(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('mystery = 1\n', encoding="utf-8")
    with pytest.raises(ConfigError, match="mystery"):
        pl.load_config(bad, {})


def test_load_config_requires_core_values():
    with pytest.raises(ConfigError, match="missing required"):
        pl.load_config(None, {"input_path": "x"})


def test_config_validation_errors(tmp_path, data_dir):
    with pytest.raises(ConfigError, match="does not exist"):
        fixture_config(data_dir, tmp_path, input_path=tmp_path / "nope.jsonl")
    with pytest.raises(ConfigError, match="match_threshold"):
        fixture_config(data_dir, tmp_path, match_threshold=2.0)
    with pytest.raises(ConfigError, match="seed set"):
        fixture_config(data_dir, tmp_path, seed_set="all")


# -- full run ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def fixture_run(tmp_path_factory, data_dir):
    out = tmp_path_factory.mktemp("run")
    config = fixture_config(data_dir, out)
    summary = pl.run_pipeline(config)
    return config, summary


def test_run_writes_expected_artifacts(fixture_run):
    config, summary = fixture_run
    names = set(summary.artifacts)
    expected = {
        "counts.csv", "diagnostics.csv", "matches.csv", "assignments.csv",
        "assignment_counts.csv", "support_summary.csv", "support_histogram.csv",
        "enrichment.csv", "recovery.csv", "report.md", "corpus_errors.csv",
        "manifest.json",
    }
    assert expected <= names
    for label in ("E1", "E2", "E3"):
        assert f"epoch_{label}.edges.csv" in names
        assert f"core_{label}.graphml" in names
        assert f"coverage_{label}.graphml" in names


def test_run_matches_goldens(fixture_run, data_dir):
    config, _ = fixture_run
    for name in ("counts.csv", "diagnostics.csv"):
        got = (config.out_dir / name).read_bytes()
        want = (data_dir / "golden" / name).read_bytes()
        assert got == want, f"{name} deviates from golden file"


def test_assignment_counts_for_planted_corpus(fixture_run):
    config, summary = fixture_run
    lines = (config.out_dir / "assignment_counts.csv").read_text().splitlines()
    assert lines[0] == "epoch,core,projected,unassigned"
    assert lines[1:] == ["E1,18,20,0", "E2,18,20,0", "E3,18,20,0"]


def test_recovery_table_shows_full_long_tail_gain(fixture_run):
    config, _ = fixture_run
    lines = (config.out_dir / "recovery.csv").read_text().splitlines()
    assert lines[0] == "epoch,seed_set,n_seeds,core_recovery,augmented_recovery,delta"
    for line in lines[1:]:
        assert line.endswith(",union,20,0,1,1")


def test_stable_ids_chain_across_epochs(fixture_run):
    _, summary = fixture_run
    assert [cid.stable_id for cid in summary.community_ids] == ["C01", "C02", "C03"]
    for cid in summary.community_ids:
        assert set(cid.epoch_members) == {"E1", "E2", "E3"}


def test_within_share_column_in_unit_interval(fixture_run):
    config, _ = fixture_run
    rows = (config.out_dir / "diagnostics.csv").read_text().splitlines()[1:]
    for row in rows:
        w_in = float(row.split(",")[-1])
        assert 0.0 <= w_in <= 1.0


def test_manifest_lists_every_artifact_with_hash(fixture_run):
    config, summary = fixture_run
    manifest = json.loads((config.out_dir / "manifest.json").read_text())
    assert manifest["input_sha256"] == summary.input_sha256
    listed = set(manifest["artifacts"])
    assert listed == set(summary.artifacts) - {"manifest.json"}
    assert all(len(h) == 64 for h in manifest["artifacts"].values())


def test_graphml_annotations_mark_enriched_community(tmp_path, data_dir):
    # pin all fringe seeds to one community: that community's nodes carry the
    # maximal log_enrichment annotation in the coverage export
    from corecov import SynthSpec, generate_synthetic_corpus, write_corpus

    records, truth = generate_synthetic_corpus(SynthSpec(fringe_anchor_community=0))
    corpus = tmp_path / "corpus.jsonl"
    with open(corpus, "w", encoding="utf-8") as f:
        write_corpus(records, f)
    seeds = tmp_path / "seeds.json"
    seeds.write_text(
        json.dumps({"skeptical": [], "conspiracy": sorted(truth.fringe_attachment)}),
        encoding="utf-8",
    )
    config = pl.load_config(
        None,
        {
            "input_path": corpus,
            "out_dir": tmp_path / "out",
            "epochs": "E0:2020-2020",
            "seed_lexicon_path": seeds,
        },
    )
    pl.run_pipeline(config)
    ns = "{http://graphml.graphdrawing.org/xmlns}"
    root = ET.parse(config.out_dir / "coverage_E0.graphml").getroot()
    key_id = {k.get("attr.name"): k.get("id") for k in root.findall(f"{ns}key")}
    planted = truth.communities[0] | set(truth.fringe_attachment)
    values = {}
    for node in root.find(f"{ns}graph").findall(f"{ns}node"):
        data = {d.get("key"): d.text for d in node.findall(f"{ns}data")}
        if key_id.get("log_enrichment") in data:
            values[node.get("id")] = float(data[key_id["log_enrichment"]])
    top = max(values.values())
    for node_id, value in values.items():
        if node_id in planted:
            assert value == pytest.approx(top)
        else:
            assert value < top


def test_weight_one_corpus_has_empty_core_but_full_coverage(tmp_path):
    rows = [
        {"id": str(i), "created_at": "2020-03-01T00:00:00+00:00", "text": "",
         "hashtags": list(tags)}
        for i, tags in enumerate([("a", "b"), ("b", "c"), ("c", "d"), ("e", "f")])
    ]
    corpus = tmp_path / "thin.jsonl"
    corpus.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    config = pl.load_config(
        None,
        {"input_path": corpus, "out_dir": tmp_path / "out", "epochs": "E:2020-2020"},
    )
    summary = pl.run_pipeline(config)
    epoch = summary.epochs[0]
    assert epoch.layers.core.n_nodes == 0
    assert epoch.layers.coverage.n_nodes == 6
    assert epoch.assignment.status_counts() == {"core": 0, "projected": 0, "unassigned": 6}
    lines = (config.out_dir / "diagnostics.csv").read_text().splitlines()
    assert lines[1] == "E,core,0,0,0,0,1"


def test_empty_corpus_yields_zero_row_tables(tmp_path):
    corpus = tmp_path / "empty.jsonl"
    corpus.write_text("", encoding="utf-8")
    config = pl.load_config(
        None,
        {"input_path": corpus, "out_dir": tmp_path / "out", "epochs": "E0:2020-2020"},
    )
    summary = pl.run_pipeline(config)
    assert summary.n_kept == 0
    counts = (config.out_dir / "counts.csv").read_text().splitlines()
    assert counts == ["epoch,posts,hashtags,bigrams", "E0,0,0,0"]
    diagnostics = (config.out_dir / "diagnostics.csv").read_text().splitlines()
    assert diagnostics[0] == "epoch,layer,N,E,C,LCC,W_in"
    assert diagnostics[1:] == ["E0,core,0,0,0,0,1", "E0,coverage,0,0,0,0,1"]
    assert (config.out_dir / "enrichment.csv").read_text().splitlines() == [
        "epoch,community_id,seed_mentions,total_mentions,seed_share,baseline_share,enrichment,log_enrichment"
    ]


def test_stage_failures_are_tagged_and_partials_removed(tmp_path, data_dir, monkeypatch):
    corpus = tmp_path / "bad.jsonl"
    corpus.write_text('{"id": "x", "created_at": "never", "text": ""}\n', encoding="utf-8")
    config = pl.load_config(
        None,
        {"input_path": corpus, "out_dir": tmp_path / "out1",
         "epochs": "E0:2020-2020", "strict": True},
    )
    with pytest.raises(PipelineError) as err:
        pl.run_pipeline(config)
    assert err.value.stage == "ingest"

    config2 = fixture_config(data_dir, tmp_path / "out2")
    monkeypatch.setattr(pl, "emit_report", lambda summary, sink: 1 / 0)
    with pytest.raises(PipelineError) as err:
        pl.run_pipeline(config2)
    assert err.value.stage == "export"
    leftovers = list((tmp_path / "out2").glob("*"))
    assert leftovers == []


def test_run_is_deterministic_across_out_dirs(tmp_path, data_dir):
    c1 = fixture_config(data_dir, tmp_path / "a")
    c2 = fixture_config(data_dir, tmp_path / "b")
    pl.run_pipeline(c1)
    pl.run_pipeline(c2)
    m1 = (tmp_path / "a" / "manifest.json").read_bytes()
    m2 = (tmp_path / "b" / "manifest.json").read_bytes()
    assert m1 == m2


def test_build_prefix_stops_where_asked(data_dir, tmp_path):
    config = fixture_config(data_dir, tmp_path)
    summary = pl.build_prefix(config, "layers")
    assert summary.epochs[0].layers is not None
    assert summary.epochs[0].core_partition is None
    assert summary.matches == []
