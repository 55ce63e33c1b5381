import json

from corecov.cli import main

FIXTURE_EPOCHS = "E1:2010-2010,E2:2011-2011,E3:2012-2012"


def run_cli(*argv) -> int:
    return main([str(a) for a in argv])


def test_synth_then_run_roundtrip(tmp_path, capsys):
    assert run_cli("synth", "--out", tmp_path / "synth", "--epoch-labels", "A,B") == 0
    corpus = tmp_path / "synth" / "synth_corpus.jsonl"
    assert corpus.exists()
    truth = json.loads((tmp_path / "synth" / "ground_truth.json").read_text())
    assert len(truth["communities"]) == 3

    code = run_cli(
        "run", "--input", corpus, "--out", tmp_path / "out",
        "--epochs", "A:2020-2020,B:2021-2021",
    )
    assert code == 0
    assert (tmp_path / "out" / "manifest.json").exists()
    out = capsys.readouterr().out
    assert "run complete" in out


def test_ingest_writes_normalized_corpus(tmp_path, data_dir, capsys):
    code = run_cli(
        "ingest", "--input", data_dir / "minicorpus.jsonl",
        "--out", tmp_path, "--lang", "it",
    )
    assert code == 0
    normalized = (tmp_path / "corpus_normalized.jsonl").read_text().splitlines()
    assert len(normalized) == 2  # p2 is lang=en
    assert (tmp_path / "corpus_errors.csv").read_text() == "line_number,reason\n"


def test_stats_prints_counts(tmp_path, data_dir, capsys):
    code = run_cli(
        "stats", "--input", data_dir / "fixture_corpus.jsonl",
        "--out", tmp_path, "--epochs", FIXTURE_EPOCHS,
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "E1,29,38,65" in out
    assert (tmp_path / "counts.csv").exists()


def test_layers_and_graph_format(tmp_path, data_dir):
    code = run_cli(
        "layers", "--input", data_dir / "fixture_corpus.jsonl",
        "--out", tmp_path, "--epochs", FIXTURE_EPOCHS, "--graph-format", "dot",
    )
    assert code == 0
    assert (tmp_path / "core_E1.dot").exists()
    assert (tmp_path / "coverage_E3.dot").exists()


def test_project_and_enrich_outputs(tmp_path, data_dir):
    common = [
        "--input", data_dir / "fixture_corpus.jsonl", "--epochs", FIXTURE_EPOCHS,
    ]
    assert run_cli("project", *common, "--out", tmp_path / "p") == 0
    counts = (tmp_path / "p" / "assignment_counts.csv").read_text().splitlines()
    assert counts[1] == "E1,18,20,0"

    assert (
        run_cli(
            "enrich", *common, "--out", tmp_path / "e",
            "--seeds", data_dir / "fixture_seeds.json", "--seed-set", "conspiracy",
        )
        == 0
    )
    recovery = (tmp_path / "e" / "recovery.csv").read_text().splitlines()
    assert recovery[1].startswith("E1,conspiracy,20,0,1,")


def test_match_writes_pairs(tmp_path, data_dir):
    assert (
        run_cli(
            "match", "--input", data_dir / "fixture_corpus.jsonl",
            "--out", tmp_path, "--epochs", FIXTURE_EPOCHS,
        )
        == 0
    )
    lines = (tmp_path / "matches.csv").read_text().splitlines()
    assert lines[0] == "epoch_from,community_from,epoch_to,community_to,jaccard,stable_id"
    assert len(lines) == 7  # 3 communities x 2 transitions


def test_report_prints_markdown(tmp_path, data_dir, capsys):
    code = run_cli(
        "report", "--input", data_dir / "fixture_corpus.jsonl",
        "--out", tmp_path, "--epochs", FIXTURE_EPOCHS,
        "--seeds", data_dir / "fixture_seeds.json",
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "# Run report" in out
    assert "## Layer diagnostics" in out


def test_config_error_exit_code(tmp_path, capsys):
    code = run_cli("run", "--input", tmp_path / "missing.jsonl",
                   "--out", tmp_path, "--epochs", "E:2020-2020")
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_data_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x", "created_at": "never", "text": ""}\n', encoding="utf-8")
    code = run_cli("run", "--input", bad, "--out", tmp_path / "o",
                   "--epochs", "E:2020-2020", "--strict")
    assert code == 3
    err = capsys.readouterr().err
    assert "pipeline error" in err and "ingest" in err


def test_enrich_without_seeds_is_config_error(tmp_path, data_dir, capsys):
    code = run_cli(
        "enrich", "--input", data_dir / "fixture_corpus.jsonl",
        "--out", tmp_path, "--epochs", FIXTURE_EPOCHS,
    )
    assert code == 2


def test_internal_error_exit_code(tmp_path, data_dir, monkeypatch, capsys):
    from corecov import cli

    monkeypatch.setattr(cli.pl, "run_pipeline", lambda config: 1 / 0)
    code = run_cli(
        "run", "--input", data_dir / "fixture_corpus.jsonl",
        "--out", tmp_path, "--epochs", FIXTURE_EPOCHS,
    )
    assert code == 4
    assert "internal error" in capsys.readouterr().err


def test_weighted_betweenness_flag_runs(tmp_path, data_dir):
    code = run_cli(
        "communities", "--input", data_dir / "fixture_corpus.jsonl",
        "--out", tmp_path, "--epochs", "E1:2010-2010",
        "--weighted-betweenness",
    )
    assert code == 0
    lines = (tmp_path / "diagnostics.csv").read_text().splitlines()
    assert lines[1].startswith("E1,core,18,45,3,6,")


def test_toml_config_drives_run(tmp_path, data_dir):
    toml = tmp_path / "run.toml"
    toml.write_text(
        f"""
input = "{data_dir / 'fixture_corpus.jsonl'}"
epochs = "{FIXTURE_EPOCHS}"
out = "{tmp_path / 'out'}"
seeds = "{data_dir / 'fixture_seeds.json'}"
seed_set = "union"
""",
        encoding="utf-8",
    )
    assert run_cli("run", "--config", toml) == 0
    assert (tmp_path / "out" / "enrichment.csv").exists()
