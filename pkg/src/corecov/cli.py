"""Command-line interface.

Subcommands mirror the pipeline stages (ingest, stats, layers, communities,
match, project, enrich, report, synth) plus `run` for the full end-to-end
pass with a hash manifest. Options can come from a TOML config file
(--config) with CLI flags taking precedence.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal
error or invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import export as ex
from . import pipeline as pl
from .errors import ConfigError, DataError, PipelineError
from .ingest import filter_language, parse_corpus, write_corpus
from .synth import SynthSpec, generate_synthetic_corpus

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4


def _add_config_flags(p: argparse.ArgumentParser, need_seeds: bool = True) -> None:
    p.add_argument("--config", type=Path, default=None, help="TOML config file")
    p.add_argument("--input", type=Path, default=None, help="corpus file")
    p.add_argument("--format", choices=pl.CORPUS_FORMATS, default=None, help="corpus format")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--epochs", default=None, help="epoch spec, e.g. 2010-2014,2015-2019")
    p.add_argument("--core-min-weight", type=int, default=None, help="core edge weight threshold")
    p.add_argument("--k", type=int, default=None, help="core k-core parameter")
    p.add_argument("--match-threshold", type=float, default=None, help="Jaccard match threshold")
    if need_seeds:
        p.add_argument("--seeds", type=Path, default=None, help="seed lexicon JSON file")
        p.add_argument(
            "--seed-set", choices=("skeptical", "conspiracy", "union"), default=None
        )
        p.add_argument("--mention-mode", choices=("posts", "occurrences"), default=None)
    p.add_argument(
        "--weighted-betweenness",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="use 1/weight distances for betweenness",
    )
    p.add_argument(
        "--graph-format", choices=ex.GRAPH_FORMATS, default=None, help="graph export format"
    )
    p.add_argument(
        "--lang", default=None, help="keep only records with this language tag"
    )
    p.add_argument(
        "--strict", action=argparse.BooleanOptionalAction, default=None,
        help="fail on the first malformed corpus row",
    )


def _config(args) -> pl.PipelineConfig:
    overrides = {
        "input_path": args.input,
        "input_format": args.format,
        "out_dir": args.out,
        "epochs": args.epochs,
        "core_min_weight": args.core_min_weight,
        "k": args.k,
        "match_threshold": args.match_threshold,
        "seed_lexicon_path": getattr(args, "seeds", None),
        "seed_set": getattr(args, "seed_set", None),
        "mention_mode": getattr(args, "mention_mode", None),
        "weighted_betweenness": args.weighted_betweenness,
        "graph_format": args.graph_format,
        "lang": args.lang,
        "strict": args.strict,
    }
    return pl.load_config(args.config, overrides)


def _sink(config: pl.PipelineConfig) -> pl.ArtifactSink:
    return pl.ArtifactSink(config.out_dir)


def _done(sink: pl.ArtifactSink) -> int:
    for name in sorted(sink.hashes):
        print(f"wrote {sink.out_dir / name}")
    return EXIT_OK


# -- handlers ------------------------------------------------------------------


def cmd_ingest(args) -> int:
    if args.input is None or args.out is None:
        raise ConfigError("ingest needs --input and --out")
    with open(args.input, "r", encoding="utf-8", newline="") as f:
        corpus = parse_corpus(f, format=args.format or "jsonl", strict=bool(args.strict))
    records = corpus.records
    if args.lang:
        records = filter_language(records, lambda r: r.lang_tag == args.lang)
    sink = pl.ArtifactSink(args.out)
    sink.write("corpus_normalized.jsonl", lambda f: write_corpus(records, f))
    sink.write(
        "corpus_errors.csv",
        lambda f: ex.write_csv(
            f, ex.ROW_ERRORS_HEADER, ((e.line_number, e.reason) for e in corpus.errors)
        ),
    )
    print(f"parsed {len(corpus.records)} records ({len(corpus.errors)} malformed rows)")
    if args.lang:
        print(f"kept {len(records)} records with lang={args.lang!r}")
    return _done(sink)


def cmd_stats(args) -> int:
    config = _config(args)
    summary = pl.build_prefix(config, "epochs")
    rows = pl.counts_rows(summary.epochs)
    sink = _sink(config)
    sink.write("counts.csv", lambda f: ex.write_csv(f, ex.COUNTS_HEADER, rows))
    for row in rows:
        print(",".join(ex.fmt_value(c) for c in row))
    return _done(sink)


def cmd_layers(args) -> int:
    config = _config(args)
    summary = pl.build_prefix(config, "layers")
    sink = _sink(config)
    extension = pl._GRAPH_EXT[config.graph_format]
    for epoch in summary.epochs:
        label = pl._safe_label(epoch.label)
        sink.write(f"epoch_{label}.edges.csv", lambda f, g=epoch.graph: ex.write_edge_csv(g, f))
        for layer_name, g in (("core", epoch.layers.core), ("coverage", epoch.layers.coverage)):
            sink.write(
                f"{layer_name}_{label}.{extension}",
                lambda f, g=g: ex.export_graph(g, f, format=config.graph_format),
            )
            print(f"{epoch.label} {layer_name}: {g.n_nodes} nodes, {g.n_edges} edges")
    return _done(sink)


def cmd_communities(args) -> int:
    config = _config(args)
    summary = pl.build_prefix(config, "communities")
    sink = _sink(config)
    sink.write(
        "diagnostics.csv",
        lambda f: ex.write_csv(f, ex.DIAGNOSTICS_HEADER, pl.diagnostics_rows(summary.epochs)),
    )
    sink.write(
        "communities.csv",
        lambda f: ex.write_csv(
            f, ("epoch", "layer", "community", "hashtag"), pl.community_rows(summary.epochs)
        ),
    )
    for epoch in summary.epochs:
        print(
            f"{epoch.label}: core {len(epoch.core_partition)} communities"
            f" (Q={epoch.core_partition.modularity:.4f}),"
            f" coverage {len(epoch.coverage_partition)} communities"
            f" (Q={epoch.coverage_partition.modularity:.4f})"
        )
    return _done(sink)


def cmd_match(args) -> int:
    config = _config(args)
    summary = pl.build_prefix(config, "matching")
    sink = _sink(config)
    rows = pl.match_rows(summary.epochs, summary.community_ids, summary.matches)
    sink.write("matches.csv", lambda f: ex.write_csv(f, ex.MATCHES_HEADER, rows))
    print(f"{len(rows)} matched community pairs across {len(summary.matches)} epoch transitions")
    return _done(sink)


def cmd_project(args) -> int:
    config = _config(args)
    summary = pl.build_prefix(config, "projection")
    sink = _sink(config)
    sink.write(
        "assignments.csv",
        lambda f: ex.write_csv(f, ex.ASSIGNMENTS_HEADER, pl.assignment_rows(summary.epochs)),
    )
    sink.write(
        "assignment_counts.csv",
        lambda f: ex.write_csv(
            f, ex.ASSIGNMENT_COUNTS_HEADER, pl.assignment_count_rows(summary.epochs)
        ),
    )
    support_summary, support_hist = pl.support_rows(summary.epochs)
    sink.write(
        "support_summary.csv",
        lambda f: ex.write_csv(f, ex.SUPPORT_SUMMARY_HEADER, support_summary),
    )
    sink.write(
        "support_histogram.csv",
        lambda f: ex.write_csv(f, ex.SUPPORT_HISTOGRAM_HEADER, support_hist),
    )
    for row in pl.assignment_count_rows(summary.epochs):
        print(f"{row[0]}: core={row[1]} projected={row[2]} unassigned={row[3]}")
    return _done(sink)


def cmd_enrich(args) -> int:
    config = _config(args)
    if config.seed_lexicon_path is None:
        raise ConfigError("enrich needs a seed lexicon (--seeds)")
    summary = pl.build_prefix(config, "enrichment")
    sink = _sink(config)
    sink.write(
        "enrichment.csv",
        lambda f: ex.write_csv(f, ex.ENRICHMENT_HEADER, pl.enrichment_rows(summary.epochs)),
    )
    sink.write(
        "recovery.csv",
        lambda f: ex.write_csv(f, ex.RECOVERY_HEADER, pl.recovery_rows(summary.epochs)),
    )
    for row in pl.recovery_rows(summary.epochs):
        print(
            f"{row[0]}: recovery core={ex.fmt_value(row[3])}"
            f" augmented={ex.fmt_value(row[4])} (+{ex.fmt_value(row[5])})"
        )
    return _done(sink)


def cmd_report(args) -> int:
    config = _config(args)
    summary = pl.build_summary(config)
    sink = _sink(config)
    pl.emit_report(summary, sink)
    print((Path(config.out_dir) / "report.md").read_text(encoding="utf-8"))
    return EXIT_OK


def cmd_run(args) -> int:
    config = _config(args)
    summary = pl.run_pipeline(config)
    print(
        f"run complete: {len(summary.epochs)} epochs,"
        f" {len(summary.artifacts)} artifacts in {config.out_dir}"
    )
    print(f"manifest: {Path(config.out_dir) / 'manifest.json'}")
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.out is None:
        raise ConfigError("synth needs --out")
    try:
        spec = SynthSpec(
            n_communities=args.communities,
            backbone_tags_per_community=args.tags_per_community,
            backbone_repeat=args.repeat,
            n_fringe_seeds=args.fringe,
            fringe_attach_weight=args.attach_weight,
            rng_seed=args.rng_seed,
            epoch_labels=tuple(args.epoch_labels.split(",")) if args.epoch_labels else ("E0",),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    records, truth = generate_synthetic_corpus(spec)
    sink = pl.ArtifactSink(args.out)
    sink.write("synth_corpus.jsonl", lambda f: write_corpus(records, f))
    sink.write(
        "ground_truth.json",
        lambda f: (json.dump(truth.to_json_obj(), f, ensure_ascii=False, sort_keys=True, indent=2), f.write("\n"))[0],
    )
    print(f"generated {len(records)} posts over {len(spec.epoch_labels)} epoch(s)")
    return _done(sink)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corecov",
        description="Dual-layer hashtag co-occurrence network analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and normalize a corpus")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--format", choices=pl.CORPUS_FORMATS, default="jsonl")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--lang", default=None)
    p.add_argument("--strict", action=argparse.BooleanOptionalAction, default=False)
    p.set_defaults(handler=cmd_ingest)

    for name, handler, help_text in (
        ("stats", cmd_stats, "per-epoch post/hashtag/bigram counts"),
        ("layers", cmd_layers, "build and export core and coverage layers"),
        ("communities", cmd_communities, "detect communities and layer diagnostics"),
        ("match", cmd_match, "match communities across epochs"),
        ("project", cmd_project, "project coverage hashtags into core communities"),
        ("enrich", cmd_enrich, "seed enrichment and recovery comparison"),
        ("report", cmd_report, "full run, report tables only"),
        ("run", cmd_run, "full pipeline with all exports and manifest"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_config_flags(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("synth", help="generate a planted synthetic corpus")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--communities", type=int, default=3)
    p.add_argument("--tags-per-community", type=int, default=6)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--fringe", type=int, default=20)
    p.add_argument("--attach-weight", type=int, default=1)
    p.add_argument("--rng-seed", type=int, default=7)
    p.add_argument("--epoch-labels", default=None, help="comma-separated labels")
    p.set_defaults(handler=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except PipelineError as exc:
        print(f"pipeline error: {exc}", file=sys.stderr)
        if isinstance(exc.cause, ConfigError):
            return EXIT_CONFIG
        if isinstance(exc.cause, DataError):
            return EXIT_DATA
        return EXIT_INTERNAL
    except Exception as exc:  # invariant violations and bugs
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
