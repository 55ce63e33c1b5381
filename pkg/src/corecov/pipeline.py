"""End-to-end orchestration: config, staged runs, reports, manifests.

A run executes ingest -> epoch graphs -> layers -> communities -> matching
-> projection -> enrichment -> exports, writing every artifact into one
output directory plus a manifest of content hashes. Outputs are fully
deterministic for identical input bytes and configuration; the manifest
deliberately excludes the output directory path so reruns elsewhere hash
identically. A stage failure removes partial outputs and raises
PipelineError tagged with the stage name.
"""

from __future__ import annotations

import hashlib
import json
import statistics
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import export as ex
from .communities import (
    DiagnosticsRow,
    Partition,
    diagnostics,
    girvan_newman,
    select_partition,
)
from .errors import ConfigError, PipelineError
from .graph import GraphStats, WeightedGraph, build_epoch_graph, graph_stats
from .ingest import (
    EpochConfig,
    ParsedCorpus,
    PostRecord,
    UNASSIGNED_LABEL,
    filter_language,
    parse_corpus,
    segment_epochs,
)
from .layers import LayerPair, build_layers
from .matching import CommunityId, MatchResult, match_communities, stable_id_index
from .projection import (
    AssignmentTable,
    EnrichmentReport,
    RecoveryReport,
    SeedLexicon,
    compare_recovery,
    enrichment_scores,
    load_seed_lexicon,
    mention_counts,
    project_coverage,
)

CORPUS_FORMATS = ("jsonl", "csv")


@dataclass
class PipelineConfig:
    input_path: Path
    out_dir: Path
    epochs: EpochConfig
    input_format: str = "jsonl"
    core_min_weight: int = 2
    k: int = 2
    match_threshold: float = 0.2
    seed_lexicon_path: Path | None = None
    seed_set: str = "union"
    mention_mode: str = "posts"
    weighted_betweenness: bool = False
    graph_format: str = "graphml"
    lang: str | None = None
    strict: bool = False

    def validate(self) -> None:
        if self.input_format not in CORPUS_FORMATS:
            raise ConfigError(f"unknown corpus format {self.input_format!r}")
        if not Path(self.input_path).exists():
            raise ConfigError(f"input path does not exist: {self.input_path}")
        if self.seed_lexicon_path is not None and not Path(self.seed_lexicon_path).exists():
            raise ConfigError(f"seed lexicon path does not exist: {self.seed_lexicon_path}")
        if self.core_min_weight < 1 or self.k < 1:
            raise ConfigError("core_min_weight and k must be >= 1")
        if not 0.0 <= self.match_threshold <= 1.0:
            raise ConfigError("match_threshold must be in [0, 1]")
        if self.seed_set not in ("skeptical", "conspiracy", "union"):
            raise ConfigError(f"unknown seed set {self.seed_set!r}")
        if self.mention_mode not in ("posts", "occurrences"):
            raise ConfigError(f"unknown mention mode {self.mention_mode!r}")
        if self.graph_format not in ex.GRAPH_FORMATS:
            raise ConfigError(f"unknown graph format {self.graph_format!r}")

    def echo(self) -> dict:
        """Manifest-friendly view: scalars only, no output path."""
        return {
            "input_path": str(self.input_path),
            "input_format": self.input_format,
            "epochs": [
                {"label": s.label, "start": s.start_year, "end": s.end_year}
                for s in self.epochs.epochs
            ],
            "core_min_weight": self.core_min_weight,
            "k": self.k,
            "match_threshold": self.match_threshold,
            "seed_set": self.seed_set,
            "mention_mode": self.mention_mode,
            "weighted_betweenness": self.weighted_betweenness,
            "graph_format": self.graph_format,
            "lang": self.lang,
            "strict": self.strict,
        }


_TOML_KEYS = {
    "input": "input_path",
    "format": "input_format",
    "out": "out_dir",
    "epochs": "epochs",
    "core_min_weight": "core_min_weight",
    "k": "k",
    "match_threshold": "match_threshold",
    "seeds": "seed_lexicon_path",
    "seed_set": "seed_set",
    "mention_mode": "mention_mode",
    "weighted_betweenness": "weighted_betweenness",
    "graph_format": "graph_format",
    "lang": "lang",
    "strict": "strict",
}
_PATH_FIELDS = ("input_path", "out_dir", "seed_lexicon_path")


def load_config(toml_path: Path | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Build a config from an optional TOML file plus override values.

    Overrides use PipelineConfig field names and win over the file. The
    'epochs' value may be a compact string, list, or table list (see
    EpochConfig.from_obj).
    """
    values: dict = {}
    if toml_path is not None:
        try:
            with open(toml_path, "rb") as f:
                data = tomllib.load(f)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {toml_path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"bad TOML in {toml_path}: {exc}") from None
        unknown = set(data) - set(_TOML_KEYS)
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        values.update({_TOML_KEYS[k]: v for k, v in data.items()})
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    missing = {"input_path", "out_dir", "epochs"} - set(values)
    if missing:
        raise ConfigError(f"missing required config value(s): {sorted(missing)}")
    if not isinstance(values["epochs"], EpochConfig):
        values["epochs"] = EpochConfig.from_obj(values["epochs"])
    for name in _PATH_FIELDS:
        if values.get(name) is not None:
            values[name] = Path(values[name])
    known = {f.name for f in fields(PipelineConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config value(s): {sorted(unknown)}")
    config = PipelineConfig(**values)
    config.validate()
    return config


# -- staged computation --------------------------------------------------------


@dataclass
class EpochResult:
    label: str
    records: list[PostRecord]
    graph: WeightedGraph
    stats: GraphStats
    layers: LayerPair | None = None
    core_partition: Partition | None = None
    coverage_partition: Partition | None = None
    core_diag: DiagnosticsRow | None = None
    coverage_diag: DiagnosticsRow | None = None
    core_labels: list[str] = field(default_factory=list)
    assignment: AssignmentTable | None = None
    mentions: dict[str, int] = field(default_factory=dict)
    enrichment: EnrichmentReport | None = None
    recovery: RecoveryReport | None = None


@dataclass
class RunSummary:
    config: PipelineConfig
    input_sha256: str
    corpus: ParsedCorpus
    n_kept: int
    n_unassigned_records: int
    epochs: list[EpochResult]
    community_ids: list[CommunityId] = field(default_factory=list)
    matches: list[MatchResult] = field(default_factory=list)
    seeds: SeedLexicon | None = None
    seed_lexicon_sha256: str | None = None
    artifacts: dict[str, str] = field(default_factory=dict)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def stage_ingest(config: PipelineConfig) -> tuple[ParsedCorpus, str]:
    raw = Path(config.input_path).read_bytes()
    with open(config.input_path, "r", encoding="utf-8", newline="") as f:
        corpus = parse_corpus(f, format=config.input_format, strict=config.strict)
    return corpus, _sha256(raw)


def stage_epochs(config: PipelineConfig, records: list[PostRecord]) -> tuple[list[EpochResult], int]:
    if config.lang is not None:
        records = filter_language(records, lambda r: r.lang_tag == config.lang)
    buckets = segment_epochs(records, config.epochs)
    results = []
    for label in config.epochs.labels:
        epoch_records = buckets[label]
        graph = build_epoch_graph(epoch_records)
        results.append(
            EpochResult(
                label=label,
                records=epoch_records,
                graph=graph,
                stats=graph_stats(epoch_records, graph),
            )
        )
    return results, len(buckets[UNASSIGNED_LABEL])


def stage_layers(config: PipelineConfig, epochs: list[EpochResult]) -> None:
    for epoch in epochs:
        epoch.layers = build_layers(
            epoch.graph,
            core_min_weight=config.core_min_weight,
            k=config.k,
            epoch_label=epoch.label,
        )


def stage_communities(config: PipelineConfig, epochs: list[EpochResult]) -> None:
    """Detect communities per layer; core partitions drive matching and
    projection, coverage partitions exist for the diagnostics table."""
    for epoch in epochs:
        core, coverage = epoch.layers.core, epoch.layers.coverage
        epoch.core_partition = select_partition(
            girvan_newman(core, weighted=config.weighted_betweenness)
        )
        epoch.coverage_partition = select_partition(
            girvan_newman(coverage, weighted=config.weighted_betweenness)
        )
        epoch.core_diag = diagnostics(core, epoch.core_partition)
        epoch.coverage_diag = diagnostics(coverage, epoch.coverage_partition)


def stage_matching(config: PipelineConfig, epochs: list[EpochResult]) -> tuple[list[CommunityId], list[MatchResult]]:
    parts = [(e.label, e.core_partition) for e in epochs]
    ids, matches = match_communities(parts, threshold=config.match_threshold)
    index = stable_id_index(ids)
    for epoch in epochs:
        epoch.core_labels = [
            index[(epoch.label, community)] for community in epoch.core_partition.communities
        ]
    return ids, matches


def stage_projection(config: PipelineConfig, epochs: list[EpochResult]) -> None:
    for epoch in epochs:
        coverage = epoch.layers.coverage
        epoch.assignment = project_coverage(
            epoch.core_partition,
            coverage,
            labels=epoch.core_labels,
            extra_unassigned=epoch.graph.nodes - coverage.nodes,
        )


def stage_enrichment(config: PipelineConfig, epochs: list[EpochResult]) -> tuple[SeedLexicon | None, str | None]:
    seeds = None
    seeds_sha = None
    if config.seed_lexicon_path is not None:
        raw = Path(config.seed_lexicon_path).read_bytes()
        seeds_sha = _sha256(raw)
        with open(config.seed_lexicon_path, "r", encoding="utf-8") as f:
            seeds = load_seed_lexicon(f)
    for epoch in epochs:
        epoch.mentions = mention_counts(epoch.records, mode=config.mention_mode)
        if seeds is not None:
            epoch.enrichment = enrichment_scores(
                epoch.assignment, epoch.mentions, seeds, seed_set=config.seed_set
            )
            epoch.recovery = compare_recovery(
                seeds, epoch.layers, epoch.assignment, seed_set=config.seed_set
            )
    return seeds, seeds_sha


STAGES = ("ingest", "epochs", "layers", "communities", "matching", "projection", "enrichment")


def build_prefix(config: PipelineConfig, upto: str = "enrichment") -> RunSummary:
    """Run computation stages through `upto` (no file output).

    Fields belonging to later stages are left unset (None/empty).
    """
    if upto not in STAGES:
        raise ValueError(f"unknown stage {upto!r}")
    last = STAGES.index(upto)
    stage = "ingest"
    summary = None
    try:
        corpus, input_sha = stage_ingest(config)
        summary = RunSummary(
            config=config,
            input_sha256=input_sha,
            corpus=corpus,
            n_kept=0,
            n_unassigned_records=0,
            epochs=[],
        )
        if last >= 1:
            stage = "epochs"
            summary.epochs, summary.n_unassigned_records = stage_epochs(config, corpus.records)
            summary.n_kept = sum(len(e.records) for e in summary.epochs)
        if last >= 2:
            stage = "layers"
            stage_layers(config, summary.epochs)
        if last >= 3:
            stage = "communities"
            stage_communities(config, summary.epochs)
        if last >= 4:
            stage = "matching"
            summary.community_ids, summary.matches = stage_matching(config, summary.epochs)
        if last >= 5:
            stage = "projection"
            stage_projection(config, summary.epochs)
        if last >= 6:
            stage = "enrichment"
            summary.seeds, summary.seed_lexicon_sha256 = stage_enrichment(config, summary.epochs)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(stage, exc) from exc
    return summary


def build_summary(config: PipelineConfig) -> RunSummary:
    """Run all computation stages (no file output)."""
    return build_prefix(config, "enrichment")


# -- artifact output -------------------------------------------------------------


class ArtifactSink:
    """Writes named artifacts under one directory, hashing each one.

    On failure the owner calls `discard()` to remove everything written so
    far, leaving no partial run behind.
    """

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.hashes: dict[str, str] = {}

    def write(self, name: str, writer) -> None:
        path = self.out_dir / name
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer(f)
        self.hashes[name] = _sha256(path.read_bytes())

    def discard(self) -> None:
        for name in list(self.hashes):
            try:
                (self.out_dir / name).unlink()
            except OSError:
                pass
        self.hashes.clear()


def _safe_label(label: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "_-." else "_" for ch in label)


_GRAPH_EXT = {"graphml": "graphml", "dot": "dot", "json": "json", "csv": "edges.csv"}


def _node_annotations(epoch: EpochResult, nodes) -> dict[str, dict]:
    enrich_of: dict[str, tuple[float | None, float | None]] = {}
    if epoch.enrichment is not None:
        for row in epoch.enrichment.rows:
            enrich_of[row.community_id] = (row.enrichment, row.log_enrichment)
    annotations = {}
    for node in nodes:
        if epoch.assignment is not None and node in epoch.assignment:
            a = epoch.assignment[node]
            attrs: dict[str, object] = {"status": a.status}
            if a.community is not None:
                attrs["community_id"] = a.community
            if a.support is not None:
                attrs["support"] = a.support
            if a.community in enrich_of:
                enrichment, log_enrichment = enrich_of[a.community]
                if enrichment is not None:
                    attrs["enrichment"] = enrichment
                    attrs["log_enrichment"] = log_enrichment
            annotations[node] = attrs
    return annotations


def _md_table(header, rows) -> str:
    lines = ["| " + " | ".join(str(h) for h in header) + " |"]
    lines.append("|" + "|".join(" --- " for _ in header) + "|")
    for row in rows:
        lines.append("| " + " | ".join(ex.fmt_value(c) for c in row) + " |")
    return "\n".join(lines)


def counts_rows(epochs: list[EpochResult]) -> list[tuple]:
    return [
        (e.label, e.stats.n_posts, e.stats.n_unique_hashtags, e.stats.n_bigrams)
        for e in epochs
    ]


def diagnostics_rows(epochs: list[EpochResult]) -> list[tuple]:
    rows = []
    for e in epochs:
        for layer_name, row in (("core", e.core_diag), ("coverage", e.coverage_diag)):
            rows.append(
                (e.label, layer_name, row.n_nodes, row.n_edges, row.n_components,
                 row.lcc_size, row.within_share)
            )
    return rows


def community_rows(epochs: list[EpochResult]) -> list[tuple]:
    """Membership listing: (epoch, layer, community index, hashtag)."""
    rows = []
    for e in epochs:
        for layer_name, partition in (
            ("core", e.core_partition),
            ("coverage", e.coverage_partition),
        ):
            for i, community in enumerate(partition.communities):
                for tag in sorted(community):
                    rows.append((e.label, layer_name, i, tag))
    return rows


def match_rows(
    epochs: list[EpochResult],
    community_ids: list[CommunityId],
    matches: list[MatchResult],
) -> list[tuple]:
    index = {
        (e.label, community): i
        for e in epochs
        for i, community in enumerate(e.core_partition.communities)
    }
    stable = stable_id_index(community_ids)
    rows = []
    for result in matches:
        for pair in result.pairs:
            rows.append(
                (
                    result.epoch_from,
                    index[(result.epoch_from, pair.community_from)],
                    result.epoch_to,
                    index[(result.epoch_to, pair.community_to)],
                    pair.jaccard,
                    stable[(result.epoch_to, pair.community_to)],
                )
            )
    return rows


def assignment_rows(epochs: list[EpochResult]) -> list[tuple]:
    return [
        (e.label, tag, a.status, a.community, a.support)
        for e in epochs
        for tag, a in e.assignment.sorted_items()
    ]


def assignment_count_rows(epochs: list[EpochResult]) -> list[tuple]:
    rows = []
    for e in epochs:
        c = e.assignment.status_counts()
        rows.append((e.label, c["core"], c["projected"], c["unassigned"]))
    return rows


def support_rows(epochs: list[EpochResult]) -> tuple[list[tuple], list[tuple]]:
    summary_rows = []
    hist_rows = []
    for e in epochs:
        values = e.assignment.support_values()
        if values:
            summary_rows.append(
                (e.label, len(values), values[0], statistics.median(values), values[-1])
            )
        else:
            summary_rows.append((e.label, 0, None, None, None))
        for bucket, count in ex.support_histogram(values):
            hist_rows.append((e.label, bucket, count))
    return summary_rows, hist_rows


def enrichment_rows(epochs: list[EpochResult]) -> list[tuple]:
    rows = []
    for e in epochs:
        if e.enrichment is None:
            continue
        for row in e.enrichment.rows:
            rows.append(
                (e.label, row.community_id, row.seed_mentions, row.total_mentions,
                 row.seed_share, row.baseline_share, row.enrichment, row.log_enrichment)
            )
        rows.append(
            (e.label, "unassigned", e.enrichment.unassigned_seed_mentions,
             e.enrichment.unassigned_total_mentions, None, None, None, None)
        )
    return rows


def recovery_rows(epochs: list[EpochResult]) -> list[tuple]:
    return [
        (e.label, e.recovery.seed_set, e.recovery.n_seeds, e.recovery.core_recovery,
         e.recovery.augmented_recovery, e.recovery.delta)
        for e in epochs
        if e.recovery is not None
    ]


def _table_rows(summary: RunSummary) -> dict[str, list]:
    """All report table rows, shared by the CSV bundle and report.md."""
    support_summary, support_hist = support_rows(summary.epochs)
    return {
        "counts": counts_rows(summary.epochs),
        "diagnostics": diagnostics_rows(summary.epochs),
        "matches": match_rows(summary.epochs, summary.community_ids, summary.matches),
        "assignments": assignment_rows(summary.epochs),
        "assignment_counts": assignment_count_rows(summary.epochs),
        "support_summary": support_summary,
        "support_histogram": support_hist,
        "enrichment": enrichment_rows(summary.epochs),
        "recovery": recovery_rows(summary.epochs),
    }


def emit_report(summary: RunSummary, sink: ArtifactSink) -> None:
    """Write the CSV bundle and the markdown report."""
    tables = _table_rows(summary)
    sink.write("counts.csv", lambda f: ex.write_csv(f, ex.COUNTS_HEADER, tables["counts"]))
    sink.write(
        "diagnostics.csv",
        lambda f: ex.write_csv(f, ex.DIAGNOSTICS_HEADER, tables["diagnostics"]),
    )
    sink.write("matches.csv", lambda f: ex.write_csv(f, ex.MATCHES_HEADER, tables["matches"]))
    sink.write(
        "assignments.csv",
        lambda f: ex.write_csv(f, ex.ASSIGNMENTS_HEADER, tables["assignments"]),
    )
    sink.write(
        "assignment_counts.csv",
        lambda f: ex.write_csv(f, ex.ASSIGNMENT_COUNTS_HEADER, tables["assignment_counts"]),
    )
    sink.write(
        "support_summary.csv",
        lambda f: ex.write_csv(f, ex.SUPPORT_SUMMARY_HEADER, tables["support_summary"]),
    )
    sink.write(
        "support_histogram.csv",
        lambda f: ex.write_csv(f, ex.SUPPORT_HISTOGRAM_HEADER, tables["support_histogram"]),
    )
    sink.write(
        "enrichment.csv", lambda f: ex.write_csv(f, ex.ENRICHMENT_HEADER, tables["enrichment"])
    )
    sink.write("recovery.csv", lambda f: ex.write_csv(f, ex.RECOVERY_HEADER, tables["recovery"]))

    parts = ["# Run report", ""]
    parts.append(
        f"Corpus: {len(summary.corpus.records)} parsed posts "
        f"({len(summary.corpus.errors)} malformed rows), {summary.n_kept} in epochs, "
        f"{summary.n_unassigned_records} outside all epochs."
    )
    parts += ["", "## Posts, hashtags and bigrams per epoch", ""]
    parts.append(_md_table(ex.COUNTS_HEADER, tables["counts"]))
    parts += ["", "## Layer diagnostics", ""]
    parts.append(_md_table(ex.DIAGNOSTICS_HEADER, tables["diagnostics"]))
    parts += ["", "## Cross-epoch community matches", ""]
    parts.append(_md_table(ex.MATCHES_HEADER, tables["matches"]))
    parts += ["", "## Assignment categories", ""]
    parts.append(_md_table(ex.ASSIGNMENT_COUNTS_HEADER, tables["assignment_counts"]))
    parts += ["", "## Projection support", ""]
    parts.append(_md_table(ex.SUPPORT_SUMMARY_HEADER, tables["support_summary"]))
    parts.append("")
    parts.append(_md_table(ex.SUPPORT_HISTOGRAM_HEADER, tables["support_histogram"]))
    if summary.seeds is not None:
        parts += ["", "## Seed enrichment", ""]
        parts.append(_md_table(ex.ENRICHMENT_HEADER, tables["enrichment"]))
        parts += ["", "## Seed recovery (core vs. augmented)", ""]
        parts.append(_md_table(ex.RECOVERY_HEADER, tables["recovery"]))
    else:
        parts += ["", "No seed lexicon configured; enrichment and recovery skipped."]
    parts.append("")
    sink.write("report.md", lambda f: f.write("\n".join(parts)))


def export_artifacts(summary: RunSummary, sink: ArtifactSink) -> None:
    """Graph exports, row-error report, report bundle, and the manifest."""
    config = summary.config
    sink.write(
        "corpus_errors.csv",
        lambda f: ex.write_csv(
            f, ex.ROW_ERRORS_HEADER, ((e.line_number, e.reason) for e in summary.corpus.errors)
        ),
    )
    extension = _GRAPH_EXT[config.graph_format]
    for epoch in summary.epochs:
        label = _safe_label(epoch.label)
        sink.write(f"epoch_{label}.edges.csv", lambda f, g=epoch.graph: ex.write_edge_csv(g, f))
        for layer_name, layer_graph in (
            ("core", epoch.layers.core),
            ("coverage", epoch.layers.coverage),
        ):
            annotations = _node_annotations(epoch, layer_graph.sorted_nodes())
            sink.write(
                f"{layer_name}_{label}.{extension}",
                lambda f, g=layer_graph, a=annotations: ex.export_graph(
                    g, f, format=config.graph_format, annotations=a
                ),
            )
    emit_report(summary, sink)

    manifest = {
        "config": config.echo(),
        "input_sha256": summary.input_sha256,
        "seed_lexicon_sha256": summary.seed_lexicon_sha256,
        "artifacts": dict(sorted(sink.hashes.items())),
    }
    sink.write(
        "manifest.json",
        lambda f: (json.dump(manifest, f, ensure_ascii=False, sort_keys=True, indent=2), f.write("\n"))[0],
    )
    summary.artifacts = dict(sink.hashes)


def run_pipeline(config: PipelineConfig) -> RunSummary:
    """Execute every stage and write all artifacts under config.out_dir."""
    config.validate()
    summary = build_summary(config)
    sink = ArtifactSink(config.out_dir)
    try:
        export_artifacts(summary, sink)
    except Exception as exc:
        sink.discard()
        if isinstance(exc, PipelineError):
            raise
        raise PipelineError("export", exc) from exc
    return summary


def copy_with(config: PipelineConfig, **updates) -> PipelineConfig:
    return replace(config, **updates)
