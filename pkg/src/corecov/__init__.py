"""corecov: dual-layer (core/coverage) hashtag co-occurrence analytics.

Build epoch-segmented weighted co-occurrence graphs from post corpora,
extract a conservative core backbone and an inclusive coverage layer,
detect and match communities over time, project long-tail hashtags into
core coalitions, and score communities against a seed lexicon.
"""

from .communities import (
    Dendrogram,
    DiagnosticsRow,
    Partition,
    diagnostics,
    edge_betweenness,
    girvan_newman,
    make_partition,
    modularity,
    select_partition,
)
from .errors import ConfigError, CorecovError, DataError, PipelineError
from .export import export_graph, write_edge_csv
from .graph import (
    GraphStats,
    WeightedGraph,
    aggregate_epoch,
    build_epoch_graph,
    build_yearly_graph,
    graph_stats,
    post_bigrams,
)
from .ingest import (
    EpochConfig,
    EpochSpan,
    ParsedCorpus,
    PostRecord,
    extract_hashtags,
    filter_language,
    normalize_hashtag,
    parse_corpus,
    segment_epochs,
    write_corpus,
)
from .layers import LayerPair, build_layers, k_core, threshold_edges
from .matching import (
    CommunityId,
    MatchPair,
    MatchResult,
    jaccard,
    match_communities,
    stable_id_index,
)
from .pipeline import PipelineConfig, RunSummary, build_summary, load_config, run_pipeline
from .projection import (
    Assignment,
    AssignmentTable,
    EnrichmentReport,
    RecoveryReport,
    SeedLexicon,
    compare_recovery,
    enrichment_scores,
    load_seed_lexicon,
    mention_counts,
    project_coverage,
    recovery_rate,
)
from .synth import (
    GroundTruth,
    PlantedEvalReport,
    SynthSpec,
    generate_synthetic_corpus,
    planted_recovery_eval,
    random_connected_graphs,
    reference_betweenness,
    reference_girvan_newman,
    reference_kcore,
    reference_modularity,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AssignmentTable",
    "CommunityId",
    "ConfigError",
    "CorecovError",
    "DataError",
    "Dendrogram",
    "DiagnosticsRow",
    "EnrichmentReport",
    "EpochConfig",
    "EpochSpan",
    "GraphStats",
    "GroundTruth",
    "LayerPair",
    "MatchPair",
    "MatchResult",
    "ParsedCorpus",
    "Partition",
    "PipelineConfig",
    "PipelineError",
    "PlantedEvalReport",
    "PostRecord",
    "RecoveryReport",
    "RunSummary",
    "SeedLexicon",
    "SynthSpec",
    "WeightedGraph",
    "aggregate_epoch",
    "build_epoch_graph",
    "build_layers",
    "build_summary",
    "build_yearly_graph",
    "compare_recovery",
    "diagnostics",
    "edge_betweenness",
    "enrichment_scores",
    "export_graph",
    "extract_hashtags",
    "filter_language",
    "generate_synthetic_corpus",
    "girvan_newman",
    "graph_stats",
    "jaccard",
    "k_core",
    "load_config",
    "load_seed_lexicon",
    "make_partition",
    "match_communities",
    "mention_counts",
    "modularity",
    "normalize_hashtag",
    "parse_corpus",
    "planted_recovery_eval",
    "post_bigrams",
    "project_coverage",
    "random_connected_graphs",
    "recovery_rate",
    "reference_betweenness",
    "reference_girvan_newman",
    "reference_kcore",
    "reference_modularity",
    "run_pipeline",
    "segment_epochs",
    "select_partition",
    "stable_id_index",
    "threshold_edges",
    "write_corpus",
    "write_edge_csv",
]
