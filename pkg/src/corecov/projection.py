"""Long-tail projection into core communities, seed enrichment, recovery.

A coverage-layer hashtag outside the core is assigned to the core community
receiving the largest summed weight of its coverage edges into that
community's core nodes (its projection support). Ties go to the community
holding the single heaviest edge, then to the smaller community id.
Hashtags with no edge into any core node stay unassigned.

Enrichment compares, per community, the share of seed-hashtag mentions
against the community's baseline share of all hashtag mentions; values
above 1 mean seed material is over-represented there. Recovery compares how
many seed hashtags the bare core captures versus core plus projections.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import IO

from .communities import Partition
from .errors import ConfigError, DataError
from .ingest import PostRecord, normalize_hashtag
from .layers import LayerPair

CORE = "core"
PROJECTED = "projected"
UNASSIGNED = "unassigned"

SEED_SETS = ("skeptical", "conspiracy", "union")
MENTION_MODES = ("posts", "occurrences")

_LOG_FLOOR = 1e-6


@dataclass(frozen=True)
class Assignment:
    """Status of one hashtag: core member, projected (with support), or
    unassigned."""

    status: str
    community: str | None = None
    support: int | None = None


@dataclass
class AssignmentTable:
    """Hashtag -> Assignment for every coverage node (plus isolated tags)."""

    assignments: dict[str, Assignment] = field(default_factory=dict)

    def __getitem__(self, tag: str) -> Assignment:
        return self.assignments[tag]

    def __contains__(self, tag: str) -> bool:
        return tag in self.assignments

    def __len__(self) -> int:
        return len(self.assignments)

    def items(self):
        return self.assignments.items()

    def sorted_items(self) -> list[tuple[str, Assignment]]:
        return sorted(self.assignments.items())

    def status_counts(self) -> dict[str, int]:
        counts = {CORE: 0, PROJECTED: 0, UNASSIGNED: 0}
        for assignment in self.assignments.values():
            counts[assignment.status] += 1
        return counts

    def community_members(self, label: str) -> set[str]:
        """Core plus projected hashtags assigned to `label`."""
        return {
            tag
            for tag, a in self.assignments.items()
            if a.community == label and a.status in (CORE, PROJECTED)
        }

    def augmented_nodes(self) -> set[str]:
        """Core members plus projected hashtags."""
        return {
            tag
            for tag, a in self.assignments.items()
            if a.status in (CORE, PROJECTED)
        }

    def core_nodes(self) -> set[str]:
        return {tag for tag, a in self.assignments.items() if a.status == CORE}

    def support_values(self) -> list[int]:
        return sorted(
            a.support for a in self.assignments.values() if a.status == PROJECTED
        )


@dataclass(frozen=True)
class SeedLexicon:
    """Curated hashtags flagging skeptical and conspiracy narrative frames."""

    skeptical: frozenset[str] = frozenset()
    conspiracy: frozenset[str] = frozenset()

    @property
    def overlap(self) -> frozenset[str]:
        return self.skeptical & self.conspiracy

    def select(self, seed_set: str) -> frozenset[str]:
        if seed_set == "skeptical":
            return self.skeptical
        if seed_set == "conspiracy":
            return self.conspiracy
        if seed_set == "union":
            return self.skeptical | self.conspiracy
        raise ConfigError(f"unknown seed set {seed_set!r}, expected one of {SEED_SETS}")


@dataclass(frozen=True)
class EnrichmentRow:
    community_id: str
    seed_mentions: int
    total_mentions: int
    seed_share: float
    baseline_share: float
    enrichment: float | None
    log_enrichment: float | None


@dataclass(frozen=True)
class EnrichmentReport:
    seed_set: str
    rows: tuple[EnrichmentRow, ...]
    unassigned_seed_mentions: int
    unassigned_total_mentions: int


@dataclass(frozen=True)
class RecoveryReport:
    seed_set: str
    n_seeds: int
    core_recovery: float
    augmented_recovery: float

    @property
    def delta(self) -> float:
        return self.augmented_recovery - self.core_recovery


def project_coverage(
    core_partition: Partition,
    coverage,
    core_nodes: Iterable[str] | None = None,
    labels: Sequence[str] | None = None,
    extra_unassigned: Iterable[str] = (),
) -> AssignmentTable:
    """Assign every coverage hashtag a core/projected/unassigned status.

    `labels` names the partition's communities positionally (defaults to
    "0", "1", ...); the pipeline passes stable ids here. `extra_unassigned`
    admits epoch hashtags that never reached the coverage layer (degree-0
    tags); they are recorded as unassigned.
    """
    communities = core_partition.communities
    if labels is None:
        labels = [str(i) for i in range(len(communities))]
    if len(labels) != len(communities):
        raise ValueError("labels must match the number of communities")
    member_of: dict[str, int] = {}
    for i, community in enumerate(communities):
        for v in community:
            member_of[v] = i
    core_set = set(member_of)
    if core_nodes is not None and set(core_nodes) != core_set:
        raise ValueError("core_nodes does not match the partition's node set")
    missing = core_set - coverage.nodes
    if missing:
        raise ValueError(f"core nodes missing from coverage: {sorted(missing)[:5]}")

    table: dict[str, Assignment] = {}
    for v in sorted(core_set):
        table[v] = Assignment(CORE, labels[member_of[v]])
    for tag in sorted(coverage.nodes - core_set):
        support: dict[int, int] = {}
        heaviest: dict[int, int] = {}
        for neighbor, w in coverage.neighbors(tag).items():
            i = member_of.get(neighbor)
            if i is None:
                continue
            support[i] = support.get(i, 0) + w
            heaviest[i] = max(heaviest.get(i, 0), w)
        if support:
            best = min(support, key=lambda i: (-support[i], -heaviest[i], labels[i]))
            table[tag] = Assignment(PROJECTED, labels[best], support[best])
        else:
            table[tag] = Assignment(UNASSIGNED)
    for tag in sorted(set(extra_unassigned)):
        if tag not in table:
            table[tag] = Assignment(UNASSIGNED)
    return AssignmentTable(table)


def mention_counts(records: Iterable[PostRecord], mode: str = "posts") -> dict[str, int]:
    """Hashtag -> mention count over one epoch's records.

    "posts" counts posts containing the tag; "occurrences" counts raw
    occurrences. Since parsing deduplicates tags within a post the two modes
    coincide on parsed corpora; they differ only for hand-built records that
    carry duplicates.
    """
    if mode not in MENTION_MODES:
        raise ConfigError(f"unknown mention mode {mode!r}, expected one of {MENTION_MODES}")
    counts: Counter[str] = Counter()
    for record in records:
        tags = set(record.hashtags) if mode == "posts" else record.hashtags
        counts.update(tags)
    return dict(counts)


def enrichment_scores(
    assign: AssignmentTable,
    mentions: Mapping[str, int],
    seeds: SeedLexicon,
    seed_set: str = "union",
) -> EnrichmentReport:
    """Per-community seed enrichment: seed-mention share over baseline share.

    Community mention mass aggregates core and projected hashtags;
    unassigned hashtags are excluded from both shares (their mentions are
    still reported for transparency). Enrichment is None where the baseline
    share is 0.
    """
    missing = [tag for tag, _ in assign.items() if mentions.get(tag, 0) < 1]
    if missing:
        raise ValueError(f"hashtags without mentions: {sorted(missing)[:5]}")
    seed_tokens = seeds.select(seed_set)

    totals: dict[str, int] = {}
    seed_totals: dict[str, int] = {}
    unassigned_total = 0
    unassigned_seed = 0
    for tag, assignment in assign.items():
        n = mentions[tag]
        is_seed = tag in seed_tokens
        if assignment.status == UNASSIGNED:
            unassigned_total += n
            if is_seed:
                unassigned_seed += n
            continue
        label = assignment.community
        totals[label] = totals.get(label, 0) + n
        if is_seed:
            seed_totals[label] = seed_totals.get(label, 0) + n

    grand_total = sum(totals.values())
    grand_seed = sum(seed_totals.values())
    rows = []
    for label in sorted(totals):
        seed_n = seed_totals.get(label, 0)
        total_n = totals[label]
        seed_share = seed_n / grand_seed if grand_seed else 0.0
        baseline_share = total_n / grand_total if grand_total else 0.0
        if baseline_share > 0:
            enrichment = seed_share / baseline_share
            log_enrichment = math.log(max(enrichment, _LOG_FLOOR))
        else:
            enrichment = None
            log_enrichment = None
        rows.append(
            EnrichmentRow(
                community_id=label,
                seed_mentions=seed_n,
                total_mentions=total_n,
                seed_share=seed_share,
                baseline_share=baseline_share,
                enrichment=enrichment,
                log_enrichment=log_enrichment,
            )
        )
    return EnrichmentReport(
        seed_set=seed_set,
        rows=tuple(rows),
        unassigned_seed_mentions=unassigned_seed,
        unassigned_total_mentions=unassigned_total,
    )


def recovery_rate(seed_hashtags: Iterable[str], layer_nodes: Iterable[str]) -> float:
    """Fraction of seed hashtags present in the layer; 0.0 for empty seeds."""
    seeds = set(seed_hashtags)
    if not seeds:
        return 0.0
    return len(seeds & set(layer_nodes)) / len(seeds)


def compare_recovery(
    seeds: SeedLexicon,
    layers: LayerPair,
    assign: AssignmentTable,
    seed_set: str = "union",
) -> RecoveryReport:
    """Seed recovery of the bare core versus core plus projected hashtags."""
    tokens = seeds.select(seed_set)
    return RecoveryReport(
        seed_set=seed_set,
        n_seeds=len(tokens),
        core_recovery=recovery_rate(tokens, layers.core.nodes),
        augmented_recovery=recovery_rate(tokens, assign.augmented_nodes()),
    )


def load_seed_lexicon(stream: IO, format: str = "json") -> SeedLexicon:
    """Load a seed lexicon file: JSON object with 'skeptical' and
    'conspiracy' hashtag lists.

    Tokens are normalized and deduplicated; an empty stream yields an empty
    lexicon; any other label is an error.
    """
    if format != "json":
        raise ConfigError(f"unknown seed lexicon format {format!r}")
    raw = stream.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    if not raw.strip():
        return SeedLexicon()
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DataError(f"seed lexicon is not valid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise DataError("seed lexicon must be a JSON object")
    unknown = set(obj) - {"skeptical", "conspiracy"}
    if unknown:
        raise DataError(f"unknown seed lexicon label(s): {sorted(unknown)}")
    sets = {}
    for label in ("skeptical", "conspiracy"):
        tokens = set()
        for raw_tag in obj.get(label, ()):
            if not isinstance(raw_tag, str):
                raise DataError(f"non-string entry under {label!r}: {raw_tag!r}")
            try:
                tokens.add(normalize_hashtag(raw_tag))
            except ValueError as exc:
                raise DataError(str(exc)) from None
        sets[label] = frozenset(tokens)
    return SeedLexicon(**sets)
