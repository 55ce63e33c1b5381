"""Cross-epoch community matching by Jaccard overlap.

For each consecutive epoch pair, candidate (from, to) community pairs are
scored by Jaccard overlap of their node sets and accepted greedily in
descending score order (ties: larger union first, then lexicographically
smallest sorted member tuples), one-to-one, at or above the threshold.
Matched chains share a stable identifier; everything else gets a fresh one.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .communities import Partition

DEFAULT_MATCH_THRESHOLD = 0.2


@dataclass(frozen=True)
class MatchPair:
    community_from: frozenset[str]
    community_to: frozenset[str]
    jaccard: float


@dataclass(frozen=True)
class MatchResult:
    """Accepted pairs and leftovers for one consecutive epoch pair."""

    epoch_from: str
    epoch_to: str
    pairs: tuple[MatchPair, ...]
    unmatched_from: tuple[frozenset[str], ...]
    unmatched_to: tuple[frozenset[str], ...]


@dataclass(frozen=True)
class CommunityId:
    """A stable identifier and the member sets it labels per epoch."""

    stable_id: str
    epoch_members: dict[str, frozenset[str]]


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """|a & b| / |a | b|, with 0.0 when both sets are empty."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


def _ordered(parts) -> list[tuple[str, Partition]]:
    if isinstance(parts, Mapping):
        return list(parts.items())
    return list(parts)


def match_communities(
    parts: Mapping[str, Partition] | Sequence[tuple[str, Partition]],
    threshold: float = DEFAULT_MATCH_THRESHOLD,
) -> tuple[list[CommunityId], list[MatchResult]]:
    """Chain communities across consecutive epochs into stable identities.

    `parts` maps epoch labels (in chronological order) to partitions.
    Returns the stable-id table and one MatchResult per epoch pair.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    epochs = _ordered(parts)

    ids_by_chain: list[CommunityId] = []
    counter = 0
    id_of: dict[tuple[str, frozenset[str]], str] = {}
    chain_of: dict[str, CommunityId] = {}

    def assign(epoch: str, community: frozenset[str], stable: str | None) -> None:
        nonlocal counter
        if stable is None:
            counter += 1
            stable = f"C{counter:02d}"
            chain = CommunityId(stable, {epoch: community})
            chain_of[stable] = chain
            ids_by_chain.append(chain)
        else:
            chain_of[stable].epoch_members[epoch] = community
        id_of[(epoch, community)] = stable

    results: list[MatchResult] = []
    if epochs:
        first_label, first_part = epochs[0]
        for community in first_part.communities:
            assign(first_label, community, None)

    for (label_a, part_a), (label_b, part_b) in zip(epochs, epochs[1:]):
        candidates = []
        for ca in part_a.communities:
            for cb in part_b.communities:
                score = jaccard(ca, cb)
                if score >= threshold:
                    candidates.append(
                        (-score, -len(ca | cb), tuple(sorted(ca)), tuple(sorted(cb)), ca, cb, score)
                    )
        candidates.sort(key=lambda item: item[:4])
        taken_a: set[frozenset[str]] = set()
        taken_b: set[frozenset[str]] = set()
        pairs = []
        for *_, ca, cb, score in candidates:
            if ca in taken_a or cb in taken_b:
                continue
            taken_a.add(ca)
            taken_b.add(cb)
            pairs.append(MatchPair(ca, cb, score))
            assign(label_b, cb, id_of[(label_a, ca)])
        for cb in part_b.communities:
            if cb not in taken_b:
                assign(label_b, cb, None)
        results.append(
            MatchResult(
                epoch_from=label_a,
                epoch_to=label_b,
                pairs=tuple(pairs),
                unmatched_from=tuple(c for c in part_a.communities if c not in taken_a),
                unmatched_to=tuple(c for c in part_b.communities if c not in taken_b),
            )
        )

    return ids_by_chain, results


def stable_id_index(ids: Iterable[CommunityId]) -> dict[tuple[str, frozenset[str]], str]:
    """(epoch label, member set) -> stable id lookup."""
    index = {}
    for cid in ids:
        for epoch, members in cid.epoch_members.items():
            index[(epoch, members)] = cid.stable_id
    return index
