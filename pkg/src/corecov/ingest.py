"""Corpus ingestion: parsing, hashtag normalization, epoch segmentation.

Input formats
-------------
JSONL: one object per line with keys id, created_at (ISO-8601), text,
hashtags (array of strings), author_id, lang, likes, replies, reposts,
quotes. CSV: the same columns, hashtags as a '|'-separated cell.

Hashtags come from the explicit hashtags field when the row has one;
otherwise they are extracted from the text as '#' followed by a maximal run
of unicode letters, digits or underscores. Tokens are normalized (leading
'#' stripped, NFC, lowercased) and deduplicated per post, preserving first
occurrence order.

Malformed rows are collected into a line-numbered report and skipped, or
raised as DataError when strict=True.
"""

from __future__ import annotations

import csv
import io
import json
import re
import unicodedata
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import IO

from .errors import ConfigError, DataError

_HASHTAG_RE = re.compile(r"#(\w+)")

CORPUS_FIELDS = (
    "id",
    "created_at",
    "text",
    "hashtags",
    "author_id",
    "lang",
    "likes",
    "replies",
    "reposts",
    "quotes",
)
_COUNT_FIELDS = ("likes", "replies", "reposts", "quotes")

UNASSIGNED_LABEL = "unassigned"


@dataclass(frozen=True)
class PostRecord:
    """One social-media post, normalized.

    `timestamp` is always timezone-aware UTC; `hashtags` holds normalized,
    deduplicated tokens in first-occurrence order.
    """

    post_id: str
    timestamp: datetime
    text: str
    hashtags: tuple[str, ...]
    author_id: str = ""
    lang_tag: str = ""
    likes: int = 0
    replies: int = 0
    reposts: int = 0
    quotes: int = 0

    def year(self) -> int:
        return self.timestamp.astimezone(timezone.utc).year


@dataclass(frozen=True)
class RowError:
    line_number: int
    reason: str


@dataclass
class ParsedCorpus:
    records: list[PostRecord]
    errors: list[RowError]


@dataclass(frozen=True)
class EpochSpan:
    label: str
    start_year: int
    end_year: int

    def __post_init__(self):
        if self.start_year > self.end_year:
            raise ConfigError(
                f"epoch {self.label!r}: start_year {self.start_year} > end_year {self.end_year}"
            )
        if self.label == UNASSIGNED_LABEL:
            raise ConfigError(f"epoch label {UNASSIGNED_LABEL!r} is reserved")

    def contains(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year


@dataclass(frozen=True)
class EpochConfig:
    """Ordered, non-overlapping year ranges used to bucket posts."""

    epochs: tuple[EpochSpan, ...]

    def __post_init__(self):
        if not self.epochs:
            raise ConfigError("epoch config needs at least one epoch")
        seen = set()
        for span in self.epochs:
            if span.label in seen:
                raise ConfigError(f"duplicate epoch label {span.label!r}")
            seen.add(span.label)
        for prev, cur in zip(self.epochs, self.epochs[1:]):
            if cur.start_year <= prev.end_year:
                raise ConfigError(
                    f"epochs {prev.label!r} and {cur.label!r} overlap or are out of order"
                )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(span.label for span in self.epochs)

    @classmethod
    def parse(cls, text: str) -> EpochConfig:
        """Parse compact syntax like '2010-2014,2015-2019,2020-2024'.

        Each item is 'start-end' or 'label:start-end'; the span string is
        used as label when none is given.
        """
        spans = []
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            label, _, span = item.rpartition(":")
            m = re.fullmatch(r"(\d{1,4})-(\d{1,4})", span)
            if not m:
                raise ConfigError(f"bad epoch spec {item!r}, expected 'start-end'")
            spans.append(EpochSpan(label or span, int(m.group(1)), int(m.group(2))))
        return cls(tuple(spans))

    @classmethod
    def from_obj(cls, obj) -> EpochConfig:
        """Build from a config value: compact string, list of strings, or
        list of {label, start, end} tables."""
        if isinstance(obj, str):
            return cls.parse(obj)
        if isinstance(obj, (list, tuple)):
            spans = []
            for item in obj:
                if isinstance(item, str):
                    spans.extend(cls.parse(item).epochs)
                elif isinstance(item, Mapping):
                    try:
                        spans.append(
                            EpochSpan(str(item["label"]), int(item["start"]), int(item["end"]))
                        )
                    except KeyError as exc:
                        raise ConfigError(f"epoch table missing key {exc}") from None
                else:
                    raise ConfigError(f"bad epoch entry {item!r}")
            return cls(tuple(spans))
        raise ConfigError(f"bad epochs value {obj!r}")


def normalize_hashtag(raw: str) -> str:
    """Strip one leading '#', apply unicode NFC, lowercase.

    Raises ValueError when nothing is left after normalization.
    """
    token = raw[1:] if raw.startswith("#") else raw
    token = unicodedata.normalize("NFC", token).lower()
    if not token or any(ch.isspace() for ch in token):
        raise ValueError(f"hashtag {raw!r} is empty or contains whitespace after normalization")
    return token


def extract_hashtags(text: str) -> list[str]:
    """Hashtags found in free text, normalized and deduplicated in order."""
    return _dedup_normalized(_HASHTAG_RE.findall(text))


def _dedup_normalized(raw_tags: Iterable[str]) -> list[str]:
    out: dict[str, None] = {}
    for raw in raw_tags:
        try:
            out.setdefault(normalize_hashtag(raw), None)
        except ValueError:
            continue  # contentless token like '#', drop it
    return list(out)


def _parse_timestamp(value) -> datetime:
    if not isinstance(value, str) or not value.strip():
        raise ValueError(f"bad timestamp {value!r}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _row_to_record(row: Mapping, field_map: Mapping[str, str], from_csv: bool) -> PostRecord:
    def get(field: str):
        return row.get(field_map[field])

    post_id = get("id")
    if post_id is None or str(post_id).strip() == "":
        raise ValueError("missing id")
    try:
        timestamp = _parse_timestamp(get("created_at"))
    except ValueError:
        raise ValueError(f"unparseable timestamp {get('created_at')!r}") from None

    text = get("text")
    text = "" if text is None else str(text)

    raw_tags = get("hashtags")
    if from_csv and isinstance(raw_tags, str):
        raw_tags = [t for t in raw_tags.split("|") if t.strip()]
    if raw_tags is None:
        hashtags = extract_hashtags(text)
    elif isinstance(raw_tags, (list, tuple)):
        if not all(isinstance(t, str) for t in raw_tags):
            raise ValueError("hashtags field must contain strings")
        hashtags = _dedup_normalized(raw_tags)
    else:
        raise ValueError(f"bad hashtags field {raw_tags!r}")

    counts = {}
    for field in _COUNT_FIELDS:
        value = get(field)
        if value is None or value == "":
            counts[field] = 0
            continue
        try:
            n = int(value)
        except (TypeError, ValueError):
            raise ValueError(f"bad {field} count {value!r}") from None
        if n < 0:
            raise ValueError(f"negative {field} count {n}")
        counts[field] = n

    lang = get("lang")
    author = get("author_id")
    return PostRecord(
        post_id=str(post_id),
        timestamp=timestamp,
        text=text,
        hashtags=tuple(hashtags),
        author_id="" if author is None else str(author),
        lang_tag="" if lang is None else str(lang),
        **counts,
    )


def _as_text_stream(stream: IO) -> IO[str]:
    if not hasattr(stream, "read"):
        raise ConfigError("parse_corpus needs a readable stream")
    if isinstance(stream, io.TextIOBase) or hasattr(stream, "encoding"):
        return stream
    return io.TextIOWrapper(stream, encoding="utf-8")


def parse_corpus(
    stream: IO,
    format: str = "jsonl",
    strict: bool = False,
    field_map: Mapping[str, str] | None = None,
) -> ParsedCorpus:
    """Parse a corpus stream into PostRecords plus a malformed-row report.

    `field_map` remaps logical field names (keys of CORPUS_FIELDS) to the
    input's own column/key names. With strict=True the first malformed row
    raises DataError instead of being reported.
    """
    fmap = dict(zip(CORPUS_FIELDS, CORPUS_FIELDS))
    if field_map:
        unknown = set(field_map) - set(CORPUS_FIELDS)
        if unknown:
            raise ConfigError(f"unknown field-map keys: {sorted(unknown)}")
        fmap.update(field_map)

    text = _as_text_stream(stream)
    records: list[PostRecord] = []
    errors: list[RowError] = []

    def fail(line_number: int, reason: str):
        if strict:
            raise DataError(f"line {line_number}: {reason}")
        errors.append(RowError(line_number, reason))

    if format == "jsonl":
        for line_number, line in enumerate(text, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                fail(line_number, f"invalid JSON: {exc.msg}")
                continue
            if not isinstance(obj, dict):
                fail(line_number, "row is not a JSON object")
                continue
            try:
                records.append(_row_to_record(obj, fmap, from_csv=False))
            except ValueError as exc:
                fail(line_number, str(exc))
    elif format == "csv":
        reader = csv.DictReader(text)
        for row in reader:
            line_number = reader.line_num
            # DictReader maps missing trailing cells to None already;
            # drop the None key produced by overlong rows.
            row.pop(None, None)
            try:
                records.append(_row_to_record(row, fmap, from_csv=True))
            except ValueError as exc:
                fail(line_number, str(exc))
    else:
        raise ConfigError(f"unknown corpus format {format!r}")

    return ParsedCorpus(records=records, errors=errors)


def record_to_row(record: PostRecord) -> dict:
    """Canonical JSON-ready row for a record (fixed key order)."""
    return {
        "id": record.post_id,
        "created_at": record.timestamp.astimezone(timezone.utc).isoformat(),
        "text": record.text,
        "hashtags": list(record.hashtags),
        "author_id": record.author_id,
        "lang": record.lang_tag,
        "likes": record.likes,
        "replies": record.replies,
        "reposts": record.reposts,
        "quotes": record.quotes,
    }


def write_corpus(records: Iterable[PostRecord], stream: IO[str], format: str = "jsonl") -> None:
    """Write records in the canonical corpus schema.

    The JSONL form is byte-stable: writing, re-parsing and writing again
    produces identical output.
    """
    if format == "jsonl":
        for record in records:
            stream.write(json.dumps(record_to_row(record), ensure_ascii=False, separators=(",", ":")))
            stream.write("\n")
    elif format == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CORPUS_FIELDS)
        for record in records:
            row = record_to_row(record)
            row["hashtags"] = "|".join(record.hashtags)
            writer.writerow([row[field] for field in CORPUS_FIELDS])
    else:
        raise ConfigError(f"unknown corpus format {format!r}")


def filter_language(
    records: Iterable[PostRecord], accept: Callable[[PostRecord], bool]
) -> list[PostRecord]:
    """Order-preserving subset of records where `accept` holds."""
    return [record for record in records if accept(record)]


def segment_epochs(
    records: Iterable[PostRecord], config: EpochConfig
) -> dict[str, list[PostRecord]]:
    """Bucket records by the UTC calendar year of their timestamp.

    Returns one bucket per configured epoch (in config order) plus an
    'unassigned' bucket for records outside every epoch. Within-bucket
    order follows the input.
    """
    buckets: dict[str, list[PostRecord]] = {span.label: [] for span in config.epochs}
    buckets[UNASSIGNED_LABEL] = []
    for record in records:
        year = record.year()
        for span in config.epochs:
            if span.contains(year):
                buckets[span.label].append(record)
                break
        else:
            buckets[UNASSIGNED_LABEL].append(record)
    return buckets
