"""Deterministic exporters: graphs (graphml/dot/json/csv) and report tables.

All outputs are byte-stable for a given input: nodes and edges are written
in lexicographic order, floats use shortest-precise formatting, and CSV rows
end with plain newlines. That keeps diffs meaningful and run manifests
hash-reproducible.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Mapping, Sequence
from typing import IO
from xml.sax.saxutils import escape, quoteattr

from .errors import ConfigError
from .graph import WeightedGraph

GRAPH_FORMATS = ("graphml", "dot", "json", "csv")

EDGES_HEADER = ("source", "target", "weight")
COUNTS_HEADER = ("epoch", "posts", "hashtags", "bigrams")
DIAGNOSTICS_HEADER = ("epoch", "layer", "N", "E", "C", "LCC", "W_in")
MATCHES_HEADER = ("epoch_from", "community_from", "epoch_to", "community_to", "jaccard", "stable_id")
ASSIGNMENTS_HEADER = ("epoch", "hashtag", "status", "community_id", "support")
ASSIGNMENT_COUNTS_HEADER = ("epoch", "core", "projected", "unassigned")
ENRICHMENT_HEADER = (
    "epoch",
    "community_id",
    "seed_mentions",
    "total_mentions",
    "seed_share",
    "baseline_share",
    "enrichment",
    "log_enrichment",
)
RECOVERY_HEADER = ("epoch", "seed_set", "n_seeds", "core_recovery", "augmented_recovery", "delta")
SUPPORT_SUMMARY_HEADER = ("epoch", "n_projected", "min", "median", "max")
SUPPORT_HISTOGRAM_HEADER = ("epoch", "bucket", "count")
ROW_ERRORS_HEADER = ("line_number", "reason")

Annotations = Mapping[str, Mapping[str, object]]


def fmt_value(value) -> str:
    """Cell formatting: None -> empty, floats trimmed, everything else str."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_value(cell) for cell in row])


def write_edge_csv(g: WeightedGraph, stream: IO[str]) -> None:
    """Edge list (source, target, weight), sorted by (source, target)."""
    write_csv(stream, EDGES_HEADER, ((a, b, w) for (a, b), w in g.edge_items()))


def _check_annotations(g: WeightedGraph, annotations: Annotations | None) -> Annotations:
    annotations = annotations or {}
    unknown = set(annotations) - g.nodes
    if unknown:
        raise ValueError(f"annotations for unknown nodes: {sorted(unknown)[:5]}")
    return annotations


def _attr_type(values: Iterable[object]) -> str:
    kinds = set()
    for v in values:
        if isinstance(v, bool):
            kinds.add("string")
        elif isinstance(v, int):
            kinds.add("long")
        elif isinstance(v, float):
            kinds.add("double")
        else:
            kinds.add("string")
    if kinds <= {"long"}:
        return "long"
    if kinds <= {"long", "double"}:
        return "double"
    return "string"


def _write_graphml(g: WeightedGraph, stream: IO[str], annotations: Annotations) -> None:
    attr_values: dict[str, list[object]] = {}
    for attrs in annotations.values():
        for name, value in attrs.items():
            if value is not None:
                attr_values.setdefault(name, []).append(value)
    key_ids = {name: f"d{i}" for i, name in enumerate(sorted(attr_values))}

    stream.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    stream.write('<graphml xmlns="http://graphml.graphdrawing.org/xmlns">\n')
    for name in sorted(attr_values):
        stream.write(
            f'  <key id="{key_ids[name]}" for="node" attr.name={quoteattr(name)}'
            f' attr.type="{_attr_type(attr_values[name])}"/>\n'
        )
    stream.write('  <key id="weight" for="edge" attr.name="weight" attr.type="long"/>\n')
    stream.write('  <graph edgedefault="undirected">\n')
    for node in g.sorted_nodes():
        attrs = annotations.get(node, {})
        data = [
            (key_ids[name], attrs[name])
            for name in sorted(attrs)
            if attrs[name] is not None
        ]
        if data:
            stream.write(f"    <node id={quoteattr(node)}>\n")
            for key_id, value in data:
                stream.write(f'      <data key="{key_id}">{escape(fmt_value(value))}</data>\n')
            stream.write("    </node>\n")
        else:
            stream.write(f"    <node id={quoteattr(node)}/>\n")
    for (a, b), w in g.edge_items():
        stream.write(
            f"    <edge source={quoteattr(a)} target={quoteattr(b)}>"
            f'<data key="weight">{w}</data></edge>\n'
        )
    stream.write("  </graph>\n</graphml>\n")


def _write_dot(g: WeightedGraph, stream: IO[str], annotations: Annotations) -> None:
    def quote(name: str) -> str:
        return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'

    stream.write("graph {\n")
    for node in g.sorted_nodes():
        attrs = annotations.get(node, {})
        rendered = ", ".join(
            f"{name}={quote(fmt_value(attrs[name]))}"
            for name in sorted(attrs)
            if attrs[name] is not None
        )
        stream.write(f"  {quote(node)}{f' [{rendered}]' if rendered else ''};\n")
    for (a, b), w in g.edge_items():
        stream.write(f"  {quote(a)} -- {quote(b)} [weight={w}];\n")
    stream.write("}\n")


def _write_json(g: WeightedGraph, stream: IO[str], annotations: Annotations) -> None:
    obj = {
        "directed": False,
        "nodes": [
            {"id": node, **{k: v for k, v in sorted(annotations.get(node, {}).items()) if v is not None}}
            for node in g.sorted_nodes()
        ],
        "links": [
            {"source": a, "target": b, "weight": w} for (a, b), w in g.edge_items()
        ],
    }
    json.dump(obj, stream, ensure_ascii=False, sort_keys=True, indent=2)
    stream.write("\n")


def export_graph(
    g: WeightedGraph,
    stream: IO[str],
    format: str = "graphml",
    annotations: Annotations | None = None,
) -> None:
    """Write `g` with optional per-node annotations in the chosen format.

    Annotation keys must be existing nodes; None values are omitted.
    """
    annotations = _check_annotations(g, annotations)
    if format == "graphml":
        _write_graphml(g, stream, annotations)
    elif format == "dot":
        _write_dot(g, stream, annotations)
    elif format == "json":
        _write_json(g, stream, annotations)
    elif format == "csv":
        write_edge_csv(g, stream)
    else:
        raise ConfigError(f"unknown graph format {format!r}, expected one of {GRAPH_FORMATS}")


def support_histogram(values: Sequence[int]) -> list[tuple[str, int]]:
    """Bucketed counts of projection support: 1, 2, 3-4, 5-8, 9-16, >=17."""
    buckets = [("1", 1, 1), ("2", 2, 2), ("3-4", 3, 4), ("5-8", 5, 8), ("9-16", 9, 16)]
    rows = [(label, sum(1 for v in values if lo <= v <= hi)) for label, lo, hi in buckets]
    rows.append((">=17", sum(1 for v in values if v >= 17)))
    return rows
