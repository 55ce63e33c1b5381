"""
From raw posts to epoch co-occurrence graphs
============================================

Parse a small JSONL corpus, normalize its hashtags, bucket the posts into
epochs, and build one weighted co-occurrence graph per epoch.
"""

import io

from corecov import (
    EpochConfig,
    build_epoch_graph,
    graph_stats,
    parse_corpus,
    segment_epochs,
)

# A corpus is one JSON object per line. Hashtags can come from an explicit
# field or be pulled out of the text; either way they get normalized
# (lowercased, NFC, '#' stripped) and deduplicated per post.
RAW = """\
{"id":"1","created_at":"2012-03-01T10:00:00+00:00","text":"#Vaccine drive with #Health","author_id":"u1","lang":"en"}
{"id":"2","created_at":"2012-05-02T11:00:00+00:00","text":"","hashtags":["#vaccine","#health"],"author_id":"u2","lang":"en"}
{"id":"3","created_at":"2013-07-04T12:00:00+00:00","text":"#vaccine #Doubt rising","author_id":"u3","lang":"en"}
{"id":"4","created_at":"2017-01-05T09:30:00+00:00","text":"#health #screening saves lives","author_id":"u1","lang":"en"}
{"id":"5","created_at":"2017-02-06T16:45:00+00:00","text":"#screening again, alone this time","hashtags":["#Screening"],"author_id":"u4","lang":"en"}
{"id":"6","created_at":"not-a-date","text":"#broken row","author_id":"u5","lang":"en"}
"""

parsed = parse_corpus(io.StringIO(RAW))
print(f"parsed {len(parsed.records)} records")
for error in parsed.errors:
    print(f"  skipped line {error.line_number}: {error.reason}")

for record in parsed.records:
    print(f"  {record.post_id} ({record.year()}): {list(record.hashtags)}")

# Bucket posts by the UTC calendar year of their timestamp.
epochs = EpochConfig.parse("early:2010-2014,late:2015-2019")
buckets = segment_epochs(parsed.records, epochs)
print("\nepoch buckets:", {label: len(rows) for label, rows in buckets.items()})

# Each epoch graph sums yearly graphs; an edge's weight is the number of
# posts in which the two hashtags appeared together.
for label in epochs.labels:
    graph = build_epoch_graph(buckets[label])
    stats = graph_stats(buckets[label], graph)
    print(f"\n{label}: {stats.n_posts} posts, {stats.n_unique_hashtags} hashtags, "
          f"{stats.n_bigrams} bigrams")
    for (a, b), w in graph.edge_items():
        print(f"  {a} -- {b}  weight {w}")
    # hashtags used only on their own stay as degree-0 nodes
    isolated = sorted(v for v in graph.nodes if graph.degree(v) == 0)
    if isolated:
        print(f"  isolated: {isolated}")
