"""Feed fetching, classification, embedding, dedup, and cycle accounting."""

import json
import math
import random
from datetime import timedelta
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contextweaver.errors import FetchError, ValidationError
from contextweaver.ingest import (
    EventCache,
    EventCategory,
    EventRecord,
    FixtureFeedAdapter,
    NewsItem,
    classify_event,
    cosine,
    dedup_lookup,
    embed_text,
    fetch_feed,
    link_event,
    parse_news_item,
    run_ingest_cycle,
    update_event,
)
from contextweaver.ingest.pipeline import token_overlap
from contextweaver.kg import KnowledgeGraph, NodeKind, snapshot_lines

from conftest import NOW, make_node, ts


def item(idx=1, headline="Heavy rain expected", summary="", location="Springfield",
         location_description="", published=None) -> NewsItem:
    return NewsItem(
        item_id=f"i{idx:03d}",
        headline=headline,
        summary=summary,
        location_name=location,
        location_description=location_description,
        published_at=published or ts(6),
        source="test",
    )


def write_fixture(path, records):
    lines = []
    for r in records:
        lines.append(r if isinstance(r, str) else json.dumps(r))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestNewsItemValidation:
    def test_far_future_rejected(self):
        with pytest.raises(ValidationError):
            item(published=NOW + timedelta(hours=30)).validate(NOW)

    def test_next_day_allowed(self):
        item(published=NOW + timedelta(hours=20)).validate(NOW)

    def test_empty_headline_rejected(self):
        with pytest.raises(ValidationError):
            item(headline=" ").validate(NOW)

    def test_parse_rejects_missing_fields(self):
        with pytest.raises(ValidationError):
            parse_news_item({"item_id": "x"}, NOW)


class TestFetchFeed:
    def test_empty_fixture(self, tmp_path):
        path = tmp_path / "feed.jsonl"
        path.write_text("", encoding="utf-8")
        assert fetch_feed(FixtureFeedAdapter(path), ts(100), NOW) == []

    def test_since_filters_older_items(self, tmp_path):
        path = tmp_path / "feed.jsonl"
        write_fixture(path, [
            {"item_id": "a", "headline": "one", "location_name": "X",
             "published_at": "2026-03-10T00:00:00Z"},
            {"item_id": "b", "headline": "two", "location_name": "X",
             "published_at": "2026-03-11T00:00:00Z"},
            {"item_id": "c", "headline": "three", "location_name": "X",
             "published_at": "2026-03-12T00:00:00Z"},
        ])
        got = fetch_feed(FixtureFeedAdapter(path), ts(72), NOW)  # since 2026-03-11 12:00
        assert [i.item_id for i in got] == ["c"]

    def test_malformed_record_skipped_rest_returned(self, tmp_path, caplog):
        path = tmp_path / "feed.jsonl"
        records = [
            {"item_id": f"r{i}", "headline": f"headline {i}", "location_name": "X",
             "published_at": "2026-03-10T00:00:00Z"}
            for i in range(4)
        ]
        records.insert(2, "{broken json")
        write_fixture(path, records)
        with caplog.at_level("WARNING"):
            got = fetch_feed(FixtureFeedAdapter(path), ts(10_000), NOW)
        assert len(got) == 4
        assert any("skipped" in rec.message for rec in caplog.records)

    def test_unreachable_fixture_raises_fetch_error(self, tmp_path):
        with pytest.raises(FetchError):
            FixtureFeedAdapter(tmp_path / "missing.jsonl").fetch_raw(ts(1))


class TestClassifyEvent:
    def test_heavy_rain_is_weather(self):
        assert classify_event(item(headline="Heavy rain expected")) == EventCategory.WEATHER

    def test_no_keyword_is_other(self):
        assert classify_event(item(headline="Quarterly results published")) == EventCategory.OTHER

    def test_precedence_natural_disaster_over_protest(self):
        # documented precedence applied by hand: "flooding" (NaturalDisaster)
        # outranks "protest" (Protest); no Weather keyword present
        got = classify_event(item(headline="flooding after protest"))
        assert got == EventCategory.NATURAL_DISASTER

    def test_word_boundaries(self):
        assert classify_event(item(headline="Rainbow mural unveiled")) == EventCategory.OTHER


def reference_embedding(text: str) -> dict[int, float]:
    """Independent reimplementation of the documented recipe (no numpy)."""
    def fnv(data: bytes) -> int:
        h = 0xCBF29CE484222325
        for b in data:
            h = ((h ^ b) * 0x100000001B3) % 2**64
        return h

    text = text.lower()
    grams = [text[i:i + 3] for i in range(len(text) - 2)] if len(text) >= 3 else (
        [text] if text else [])
    counts: dict[int, float] = {}
    for gram in grams:
        bucket = fnv(gram.encode("utf-8")) % 256
        counts[bucket] = counts.get(bucket, 0.0) + 1.0
    norm = math.sqrt(sum(v * v for v in counts.values()))
    return {k: v / norm for k, v in counts.items()} if norm else {}


def reference_cosine(a: dict[int, float], b: dict[int, float]) -> float:
    return sum(v * b.get(k, 0.0) for k, v in a.items())


class TestEmbedText:
    def test_self_similarity_is_one(self):
        for s in ["storm", "a", "Storm in Delhi!", "雨が降る"]:
            assert cosine(embed_text(s), embed_text(s)) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_grams_are_orthogonal(self):
        # "aaaa" -> gram {"aaa"}, "zzzz" -> {"zzz"}; verified collision-free buckets
        assert cosine(embed_text("aaaa"), embed_text("zzzz")) == 0.0

    def test_matches_independent_reference_recipe(self):
        a, b = "storm in delhi", "delhi storm"
        want = reference_cosine(reference_embedding(a), reference_embedding(b))
        got = cosine(embed_text(a), embed_text(b))
        assert got == pytest.approx(want, abs=1e-9)

    @given(st.text(max_size=60))
    @settings(max_examples=80, deadline=None)
    def test_unit_norm_or_zero(self, text):
        vec = embed_text(text)
        norm = float(np.linalg.norm(vec))
        if text:
            assert norm == pytest.approx(1.0, abs=1e-9)
        else:
            assert norm == 0.0

    @given(st.text(max_size=40))
    @settings(max_examples=40, deadline=None)
    def test_deterministic_across_calls(self, text):
        assert np.array_equal(embed_text(text), embed_text(text))


def make_record(node_id, text, published=None) -> EventRecord:
    published = published or ts(10)
    return EventRecord(
        event_node=node_id,
        category=EventCategory.OTHER,
        status="ongoing",
        embedding=embed_text(text),
        first_seen=published,
        last_seen=published,
    )


class TestDedupLookup:
    def test_empty_cache_returns_none(self):
        assert dedup_lookup(item(), EventCache()) is None

    def test_identical_reingest_hits_own_record(self):
        cache = EventCache()
        it = item(headline="Ferry strike", summary="Crews walked out at dawn")
        cache.insert(make_record("evt-1", it.dedup_text()))
        hit = dedup_lookup(it, cache)
        assert hit is not None and hit.event_node == "evt-1"

    def test_random_cache_matches_bruteforce_scan(self):
        rng = random.Random(2026)
        words = ("storm flood strike outage festival quake parade drought fog "
                 "harvest market rally bridge ferry blackout").split()
        cache = EventCache(similarity_threshold=0.6)
        texts = []
        while len(texts) < 20:
            text = " ".join(rng.sample(words, 6))
            vec = embed_text(text)
            if all(cosine(vec, embed_text(t)) < 0.6 for t in texts):
                texts.append(text)
                cache.insert(make_record(f"evt-{len(texts):03d}", text))
        records = cache.records()
        for q in range(100):
            query = item(headline=" ".join(rng.sample(words, rng.randint(2, 8))))
            got = dedup_lookup(query, cache)
            # oracle: exhaustive argmax-with-threshold over cache contents
            qvec = embed_text(query.dedup_text())
            best, best_sim = None, -1.0
            for rec in records:
                sim = cosine(qvec, rec.embedding)
                if sim > best_sim:
                    best, best_sim = rec, sim
            want = best if best_sim >= cache.similarity_threshold else None
            assert (got.event_node if got else None) == (want.event_node if want else None)

    def test_cache_rejects_near_duplicate_insert(self):
        cache = EventCache()
        cache.insert(make_record("evt-1", "ferry strike at dawn"))
        with pytest.raises(ValidationError):
            cache.insert(make_record("evt-2", "ferry strike at dawn"))


class TestLinkEvent:
    def test_existing_unique_location(self, kg):
        kg.upsert_node(make_node("springfield", NodeKind.LOCATION, name="Springfield"))
        event_id = link_event(item(), EventCategory.WEATHER, kg, now=NOW)
        assert kg.nodes(NodeKind.LOCATION) and len(kg.nodes(NodeKind.LOCATION)) == 1
        event = kg.get_node(event_id)
        assert event.kind == NodeKind.EVENT
        assert event.attribute("category").value == EventCategory.WEATHER
        assert event.attribute("status").value == "ongoing"
        edges = kg.edges()
        assert len(edges) == 1 and edges[0].key() == (event_id, "springfield", "OCCURS_AT")

    def test_unknown_location_created(self, kg):
        event_id = link_event(item(location="Pine Valley"), EventCategory.OTHER, kg, now=NOW)
        locations = kg.nodes(NodeKind.LOCATION)
        assert len(locations) == 1 and locations[0].canonical_name == "Pine Valley"
        assert kg.edges()[0].key() == (event_id, locations[0].id, "OCCURS_AT")

    def test_description_token_overlap_disambiguates(self, kg):
        # hand-computed overlaps with the item description
        # "historic coastal town with a famous pier":
        #   riverton-a "coastal fishing town with a pier" -> {coastal,town,with,a,pier} = 5
        #   riverton-b "inland farming village"          -> {} = 0
        kg.upsert_node(make_node("riverton-a", NodeKind.LOCATION, name="Riverton",
                                 attrs=[("description", "coastal fishing town with a pier",
                                         "location_corpus", ts(24))]))
        kg.upsert_node(make_node("riverton-b", NodeKind.LOCATION, name="Riverton",
                                 attrs=[("description", "inland farming village",
                                         "location_corpus", ts(24))]))
        assert token_overlap("historic coastal town with a famous pier",
                             "coastal fishing town with a pier") == 5
        event_id = link_event(
            item(location="Riverton",
                 location_description="historic coastal town with a famous pier"),
            EventCategory.OTHER, kg, now=NOW)
        assert kg.edges()[0].dst == "riverton-a"
        assert kg.get_node(event_id).canonical_name == "Heavy rain expected"

    def test_tie_breaks_by_ascending_node_id(self, kg):
        kg.upsert_node(make_node("river-b", NodeKind.LOCATION, name="Riverton"))
        kg.upsert_node(make_node("river-a", NodeKind.LOCATION, name="Riverton"))
        link_event(item(location="Riverton"), EventCategory.OTHER, kg, now=NOW)
        assert kg.edges()[0].dst == "river-a"


class TestUpdateEvent:
    def _linked(self, kg, cache):
        it = item(summary="sandbags deployed", published=ts(12))
        event_id = link_event(it, EventCategory.WEATHER, kg, cache, now=NOW)
        return it, cache.get(event_id)

    def test_followup_changes_no_counts(self, kg):
        cache = EventCache()
        it, record = self._linked(kg, cache)
        nodes, edges = kg.node_count(), kg.edge_count()
        update_event(record, item(summary="sandbags deployed", published=ts(6)), kg, cache, NOW)
        assert (kg.node_count(), kg.edge_count()) == (nodes, edges)

    def test_later_item_advances_last_seen(self, kg):
        cache = EventCache()
        it, record = self._linked(kg, cache)
        update_event(record, item(published=ts(2)), kg, cache, NOW)
        assert kg.get_node(record.event_node).last_seen == ts(2)
        assert cache.get(record.event_node).last_seen == ts(2)

    def test_out_of_order_item_never_regresses(self, kg):
        cache = EventCache()
        it, record = self._linked(kg, cache)
        update_event(record, item(published=ts(40)), kg, cache, NOW)
        assert kg.get_node(record.event_node).last_seen == ts(12)


class TestRunIngestCycle:
    def test_empty_feed_all_zero(self, kg, tmp_path):
        path = tmp_path / "feed.jsonl"
        path.write_text("", encoding="utf-8")
        report = run_ingest_cycle(FixtureFeedAdapter(path), EventCache(), kg, NOW)
        assert report.as_dict() == {"fetched": 0, "deduped": 0, "created": 0,
                                    "updated": 0, "skipped": 0, "error": None}

    def test_adapter_failure_never_throws(self, kg, tmp_path):
        report = run_ingest_cycle(FixtureFeedAdapter(tmp_path / "gone.jsonl"),
                                  EventCache(), kg, NOW)
        assert report.fetched == 0 and report.error

    def test_mixed_fixture_accounting(self, kg, tmp_path):
        # manual accounting: 3 new + 2 in-batch repeats + 1 malformed line
        path = tmp_path / "feed.jsonl"
        base = [
            {"item_id": "n1", "headline": "Ferry strike halts crossings",
             "summary": "Union crews walked out over pensions",
             "location_name": "Lakewood", "published_at": "2026-03-10T08:00:00Z"},
            {"item_id": "n2", "headline": "Dust storm blankets suburbs",
             "summary": "Visibility fell sharply on ring roads",
             "location_name": "Delhi", "published_at": "2026-03-10T09:00:00Z"},
            {"item_id": "n3", "headline": "Lantern festival illuminates hillside",
             "summary": "Artisans hung ten thousand paper lights",
             "location_name": "Kyoto Heights", "published_at": "2026-03-10T10:00:00Z"},
        ]
        repeats = [
            dict(base[0], item_id="r1", published_at="2026-03-10T11:00:00Z"),
            dict(base[1], item_id="r2", published_at="2026-03-10T12:00:00Z"),
        ]
        write_fixture(path, base + repeats + ["oops not json"])
        report = run_ingest_cycle(FixtureFeedAdapter(path), EventCache(), kg, NOW)
        assert report.fetched == 6
        assert report.created == 3
        assert report.updated == 2 == report.deduped
        assert report.skipped == 1
        assert report.fetched == report.deduped + report.created + report.skipped

    def test_bundled_fixture_runs_idempotently(self, kg):
        cache = EventCache()
        fixture = resources.files("contextweaver.data") / "news_50.jsonl"
        adapter = FixtureFeedAdapter(str(fixture))
        first = run_ingest_cycle(adapter, cache, kg, NOW)
        snap_once = snapshot_lines(kg)
        second = run_ingest_cycle(adapter, cache, kg, NOW)
        assert (first.created, first.updated) == (50, 0)
        assert (second.created, second.updated) == (0, 50)
        assert snapshot_lines(kg) == snap_once
        # cache coherence: every cached record's node exists and is an Event
        for record in cache.records():
            assert kg.get_node(record.event_node).kind == NodeKind.EVENT
