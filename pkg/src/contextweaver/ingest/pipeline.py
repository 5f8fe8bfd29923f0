"""Per-cycle orchestration: fetch, classify, dedup, then link or update.

Every cycle refetches from the epoch and lets the dedup gate absorb repeats,
which is what makes ingestion idempotent: replaying a fixture produces
updates, never duplicate nodes. Node ids, timestamps, and attributes derive
from item content (published_at, headline), so replays leave the graph
byte-identical under canonical snapshot ordering.
"""

from __future__ import annotations

import logging
import re
from dataclasses import asdict, dataclass
from datetime import datetime
from typing import Optional

from ..errors import ConsistencyError, FetchError, IngestError, NotFoundError
from ..kg import Attribute, Edge, EdgeKind, KnowledgeGraph, Node, NodeKind
from ..timeutil import EPOCH, utcnow
from .cache import EventCache, EventRecord, dedup_lookup, record_with_last_seen
from .classify import EventClassifier, classify_event
from .embedding import HashedTrigramEmbedder, TextEmbedder
from .feed import FeedAdapter, fetch_feed_counted
from .types import EventCategory, NewsItem

logger = logging.getLogger(__name__)

_WORD_RE = re.compile(r"[a-z0-9]+")

_STOPWORDS = frozenset(
    "a an and are as at be by for from has have in is it its of on or that the "
    "this to was were will with after before near over under more most".split()
)

MAX_TOPIC_KEYWORDS = 5


def _tokens(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def token_overlap(a: str, b: str) -> int:
    return len(set(_tokens(a)) & set(_tokens(b)))


def summary_topics(summary: str) -> list[str]:
    """First few informative summary tokens; the raw feed text is never stored."""
    seen: list[str] = []
    for token in _tokens(summary):
        if len(token) < 3 or token in _STOPWORDS or token in seen:
            continue
        seen.append(token)
        if len(seen) >= MAX_TOPIC_KEYWORDS:
            break
    return seen


@dataclass
class IngestReport:
    fetched: int = 0
    deduped: int = 0
    created: int = 0
    updated: int = 0
    skipped: int = 0
    error: Optional[str] = None

    def as_dict(self) -> dict:
        return asdict(self)


def _resolve_location(item: NewsItem, kg: KnowledgeGraph,
                      observed_at: datetime) -> str:
    """Existing Location with best description token overlap, else a new one."""
    matches = kg.find_by_name(item.location_name, NodeKind.LOCATION)
    if matches:
        def overlap(node) -> int:
            description = node.attribute("description")
            return token_overlap(item.location_description,
                                 description.value if description else "")
        # max overlap, ties broken by ascending node id (matches are id-sorted)
        return max(matches, key=overlap).id
    attributes = []
    if item.location_description.strip():
        attributes.append(Attribute("description", item.location_description,
                                    "feed", observed_at))
    location_id = kg.new_node_id("loc")
    kg.upsert_node(Node(
        id=location_id,
        kind=NodeKind.LOCATION,
        canonical_name=item.location_name,
        attributes=attributes,
        created_at=item.published_at,
        last_seen=item.published_at,
    ))
    return location_id


def link_event(
    item: NewsItem,
    category: str,
    kg: KnowledgeGraph,
    cache: Optional[EventCache] = None,
    embedder: Optional[TextEmbedder] = None,
    now: Optional[datetime] = None,
) -> str:
    """Create an Event node, attach it to its Location, and cache its embedding."""
    now = now or utcnow()
    observed_at = min(item.published_at, now)
    location_id = _resolve_location(item, kg, observed_at)
    attributes = [
        Attribute("category", category, "feed", observed_at),
        Attribute("status", "ongoing", "feed", observed_at),
    ]
    topics = summary_topics(item.summary)
    if topics:
        attributes.append(Attribute("topics", " ".join(topics), "feed", observed_at))
    event_id = kg.new_node_id("evt")
    kg.upsert_node(Node(
        id=event_id,
        kind=NodeKind.EVENT,
        canonical_name=item.headline,
        attributes=attributes,
        created_at=item.published_at,
        last_seen=item.published_at,
    ))
    try:
        kg.upsert_edge(Edge(src=event_id, dst=location_id, kind=EdgeKind.OCCURS_AT,
                            weight=1.0, created_at=item.published_at))
        if cache is not None:
            embedder = embedder or HashedTrigramEmbedder()
            cache.insert(EventRecord(
                event_node=event_id,
                category=category,
                status="ongoing",
                embedding=embedder.embed(item.dedup_text()),
                first_seen=item.published_at,
                last_seen=item.published_at,
            ))
    except Exception:
        # keep item application all-or-nothing
        kg.remove_node(event_id)
        if cache is not None:
            cache.evict(event_id)
        raise
    return event_id


def update_event(
    existing: EventRecord,
    item: NewsItem,
    kg: KnowledgeGraph,
    cache: Optional[EventCache] = None,
    now: Optional[datetime] = None,
) -> None:
    """Refresh a known event: status back to ongoing, last_seen never regresses."""
    now = now or utcnow()
    observed_at = min(item.published_at, now)
    if not kg.has_node(existing.event_node):
        if cache is not None:
            cache.evict(existing.event_node)
        raise ConsistencyError(
            f"cached event {existing.event_node} missing from the graph"
        )
    kg.set_attribute(existing.event_node,
                     Attribute("status", "ongoing", "feed", observed_at))
    kg.touch(existing.event_node, item.published_at)
    if cache is not None:
        updated = record_with_last_seen(existing, item.published_at)
        if updated.status != "ongoing":
            updated = EventRecord(
                event_node=updated.event_node, category=updated.category,
                status="ongoing", embedding=updated.embedding,
                first_seen=updated.first_seen, last_seen=updated.last_seen,
            )
        cache.update(updated)


def run_ingest_cycle(
    adapter: FeedAdapter,
    cache: EventCache,
    kg: KnowledgeGraph,
    now: Optional[datetime] = None,
    since: datetime = EPOCH,
    embedder: Optional[TextEmbedder] = None,
    classifier: Optional[EventClassifier] = None,
) -> IngestReport:
    """One full fetch-classify-dedup-apply pass. Never raises.

    Accounting: fetched counts every raw record (malformed ones included),
    and fetched == deduped + created + skipped with updated == deduped.
    """
    now = now or utcnow()
    embedder = embedder or HashedTrigramEmbedder()
    report = IngestReport()
    try:
        items, malformed = fetch_feed_counted(adapter, since, now)
    except FetchError as exc:
        logger.warning("ingest cycle skipped: %s", exc)
        report.error = str(exc)
        return report
    report.fetched = len(items) + malformed
    report.skipped = malformed
    for item in items:
        try:
            _apply_item(item, cache, kg, embedder, classifier, now, report)
        except Exception as exc:  # per-item atomicity: failures only skip the item
            logger.warning("news item %s skipped after retry: %s", item.item_id, exc)
            report.skipped += 1
    return report


def _apply_item(
    item: NewsItem,
    cache: EventCache,
    kg: KnowledgeGraph,
    embedder: TextEmbedder,
    classifier: Optional[EventClassifier],
    now: datetime,
    report: IngestReport,
) -> None:
    last_error: Optional[Exception] = None
    for attempt in range(2):  # KG write failure requeues the item once
        try:
            existing = dedup_lookup(item, cache, embedder)
            if existing is not None:
                try:
                    update_event(existing, item, kg, cache, now)
                except ConsistencyError:
                    # stale cache entry was evicted; reprocess the item as new
                    link_event(item, classify_event(item, classifier), kg,
                               cache, embedder, now)
                    report.created += 1
                    return
                report.deduped += 1
                report.updated += 1
                return
            link_event(item, classify_event(item, classifier), kg, cache, embedder, now)
            report.created += 1
            return
        except (IngestError, NotFoundError, OSError) as exc:
            last_error = exc
            logger.warning("item %s attempt %d failed: %s", item.item_id, attempt + 1, exc)
    raise IngestError(f"item {item.item_id} failed twice: {last_error}")


class Ingestor:
    """Binds one adapter/cache/graph triple for scheduler and CLI use."""

    def __init__(
        self,
        adapter: FeedAdapter,
        cache: EventCache,
        kg: KnowledgeGraph,
        embedder: Optional[TextEmbedder] = None,
        classifier: Optional[EventClassifier] = None,
    ):
        self.adapter = adapter
        self.cache = cache
        self.kg = kg
        self.embedder = embedder or HashedTrigramEmbedder()
        self.classifier = classifier

    def run_cycle(self, now: Optional[datetime] = None) -> IngestReport:
        return run_ingest_cycle(self.adapter, self.cache, self.kg, now=now,
                                embedder=self.embedder, classifier=self.classifier)
