"""News-event ingestion: fetch, classify, deduplicate, link into the graph."""

from .types import EventCategory, NewsItem, parse_news_item
from .embedding import EMBEDDING_DIM, HashedTrigramEmbedder, cosine, embed_text
from .classify import CATEGORY_PRECEDENCE, DEFAULT_CATEGORY_KEYWORDS, KeywordRuleClassifier, classify_event
from .cache import EventCache, EventRecord, dedup_lookup
from .feed import FeedAdapter, FixtureFeedAdapter, HttpFeedAdapter, fetch_feed
from .pipeline import IngestReport, Ingestor, link_event, run_ingest_cycle, update_event

__all__ = [
    "CATEGORY_PRECEDENCE",
    "DEFAULT_CATEGORY_KEYWORDS",
    "EMBEDDING_DIM",
    "EventCache",
    "EventCategory",
    "EventRecord",
    "FeedAdapter",
    "FixtureFeedAdapter",
    "HashedTrigramEmbedder",
    "HttpFeedAdapter",
    "IngestReport",
    "Ingestor",
    "KeywordRuleClassifier",
    "NewsItem",
    "classify_event",
    "cosine",
    "dedup_lookup",
    "embed_text",
    "fetch_feed",
    "link_event",
    "parse_news_item",
    "run_ingest_cycle",
    "update_event",
]
