"""Feed adapters and the fetch step.

Two adapters ship by default: a line-delimited JSON fixture adapter that is
bit-exact replayable, and a live HTTP adapter (GET with topics + since query
params, JSON array of NewsItem-shaped records). Both return raw records;
validation and the since-filter happen in :func:`fetch_feed`.
"""

from __future__ import annotations

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Optional, Protocol, Union

import requests

from ..errors import FetchError, ValidationError
from ..timeutil import to_rfc3339
from .types import NewsItem, parse_news_item

logger = logging.getLogger(__name__)


class FeedAdapter(Protocol):
    def fetch_raw(self, since: datetime) -> list[dict]: ...


class FixtureFeedAdapter:
    """Replays a line-delimited JSON file of NewsItem records."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    def fetch_raw(self, since: datetime) -> list[dict]:
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise FetchError(f"fixture {self.path} unreadable: {exc}") from exc
        records = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                # malformed line still counts as a record so cycle accounting
                # can report it as skipped
                logger.warning("fixture %s line %d is not valid JSON", self.path.name, line_no)
                records.append({"_malformed": True, "line": line_no})
        return records


class HttpFeedAdapter:
    """GET {url}?topics=...&since=...; response is a JSON array of records."""

    def __init__(self, url: str, api_key: Optional[str] = None,
                 topics: Optional[list[str]] = None, timeout_s: float = 10.0):
        self.url = url
        self.api_key = api_key
        self.topics = topics or []
        self.timeout_s = timeout_s

    def fetch_raw(self, since: datetime) -> list[dict]:
        params = {"since": to_rfc3339(since)}
        if self.topics:
            params["topics"] = ",".join(self.topics)
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            response = requests.get(self.url, params=params, headers=headers,
                                    timeout=self.timeout_s)
            response.raise_for_status()
            payload = response.json()
        except (requests.RequestException, ValueError) as exc:
            raise FetchError(f"feed endpoint {self.url} unreachable: {exc}") from exc
        if not isinstance(payload, list):
            raise FetchError(f"feed endpoint {self.url} returned a non-array payload")
        return payload


def fetch_feed_counted(
    adapter: FeedAdapter,
    since: datetime,
    now: Optional[datetime] = None,
) -> tuple[list[NewsItem], int]:
    """Validated items newer than ``since`` plus the count of skipped records."""
    raw = adapter.fetch_raw(since)
    items: list[NewsItem] = []
    skipped = 0
    for record in raw:
        try:
            if not isinstance(record, dict) or record.get("_malformed"):
                raise ValidationError("malformed feed record")
            item = parse_news_item(record, now)
        except ValidationError as exc:
            logger.warning("feed record skipped: %s", exc)
            skipped += 1
            continue
        if item.published_at > since:
            items.append(item)
    items.sort(key=lambda i: (i.published_at, i.item_id))
    return items, skipped


def fetch_feed(adapter: FeedAdapter, since: datetime,
               now: Optional[datetime] = None) -> list[NewsItem]:
    """Items with published_at > since, ascending; malformed records skipped."""
    items, _ = fetch_feed_counted(adapter, since, now)
    return items
