"""Raw feed item shape and the closed category set."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Optional

from ..errors import ValidationError
from ..timeutil import ensure_utc, from_rfc3339, utcnow

# Items dated further than this into the future are junk and get rejected.
MAX_FUTURE_SKEW = timedelta(hours=24)


class EventCategory:
    WEATHER = "Weather"
    NATURAL_DISASTER = "NaturalDisaster"
    PROTEST = "Protest"
    VIOLENCE = "Violence"
    DISRUPTION = "Disruption"
    OTHER = "Other"
    ALL = (WEATHER, NATURAL_DISASTER, PROTEST, VIOLENCE, DISRUPTION, OTHER)


@dataclass(frozen=True)
class NewsItem:
    item_id: str
    headline: str
    summary: str
    location_name: str
    location_description: str
    published_at: datetime
    source: str

    def validate(self, now: Optional[datetime] = None) -> None:
        if not self.headline or not self.headline.strip():
            raise ValidationError(f"news item {self.item_id!r}: headline must be non-empty")
        if not self.location_name or not self.location_name.strip():
            raise ValidationError(f"news item {self.item_id!r}: location_name must be non-empty")
        if self.published_at > (now or utcnow()) + MAX_FUTURE_SKEW:
            raise ValidationError(
                f"news item {self.item_id!r}: published_at more than 24h in the future"
            )

    def dedup_text(self) -> str:
        return self.headline + " " + self.summary


def parse_news_item(record: dict, now: Optional[datetime] = None) -> NewsItem:
    """Build and validate a NewsItem from a raw feed record."""
    try:
        published = record["published_at"]
        item = NewsItem(
            item_id=str(record["item_id"]),
            headline=str(record["headline"]),
            summary=str(record.get("summary", "")),
            location_name=str(record["location_name"]),
            location_description=str(record.get("location_description", "")),
            published_at=ensure_utc(published) if isinstance(published, datetime)
            else from_rfc3339(published),
            source=str(record.get("source", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed news record: {exc}") from exc
    item.validate(now)
    return item
