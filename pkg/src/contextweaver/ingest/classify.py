"""Keyword-rule event classification.

Categories are checked in fixed precedence order; the first category with a
keyword hit in the headline or summary wins, otherwise Other. Word matching
is case-insensitive on word boundaries. The rule table is config-overridable
and the whole classifier is pluggable behind EventClassifier.
"""

from __future__ import annotations

import re
from typing import Optional, Protocol

from .types import EventCategory, NewsItem

CATEGORY_PRECEDENCE = (
    EventCategory.WEATHER,
    EventCategory.NATURAL_DISASTER,
    EventCategory.PROTEST,
    EventCategory.VIOLENCE,
    EventCategory.DISRUPTION,
)

DEFAULT_CATEGORY_KEYWORDS: dict[str, tuple[str, ...]] = {
    EventCategory.WEATHER: (
        "rain", "snow", "snowfall", "storm", "thunderstorm", "hail", "heatwave",
        "blizzard", "fog", "frost", "wind", "monsoon", "drizzle",
    ),
    EventCategory.NATURAL_DISASTER: (
        "flood", "flooding", "earthquake", "wildfire", "hurricane", "tsunami",
        "landslide", "cyclone", "tornado", "volcano", "avalanche",
    ),
    EventCategory.PROTEST: (
        "protest", "demonstration", "march", "rally", "strike", "walkout", "picket",
    ),
    EventCategory.VIOLENCE: (
        "shooting", "attack", "riot", "assault", "violence", "stabbing", "bombing",
        "clashes",
    ),
    EventCategory.DISRUPTION: (
        "outage", "closure", "closed", "delay", "delays", "roadblock", "blackout",
        "traffic", "cancellation", "cancelled", "disruption", "maintenance",
    ),
}


class EventClassifier(Protocol):
    def classify(self, item: NewsItem) -> str: ...


class KeywordRuleClassifier:
    def __init__(self, keywords: Optional[dict[str, tuple[str, ...]]] = None):
        table = keywords or DEFAULT_CATEGORY_KEYWORDS
        self._patterns = [
            (category, re.compile(
                r"\b(?:" + "|".join(re.escape(w) for w in table.get(category, ())) + r")\b",
                re.IGNORECASE,
            ))
            for category in CATEGORY_PRECEDENCE
            if table.get(category)
        ]

    def classify(self, item: NewsItem) -> str:
        text = item.headline + " " + item.summary
        for category, pattern in self._patterns:
            if pattern.search(text):
                return category
        return EventCategory.OTHER


_DEFAULT_CLASSIFIER = KeywordRuleClassifier()


def classify_event(item: NewsItem, classifier: Optional[EventClassifier] = None) -> str:
    return (classifier or _DEFAULT_CLASSIFIER).classify(item)
