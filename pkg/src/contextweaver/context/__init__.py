"""Intent gating and top-K attribute context assembly."""

from .intent import (
    DEFAULT_INTENT_RULES,
    DEFAULT_LOCATION_GATE,
    MessageIntent,
    RuleIntentClassifier,
    RuleLocationGate,
    classify_intent,
    needs_location_context,
)
from .ranking import (
    ATTRIBUTE_HALF_LIFE_DAYS,
    AffinityTable,
    DEFAULT_AFFINITY,
    RankedAttribute,
    rank_attributes,
)
from .bundle import (
    ActiveEvent,
    ContextBundle,
    ContextRetriever,
    LocationContext,
    active_events_for,
    build_context_bundle,
)

__all__ = [
    "ATTRIBUTE_HALF_LIFE_DAYS",
    "ActiveEvent",
    "AffinityTable",
    "ContextBundle",
    "ContextRetriever",
    "DEFAULT_AFFINITY",
    "DEFAULT_INTENT_RULES",
    "DEFAULT_LOCATION_GATE",
    "LocationContext",
    "MessageIntent",
    "RankedAttribute",
    "RuleIntentClassifier",
    "RuleLocationGate",
    "active_events_for",
    "build_context_bundle",
    "classify_intent",
    "needs_location_context",
    "rank_attributes",
]
