"""Context bundle assembly: attributes plus gated location context."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from ..kg import EdgeKind, EventStatus, KnowledgeGraph, NodeKind
from ..linking.types import MessageMetadata
from .intent import (
    IntentClassifier,
    RuleLocationGate,
    classify_intent,
    needs_location_context,
)
from .ranking import ATTRIBUTE_HALF_LIFE_DAYS, AffinityTable, RankedAttribute, rank_attributes

DEFAULT_TOP_K = 5

_CULTURAL_KEYS = ("cultural_greeting", "cultural_note")


@dataclass(frozen=True)
class ActiveEvent:
    node: str
    category: str
    status: str
    name: str


@dataclass
class LocationContext:
    location: str
    active_events: list[ActiveEvent] = field(default_factory=list)
    cultural_notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "location": self.location,
            "active_events": [
                {"node": e.node, "category": e.category, "status": e.status, "name": e.name}
                for e in self.active_events
            ],
            "cultural_notes": list(self.cultural_notes),
        }


@dataclass
class ContextBundle:
    recipient: str
    intent: str
    attributes: list[RankedAttribute] = field(default_factory=list)
    location_context: Optional[LocationContext] = None

    def as_dict(self) -> dict:
        return {
            "recipient": self.recipient,
            "intent": self.intent,
            "attributes": [
                {"key": a.key, "value": a.value, "source_node": a.source_node,
                 "relevance": a.relevance}
                for a in self.attributes
            ],
            "location_context": (self.location_context.as_dict()
                                 if self.location_context else None),
        }


def active_events_for(location: str, kg: KnowledgeGraph,
                      now: Optional[datetime] = None) -> list[ActiveEvent]:
    """Upcoming/ongoing events at a location, freshest first then by id."""
    incident = kg.neighbors(location, EdgeKind.OCCURS_AT, "in")
    events = []
    for edge, node in incident:
        if node.kind != NodeKind.EVENT:
            continue
        status = node.attribute("status")
        if status is None or status.value not in EventStatus.ACTIVE:
            continue
        category = node.attribute("category")
        events.append((node.last_seen, node.id, ActiveEvent(
            node=node.id,
            category=category.value if category else "Other",
            status=status.value,
            name=node.canonical_name,
        )))
    events.sort(key=lambda item: (-item[0].timestamp(), item[1]))
    return [event for _, _, event in events]


def _cultural_notes(location: str, kg: KnowledgeGraph) -> list[str]:
    node = kg.get_node(location)
    notes = [(a.key, a.value) for a in node.attributes if a.key in _CULTURAL_KEYS]
    return [value for _, value in sorted(notes)]


def _resolve_location(recipient: str, metadata: MessageMetadata,
                      kg: KnowledgeGraph) -> Optional[str]:
    """Recipient profile location first, sender-header location as fallback."""
    targets = kg.neighbors(recipient, EdgeKind.LOCATED_IN, "out")
    if targets:
        return targets[0][1].id
    if metadata.sender_location:
        hits = kg.find_by_name(metadata.sender_location, NodeKind.LOCATION)
        if hits:
            return hits[0].id
    return None


def build_context_bundle(
    recipient: str,
    message: str,
    metadata: MessageMetadata,
    k: int,
    kg: KnowledgeGraph,
    now: datetime,
    affinity: Optional[AffinityTable] = None,
    classifier: Optional[IntentClassifier] = None,
    gate: Optional[RuleLocationGate] = None,
    half_life_days: float = ATTRIBUTE_HALF_LIFE_DAYS,
) -> ContextBundle:
    intent = classify_intent(message, metadata, classifier)
    bundle = ContextBundle(
        recipient=recipient,
        intent=intent,
        attributes=rank_attributes(recipient, intent, k, kg, now, affinity, half_life_days),
    )
    if needs_location_context(intent, gate):
        location = _resolve_location(recipient, metadata, kg)
        if location is not None:
            bundle.location_context = LocationContext(
                location=location,
                active_events=active_events_for(location, kg, now),
                cultural_notes=_cultural_notes(location, kg),
            )
    return bundle


class ContextRetriever:
    """Config-bound facade used by the draft pipeline and the service."""

    def __init__(
        self,
        kg: KnowledgeGraph,
        k: int = DEFAULT_TOP_K,
        affinity: Optional[AffinityTable] = None,
        classifier: Optional[IntentClassifier] = None,
        gate: Optional[RuleLocationGate] = None,
        half_life_days: float = ATTRIBUTE_HALF_LIFE_DAYS,
    ):
        self.kg = kg
        self.k = k
        self.affinity = affinity or AffinityTable()
        self.classifier = classifier
        self.gate = gate
        self.half_life_days = half_life_days

    def build(self, recipient: str, message: str, metadata: MessageMetadata,
              now: datetime) -> ContextBundle:
        return build_context_bundle(
            recipient, message, metadata, self.k, self.kg, now,
            affinity=self.affinity, classifier=self.classifier, gate=self.gate,
            half_life_days=self.half_life_days,
        )
