"""Top-K attribute ranking.

Candidate attributes are the recipient's own attributes plus rows derived
from INTERESTED_IN / HAS_SKILL / ATTENDED neighbors (keyed interest, skill,
attended_event; the edge creation time stands in for observed_at).
Relevance is affinity(intent, key) * exp(-age_days / 90); zero-affinity
rows never surface. Tie-break is (relevance desc, key asc, value asc,
source_node asc).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from math import exp
from typing import Optional

from ..errors import ConfigError
from ..kg import EdgeKind, KnowledgeGraph
from .intent import MessageIntent

ATTRIBUTE_HALF_LIFE_DAYS = 90.0

_EDGE_ATTRIBUTE_KEYS = {
    EdgeKind.INTERESTED_IN: "interest",
    EdgeKind.HAS_SKILL: "skill",
    EdgeKind.ATTENDED: "attended_event",
}

# Declared attribute-key classes the affinity tables may reference.
AFFINITY_KEYS = (
    "interest", "skill", "course", "attended_event", "role", "specialty",
    "preference", "status", "category", "topics", "description",
    "cultural_greeting", "cultural_note",
)

DEFAULT_AFFINITY: dict[str, dict[str, float]] = {
    MessageIntent.APPOINTMENT_REMINDER: {
        "specialty": 0.9, "interest": 0.6, "preference": 0.5, "attended_event": 0.3,
        "skill": 0.2, "course": 0.1, "role": 0.2,
        "status": 0.0, "category": 0.0, "topics": 0.0, "description": 0.0,
        "cultural_greeting": 0.0, "cultural_note": 0.0, "default": 0.2,
    },
    MessageIntent.IN_PERSON_MEETING: {
        "role": 0.7, "attended_event": 0.6, "interest": 0.5, "skill": 0.5,
        "specialty": 0.4, "course": 0.3, "preference": 0.3,
        "status": 0.0, "category": 0.0, "topics": 0.0, "description": 0.0,
        "cultural_greeting": 0.0, "cultural_note": 0.0, "default": 0.2,
    },
    MessageIntent.RECRUITING: {
        "skill": 0.9, "interest": 0.7, "role": 0.6, "course": 0.6,
        "attended_event": 0.5, "specialty": 0.5, "preference": 0.2,
        "status": 0.0, "category": 0.0, "topics": 0.0, "description": 0.0,
        "cultural_greeting": 0.0, "cultural_note": 0.0, "default": 0.2,
    },
    MessageIntent.JOB_EXPLORATION: {
        "skill": 0.8, "interest": 0.7, "course": 0.5, "role": 0.5,
        "attended_event": 0.3, "specialty": 0.4, "preference": 0.2,
        "status": 0.0, "category": 0.0, "topics": 0.0, "description": 0.0,
        "cultural_greeting": 0.0, "cultural_note": 0.0, "default": 0.2,
    },
    MessageIntent.ONBOARDING: {
        "role": 0.8, "skill": 0.7, "interest": 0.7, "preference": 0.5,
        "course": 0.4, "attended_event": 0.3, "specialty": 0.3,
        "status": 0.0, "category": 0.0, "topics": 0.0, "description": 0.0,
        "cultural_greeting": 0.0, "cultural_note": 0.0, "default": 0.3,
    },
    MessageIntent.EDUCATION_REMINDER: {
        "course": 0.9, "interest": 0.8, "skill": 0.6, "attended_event": 0.4,
        "specialty": 0.3, "role": 0.2, "preference": 0.3,
        "status": 0.0, "category": 0.0, "topics": 0.0, "description": 0.0,
        "cultural_greeting": 0.0, "cultural_note": 0.0, "default": 0.2,
    },
    MessageIntent.FOLLOW_UP_CARE: {
        "specialty": 0.8, "preference": 0.8, "interest": 0.6, "attended_event": 0.3,
        "skill": 0.2, "course": 0.1, "role": 0.1,
        "status": 0.0, "category": 0.0, "topics": 0.0, "description": 0.0,
        "cultural_greeting": 0.0, "cultural_note": 0.0, "default": 0.2,
    },
    MessageIntent.OTHER: {
        "status": 0.0, "category": 0.0, "topics": 0.0, "description": 0.0,
        "cultural_greeting": 0.0, "cultural_note": 0.0, "default": 0.3,
    },
}


class AffinityTable:
    """intent x attribute-key-class -> [0, 1], with a per-intent default."""

    def __init__(self, table: Optional[dict[str, dict[str, float]]] = None):
        self.table = {intent: dict(row) for intent, row in (table or DEFAULT_AFFINITY).items()}
        for intent, row in self.table.items():
            if intent not in MessageIntent.ALL:
                raise ConfigError("context.affinity", f"unknown intent {intent!r}")
            for key, weight in row.items():
                if key != "default" and key not in AFFINITY_KEYS:
                    raise ConfigError("context.affinity",
                                      f"{intent}: unknown attribute key {key!r}")
                if not isinstance(weight, (int, float)) or not (0.0 <= weight <= 1.0):
                    raise ConfigError("context.affinity",
                                      f"{intent}.{key}: weight {weight!r} outside [0, 1]")
            if "default" not in row:
                raise ConfigError("context.affinity", f"{intent}: missing 'default' weight")
        missing = set(MessageIntent.ALL) - set(self.table)
        if missing:
            raise ConfigError("context.affinity", f"missing intents: {sorted(missing)}")

    def weight(self, intent: str, key: str) -> float:
        row = self.table[intent]
        return row.get(key, row["default"])


@dataclass(frozen=True)
class RankedAttribute:
    key: str
    value: str
    source_node: str
    relevance: float


def _decay(observed_at: datetime, now: datetime,
           half_life_days: float = ATTRIBUTE_HALF_LIFE_DAYS) -> float:
    age_days = max(0.0, (now - observed_at).total_seconds() / 86400.0)
    return exp(-age_days / half_life_days)


def rank_attributes(
    recipient: str,
    intent: str,
    k: int,
    kg: KnowledgeGraph,
    now: datetime,
    affinity: Optional[AffinityTable] = None,
    half_life_days: float = ATTRIBUTE_HALF_LIFE_DAYS,
) -> list[RankedAttribute]:
    """Top K candidate attributes by relevance under the documented tie-break."""
    if k < 0:
        raise ValueError("k must be >= 0")
    affinity = affinity or AffinityTable()
    node = kg.get_node(recipient)  # raises NotFoundError for unknown recipients
    rows: list[tuple[RankedAttribute, datetime]] = []
    for attr in node.attributes:
        rows.append((RankedAttribute(attr.key, attr.value, node.id, 0.0), attr.observed_at))
    for edge_kind, key in sorted(_EDGE_ATTRIBUTE_KEYS.items()):
        for edge, far in kg.neighbors(recipient, edge_kind, "out"):
            rows.append((RankedAttribute(key, far.canonical_name, far.id, 0.0),
                         edge.created_at))
    ranked = []
    for row, observed_at in rows:
        relevance = affinity.weight(intent, row.key) * _decay(observed_at, now, half_life_days)
        if relevance > 0.0:
            ranked.append(RankedAttribute(row.key, row.value, row.source_node, relevance))
    ranked.sort(key=lambda r: (-r.relevance, r.key, r.value, r.source_node))
    return ranked[:k]
