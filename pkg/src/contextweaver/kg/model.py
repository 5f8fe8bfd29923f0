"""Graph element types: nodes, edges, attributes, and their validity rules.

The ontology is fixed for v1: four node kinds, six edge kinds, and the
endpoint-compatibility rules enforced in :func:`validate_edge_endpoints`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from ..errors import ValidationError
from ..timeutil import ensure_utc, utcnow

# Node ids are plain strings; they stay opaque outside the store.
NodeId = str


class NodeKind:
    PERSON = "Person"
    LOCATION = "Location"
    EVENT = "Event"
    TOPIC = "Topic"
    ALL = (PERSON, LOCATION, EVENT, TOPIC)


class EdgeKind:
    LOCATED_IN = "LOCATED_IN"
    INTERESTED_IN = "INTERESTED_IN"
    HAS_SKILL = "HAS_SKILL"
    OCCURS_AT = "OCCURS_AT"
    AFFILIATED_WITH = "AFFILIATED_WITH"
    ATTENDED = "ATTENDED"
    ALL = (LOCATED_IN, INTERESTED_IN, HAS_SKILL, OCCURS_AT, AFFILIATED_WITH, ATTENDED)


class AttributeSource:
    PROFILE = "profile"
    LOCATION_CORPUS = "location_corpus"
    FEED = "feed"
    SYSTEM = "system"
    ALL = (PROFILE, LOCATION_CORPUS, FEED, SYSTEM)


class EventStatus:
    UPCOMING = "upcoming"
    ONGOING = "ongoing"
    CONCLUDED = "concluded"
    ALL = (UPCOMING, ONGOING, CONCLUDED)
    ACTIVE = (UPCOMING, ONGOING)


# Endpoint compatibility per edge kind; kinds absent here are unrestricted.
_EDGE_ENDPOINT_RULES = {
    EdgeKind.OCCURS_AT: (NodeKind.EVENT, NodeKind.LOCATION),
    EdgeKind.LOCATED_IN: (NodeKind.PERSON, NodeKind.LOCATION),
    EdgeKind.INTERESTED_IN: (NodeKind.PERSON, NodeKind.TOPIC),
    EdgeKind.HAS_SKILL: (NodeKind.PERSON, NodeKind.TOPIC),
}

_WS_RE = re.compile(r"\s+")


def normalize_name(name: str) -> str:
    """Case-fold, trim, and collapse internal whitespace. No transliteration."""
    return _WS_RE.sub(" ", name.strip()).casefold()


@dataclass(frozen=True)
class Attribute:
    key: str
    value: str
    source: str
    observed_at: datetime

    def validate(self, now: Optional[datetime] = None) -> None:
        if not self.key:
            raise ValidationError("attribute key must be non-empty")
        if not self.value:
            raise ValidationError(f"attribute {self.key!r}: value must be non-empty")
        if self.source not in AttributeSource.ALL:
            raise ValidationError(f"attribute {self.key!r}: unknown source {self.source!r}")
        if self.observed_at > (now or utcnow()):
            raise ValidationError(f"attribute {self.key!r}: observed_at is in the future")


@dataclass
class Node:
    id: NodeId
    kind: str
    canonical_name: str
    aliases: set[str] = field(default_factory=set)
    attributes: list[Attribute] = field(default_factory=list)
    created_at: datetime = field(default_factory=utcnow)
    last_seen: datetime = field(default_factory=utcnow)

    def __post_init__(self):
        self.created_at = ensure_utc(self.created_at)
        self.last_seen = ensure_utc(self.last_seen)
        # canonical_name is always a member of the alias set
        if self.canonical_name:
            self.aliases = set(self.aliases) | {self.canonical_name}

    def validate(self, now: Optional[datetime] = None) -> None:
        if not self.id:
            raise ValidationError("node id must be non-empty")
        if self.kind not in NodeKind.ALL:
            raise ValidationError(f"node {self.id}: unknown kind {self.kind!r}")
        if not self.canonical_name:
            raise ValidationError(f"node {self.id}: canonical_name must be non-empty")
        seen: set[tuple[str, str]] = set()
        for attr in self.attributes:
            attr.validate(now)
            pair = (attr.key, attr.source)
            if pair in seen:
                raise ValidationError(
                    f"node {self.id}: duplicate attribute for (key, source) {pair}"
                )
            seen.add(pair)
        if self.kind == NodeKind.EVENT:
            status = self.attribute("status")
            if status is None or status.value not in EventStatus.ALL:
                raise ValidationError(
                    f"node {self.id}: Event nodes need a status attribute in {EventStatus.ALL}"
                )

    def attribute(self, key: str, source: Optional[str] = None) -> Optional[Attribute]:
        """Most recently observed attribute for a key (optionally pinned to a source)."""
        best: Optional[Attribute] = None
        for attr in self.attributes:
            if attr.key != key:
                continue
            if source is not None and attr.source != source:
                continue
            if best is None or attr.observed_at > best.observed_at:
                best = attr
        return best

    def attribute_values(self, key: str) -> list[str]:
        return [a.value for a in sorted(self.attributes, key=lambda a: (a.key, a.source)) if a.key == key]

    def normalized_aliases(self) -> set[str]:
        return {normalize_name(a) for a in self.aliases}

    def copy(self) -> "Node":
        return Node(
            id=self.id,
            kind=self.kind,
            canonical_name=self.canonical_name,
            aliases=set(self.aliases),
            attributes=list(self.attributes),
            created_at=self.created_at,
            last_seen=self.last_seen,
        )


@dataclass(frozen=True)
class Edge:
    src: NodeId
    dst: NodeId
    kind: str
    weight: float = 1.0
    created_at: datetime = field(default_factory=utcnow)

    def validate(self) -> None:
        if self.kind not in EdgeKind.ALL:
            raise ValidationError(f"unknown edge kind {self.kind!r}")
        if not (0.0 <= self.weight <= 1.0):
            raise ValidationError(f"edge weight {self.weight} outside [0, 1]")
        if not self.src or not self.dst:
            raise ValidationError("edge endpoints must be non-empty node ids")

    def key(self) -> tuple[NodeId, NodeId, str]:
        return (self.src, self.dst, self.kind)


def validate_edge_endpoints(edge: Edge, src_kind: str, dst_kind: str) -> None:
    rule = _EDGE_ENDPOINT_RULES.get(edge.kind)
    if rule is None:
        return
    want_src, want_dst = rule
    if src_kind != want_src or dst_kind != want_dst:
        raise ValidationError(
            f"{edge.kind} edges must go {want_src}->{want_dst}, got {src_kind}->{dst_kind}"
        )
