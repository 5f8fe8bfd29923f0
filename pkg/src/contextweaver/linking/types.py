"""Mention, candidate, and outcome types for the linking pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import ValidationError
from ..kg import NodeKind

# Sentinel for an explicit human rejection of every candidate.
REJECT = "__reject__"


class MentionKind:
    PERSON = "person"
    LOCATION = "location"
    ORGANIZATION = "organization"
    ALL = (PERSON, LOCATION, ORGANIZATION)

    # Node kinds a mention kind may link to. Organizations are modeled as
    # affiliation topics; the default extractor does not emit them.
    COMPATIBLE = {
        PERSON: (NodeKind.PERSON,),
        LOCATION: (NodeKind.LOCATION,),
        ORGANIZATION: (NodeKind.TOPIC,),
    }


@dataclass(frozen=True)
class MessageMetadata:
    sender_id: Optional[str] = None
    sender_location: Optional[str] = None
    formality: str = "unknown"
    channel: str = ""

    def validate(self) -> None:
        if self.formality not in ("formal", "informal", "unknown"):
            raise ValidationError(f"formality {self.formality!r} invalid")


@dataclass(frozen=True)
class EntityMention:
    surface: str
    start: int
    end: int
    mention_kind: str
    metadata: MessageMetadata = field(default_factory=MessageMetadata)

    def validate(self, message: str) -> None:
        if not (0 <= self.start < self.end <= len(message)):
            raise ValidationError(f"mention span ({self.start}, {self.end}) out of range")
        if message[self.start:self.end] != self.surface:
            raise ValidationError(
                f"mention surface {self.surface!r} does not equal the message slice"
            )
        if self.mention_kind not in MentionKind.ALL:
            raise ValidationError(f"unknown mention kind {self.mention_kind!r}")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class FeatureVector:
    name_sim: float = 0.0
    alias_exact: float = 0.0
    kind_match: float = 0.0
    location_prior: float = 0.0
    recency: float = 0.0

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.name_sim, self.alias_exact, self.kind_match,
                self.location_prior, self.recency)

    def as_dict(self) -> dict[str, float]:
        return {
            "name_sim": self.name_sim,
            "alias_exact": self.alias_exact,
            "kind_match": self.kind_match,
            "location_prior": self.location_prior,
            "recency": self.recency,
        }


@dataclass
class LinkCandidate:
    mention: EntityMention
    node: str
    features: FeatureVector = field(default_factory=FeatureVector)
    raw_score: float = 0.0  # weighted sum before clamping
    score: float = 0.0      # clamp(raw_score, 0, 1)


@dataclass
class LinkOutcome:
    """Linked(node) | Ambiguous(candidates, queue_id) | Unlinked."""

    status: str  # "linked" | "ambiguous" | "unlinked"
    node: Optional[str] = None
    candidates: list[LinkCandidate] = field(default_factory=list)
    queue_id: Optional[str] = None

    @classmethod
    def linked(cls, node: str) -> "LinkOutcome":
        return cls(status="linked", node=node)

    @classmethod
    def ambiguous(cls, candidates: list[LinkCandidate],
                  queue_id: Optional[str] = None) -> "LinkOutcome":
        if len(candidates) < 2:
            raise ValidationError("ambiguous outcomes need at least two candidates")
        return cls(status="ambiguous", candidates=candidates, queue_id=queue_id)

    @classmethod
    def unlinked(cls) -> "LinkOutcome":
        return cls(status="unlinked")

    @property
    def is_linked(self) -> bool:
        return self.status == "linked"

    @property
    def is_ambiguous(self) -> bool:
        return self.status == "ambiguous"

    @property
    def is_unlinked(self) -> bool:
        return self.status == "unlinked"
