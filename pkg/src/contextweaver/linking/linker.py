"""End-to-end linking for one message: extract, score, resolve, escalate."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Optional

from ..kg import KnowledgeGraph
from ..timeutil import utcnow
from .extract import GazetteerExtractor, MentionExtractor, extract_mentions
from .queue import AmbiguityQueue
from .resolve import resolve
from .scoring import (
    DEFAULT_ACCEPT_FLOOR,
    DEFAULT_AMBIGUITY_MARGIN,
    DEFAULT_CANDIDATE_FLOOR,
    ScoringWeights,
    generate_candidates,
    score_candidate,
)
from .types import EntityMention, LinkOutcome, MessageMetadata, REJECT


@dataclass
class MentionLink:
    mention: EntityMention
    outcome: LinkOutcome


class EntityLinker:
    """Pure given a KG snapshot, except for enqueuing ambiguities."""

    def __init__(
        self,
        kg: KnowledgeGraph,
        queue: Optional[AmbiguityQueue] = None,
        extractor: Optional[MentionExtractor] = None,
        weights: Optional[ScoringWeights] = None,
        accept_floor: float = DEFAULT_ACCEPT_FLOOR,
        ambiguity_margin: float = DEFAULT_AMBIGUITY_MARGIN,
        candidate_floor: float = DEFAULT_CANDIDATE_FLOOR,
    ):
        self.kg = kg
        self.queue = queue
        self.extractor = extractor or GazetteerExtractor(kg)
        self.weights = weights or ScoringWeights()
        self.accept_floor = accept_floor
        self.ambiguity_margin = ambiguity_margin
        self.candidate_floor = candidate_floor

    def link_message(
        self,
        message: str,
        metadata: MessageMetadata,
        message_id: Optional[str] = None,
        overrides: Optional[dict[tuple[int, int], str]] = None,
        now: Optional[datetime] = None,
    ) -> list[MentionLink]:
        """Link every mention; human overrides (span -> node/REJECT) win outright."""
        now = now or utcnow()
        overrides = overrides or {}
        links = []
        for mention in extract_mentions(message, metadata, self.extractor):
            decided = overrides.get(mention.span)
            if decided is not None:
                outcome = (LinkOutcome.unlinked() if decided == REJECT
                           else LinkOutcome.linked(decided))
                links.append(MentionLink(mention, outcome))
                continue
            candidates = [
                score_candidate(c, metadata, self.weights, self.kg, now)
                for c in generate_candidates(mention, self.kg, self.candidate_floor)
            ]
            outcome = resolve(
                candidates,
                accept_floor=self.accept_floor,
                ambiguity_margin=self.ambiguity_margin,
                queue=self.queue,
                message_id=message_id,
                mention=mention,
            )
            links.append(MentionLink(mention, outcome))
        return links
