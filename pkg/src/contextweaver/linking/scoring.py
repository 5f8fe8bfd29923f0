"""Candidate generation and the linear feature scorer.

The scorer is a transparent stand-in for a learned matcher: five features
combined with fixed weights, clamped to [0, 1]. It lives behind the same
call shape a trained model would use, so swapping one in later does not
touch the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from math import exp
from typing import Optional

from ..kg import EdgeKind, KnowledgeGraph, Node, NodeKind, normalize_name
from ..ingest.embedding import char_ngrams
from ..timeutil import utcnow
from .types import EntityMention, FeatureVector, LinkCandidate, MentionKind, MessageMetadata

DEFAULT_CANDIDATE_FLOOR = 0.3
DEFAULT_ACCEPT_FLOOR = 0.5
DEFAULT_AMBIGUITY_MARGIN = 0.15

RECENCY_HALF_LIFE_DAYS = 30.0


@dataclass(frozen=True)
class ScoringWeights:
    name_sim: float = 0.45
    alias_exact: float = 0.20
    kind_match: float = 0.10
    location_prior: float = 0.15
    recency: float = 0.10

    def dot(self, features: FeatureVector) -> float:
        return (self.name_sim * features.name_sim
                + self.alias_exact * features.alias_exact
                + self.kind_match * features.kind_match
                + self.location_prior * features.location_prior
                + self.recency * features.recency)


def trigram_jaccard(a: str, b: str) -> float:
    """Jaccard overlap of character 3-gram sets (short strings gram whole)."""
    grams_a = set(char_ngrams(a))
    grams_b = set(char_ngrams(b))
    if not grams_a and not grams_b:
        return 1.0
    if not grams_a or not grams_b:
        return 0.0
    return len(grams_a & grams_b) / len(grams_a | grams_b)


def name_similarity(surface: str, node: Node) -> float:
    """Best trigram Jaccard between the normalized surface and any alias."""
    normalized = normalize_name(surface)
    return max(
        (trigram_jaccard(normalized, alias) for alias in node.normalized_aliases()),
        default=0.0,
    )


def generate_candidates(
    mention: EntityMention,
    kg: KnowledgeGraph,
    candidate_floor: float = DEFAULT_CANDIDATE_FLOOR,
) -> list[LinkCandidate]:
    """Unscored candidates: kind-compatible nodes with enough name overlap."""
    kinds = MentionKind.COMPATIBLE.get(mention.mention_kind, ())
    candidates = []
    for node in kg.nodes():
        if node.kind not in kinds:
            continue
        sim = name_similarity(mention.surface, node)
        if sim < candidate_floor:
            continue
        normalized = normalize_name(mention.surface)
        candidates.append(LinkCandidate(
            mention=mention,
            node=node.id,
            features=FeatureVector(
                name_sim=sim,
                alias_exact=1.0 if normalized in node.normalized_aliases() else 0.0,
                kind_match=1.0,
            ),
        ))
    return candidates  # kg.nodes() is id-sorted, so order is deterministic


def _located_in_targets(kg: KnowledgeGraph, node_id: str) -> set[str]:
    return {far.id for edge, far in kg.neighbors(node_id, EdgeKind.LOCATED_IN, "out")}


def _sender_location_ids(metadata: MessageMetadata, kg: KnowledgeGraph) -> set[str]:
    ids: set[str] = set()
    if metadata.sender_location:
        ids |= {n.id for n in kg.find_by_name(metadata.sender_location, NodeKind.LOCATION)}
    if metadata.sender_id and kg.has_node(metadata.sender_id):
        ids |= _located_in_targets(kg, metadata.sender_id)
    return ids


def location_prior(candidate_node: Node, metadata: MessageMetadata,
                   kg: KnowledgeGraph) -> float:
    """1 if the candidate shares a location with the sender profile or header."""
    sender_ids = _sender_location_ids(metadata, kg)
    if not sender_ids:
        return 0.0
    if candidate_node.kind == NodeKind.LOCATION:
        candidate_ids = {candidate_node.id}
    else:
        candidate_ids = _located_in_targets(kg, candidate_node.id)
    return 1.0 if candidate_ids & sender_ids else 0.0


def recency_score(last_seen: datetime, now: datetime) -> float:
    delta_days = max(0.0, (now - last_seen).total_seconds() / 86400.0)
    return exp(-delta_days / RECENCY_HALF_LIFE_DAYS)


def score_candidate(
    candidate: LinkCandidate,
    metadata: MessageMetadata,
    weights: Optional[ScoringWeights] = None,
    kg: Optional[KnowledgeGraph] = None,
    now: Optional[datetime] = None,
) -> LinkCandidate:
    """Fill the remaining features and set score = clamp(weights . features)."""
    weights = weights or ScoringWeights()
    now = now or utcnow()
    if kg is not None:
        node = kg.get_node(candidate.node)
        candidate.features.location_prior = location_prior(node, metadata, kg)
        candidate.features.recency = recency_score(node.last_seen, now)
    candidate.raw_score = weights.dot(candidate.features)
    candidate.score = min(1.0, max(0.0, candidate.raw_score))
    return candidate
