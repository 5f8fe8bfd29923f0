"""Entity mention extraction, candidate scoring, and human disambiguation."""

from .types import (
    EntityMention,
    FeatureVector,
    LinkCandidate,
    LinkOutcome,
    MentionKind,
    MessageMetadata,
    REJECT,
)
from .extract import GazetteerExtractor, MentionExtractor, extract_mentions
from .scoring import (
    DEFAULT_ACCEPT_FLOOR,
    DEFAULT_AMBIGUITY_MARGIN,
    DEFAULT_CANDIDATE_FLOOR,
    ScoringWeights,
    generate_candidates,
    score_candidate,
    trigram_jaccard,
)
from .resolve import resolve
from .queue import AmbiguityEntry, AmbiguityQueue
from .linker import EntityLinker, MentionLink

__all__ = [
    "AmbiguityEntry",
    "AmbiguityQueue",
    "DEFAULT_ACCEPT_FLOOR",
    "DEFAULT_AMBIGUITY_MARGIN",
    "DEFAULT_CANDIDATE_FLOOR",
    "EntityLinker",
    "EntityMention",
    "FeatureVector",
    "GazetteerExtractor",
    "LinkCandidate",
    "LinkOutcome",
    "MentionExtractor",
    "MentionKind",
    "MentionLink",
    "MessageMetadata",
    "REJECT",
    "ScoringWeights",
    "extract_mentions",
    "generate_candidates",
    "resolve",
    "score_candidate",
    "trigram_jaccard",
]
