"""Default mention extraction: KG-alias gazetteer plus a salutation rule.

The gazetteer scans the message left to right, matching the longest token
window whose normalized text equals a Person or Location alias; matches
never overlap. A leading "Hi <Name>," style salutation contributes a person
mention even when the name is not a known alias, so unknown recipients
surface as explicit unlinked outcomes instead of silently vanishing.
LLM-backed extractors can plug in behind the same interface.
"""

from __future__ import annotations

import re
from typing import Optional, Protocol

from ..kg import KnowledgeGraph, NodeKind, normalize_name
from .types import EntityMention, MentionKind, MessageMetadata

_TOKEN_RE = re.compile(r"[\w'&.-]+", re.UNICODE)

_SALUTATION_RE = re.compile(
    r"^\s*(?:hi|hello|hey|dear)\s+((?:[A-Z][\w'.-]*)(?:\s+[A-Z][\w'.-]*)?)\s*[,.!;:]",
    re.IGNORECASE,
)

# Node kind -> mention kind emitted by the gazetteer. Person outranks
# Location when one alias names nodes of both kinds.
_GAZETTEER_KINDS = ((NodeKind.PERSON, MentionKind.PERSON),
                    (NodeKind.LOCATION, MentionKind.LOCATION))


class MentionExtractor(Protocol):
    def extract(self, message: str, metadata: MessageMetadata) -> list[EntityMention]: ...


class GazetteerExtractor:
    def __init__(self, kg: KnowledgeGraph):
        self.kg = kg

    def _alias_index(self) -> tuple[dict[str, str], int]:
        """Normalized alias -> mention kind, plus the longest alias token count."""
        index: dict[str, str] = {}
        max_tokens = 1
        for node_kind, mention_kind in _GAZETTEER_KINDS:
            for node in self.kg.nodes(node_kind):
                for alias in node.aliases:
                    normalized = normalize_name(alias)
                    if not normalized:
                        continue
                    index.setdefault(normalized, mention_kind)
                    max_tokens = max(max_tokens, len(normalized.split()))
        return index, max_tokens

    def extract(self, message: str, metadata: MessageMetadata) -> list[EntityMention]:
        index, max_tokens = self._alias_index()
        tokens = [(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(message)]
        mentions: list[EntityMention] = []
        i = 0
        while i < len(tokens):
            matched = None
            for width in range(min(max_tokens, len(tokens) - i), 0, -1):
                start = tokens[i][1]
                end = tokens[i + width - 1][2]
                candidate = normalize_name(message[start:end])
                if candidate in index:
                    matched = (start, end, index[candidate], width)
                    break
            if matched is None:
                i += 1
                continue
            start, end, kind, width = matched
            mentions.append(EntityMention(
                surface=message[start:end], start=start, end=end,
                mention_kind=kind, metadata=metadata,
            ))
            i += width
        salutation = self._salutation_mention(message, metadata)
        if salutation is not None and not any(
            salutation.start < m.end and m.start < salutation.end for m in mentions
        ):
            mentions.append(salutation)
            mentions.sort(key=lambda m: m.start)
        return mentions

    @staticmethod
    def _salutation_mention(message: str,
                            metadata: MessageMetadata) -> Optional[EntityMention]:
        match = _SALUTATION_RE.match(message)
        if not match:
            return None
        return EntityMention(
            surface=match.group(1), start=match.start(1), end=match.end(1),
            mention_kind=MentionKind.PERSON, metadata=metadata,
        )


def extract_mentions(message: str, metadata: MessageMetadata,
                     extractor: MentionExtractor) -> list[EntityMention]:
    """Run the configured extractor and validate every span it produced."""
    mentions = extractor.extract(message, metadata)
    for mention in mentions:
        mention.validate(message)
    return mentions
