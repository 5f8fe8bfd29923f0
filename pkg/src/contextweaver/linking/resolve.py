"""Outcome decision over scored candidates.

Rules: no candidates or a top score under the accept floor is Unlinked;
two or more candidates within the ambiguity margin of each other (or an
exact tie) escalate to the human queue; otherwise the top candidate links.
"""

from __future__ import annotations

from typing import Optional, TYPE_CHECKING

from .scoring import DEFAULT_ACCEPT_FLOOR, DEFAULT_AMBIGUITY_MARGIN
from .types import EntityMention, LinkCandidate, LinkOutcome

if TYPE_CHECKING:
    from .queue import AmbiguityQueue


def resolve(
    candidates: list[LinkCandidate],
    accept_floor: float = DEFAULT_ACCEPT_FLOOR,
    ambiguity_margin: float = DEFAULT_AMBIGUITY_MARGIN,
    queue: Optional["AmbiguityQueue"] = None,
    message_id: Optional[str] = None,
    mention: Optional[EntityMention] = None,
) -> LinkOutcome:
    ranked = sorted(candidates, key=lambda c: (-c.score, c.node))
    if not ranked:
        return LinkOutcome.unlinked()
    top = ranked[0]
    if top.score < accept_floor:
        return LinkOutcome.unlinked()
    if len(ranked) >= 2:
        runner_up = ranked[1]
        # exact ties are always ambiguous, even with a zero margin
        if top.score == runner_up.score or (top.score - runner_up.score) < ambiguity_margin:
            queue_id = None
            if queue is not None:
                queue_id = queue.enqueue(message_id or "", mention or top.mention, ranked)
            return LinkOutcome.ambiguous(ranked, queue_id)
    return LinkOutcome.linked(top.node)
