"""Linearizable ambiguity queue with append-only journaling.

Open entries are rebuilt on startup by replaying the entry journal against
the resolution journal; resolutions carry actor and timestamp so every
human decision is auditable.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from ..errors import ConflictError, NotFoundError, ValidationError
from ..jsonl import JsonlAppendLog
from ..timeutil import from_rfc3339, to_rfc3339, utcnow
from .types import EntityMention, LinkCandidate, LinkOutcome, MessageMetadata, REJECT


@dataclass
class AmbiguityEntry:
    queue_id: str
    message_id: str
    mention: EntityMention
    candidates: list[LinkCandidate]  # score-descending
    created_at: datetime
    status: str = "open"  # open | resolved
    chosen: Optional[str] = None  # node id, or REJECT
    resolved_by: Optional[str] = None
    resolved_at: Optional[datetime] = None

    def as_dict(self) -> dict:
        return {
            "queue_id": self.queue_id,
            "message_id": self.message_id,
            "mention": {
                "surface": self.mention.surface,
                "start": self.mention.start,
                "end": self.mention.end,
                "mention_kind": self.mention.mention_kind,
            },
            "candidates": [
                {
                    "node": c.node,
                    "score": c.score,
                    "features": c.features.as_dict(),
                }
                for c in self.candidates
            ],
            "created_at": to_rfc3339(self.created_at),
            "status": self.status,
            "chosen": self.chosen,
            "resolved_by": self.resolved_by,
            "resolved_at": to_rfc3339(self.resolved_at) if self.resolved_at else None,
        }


class AmbiguityQueue:
    def __init__(self, entry_log: Optional[JsonlAppendLog] = None,
                 resolution_log: Optional[JsonlAppendLog] = None):
        self._lock = threading.Lock()
        self._entries: dict[str, AmbiguityEntry] = {}
        self._counter = 0
        self._entry_log = entry_log
        self._resolution_log = resolution_log
        if entry_log is not None:
            self._replay()

    # ----------------------------------------------------------- journaling

    def _replay(self) -> None:
        for record in self._entry_log.records():
            entry = _entry_from_dict(record)
            self._entries[entry.queue_id] = entry
            suffix = entry.queue_id.rsplit("-", 1)[-1]
            if suffix.isdigit():
                self._counter = max(self._counter, int(suffix))
        if self._resolution_log is not None:
            for record in self._resolution_log.records():
                entry = self._entries.get(record["queue_id"])
                if entry is not None:
                    entry.status = "resolved"
                    entry.chosen = record["chosen"]
                    entry.resolved_by = record.get("actor")
                    entry.resolved_at = from_rfc3339(record["timestamp"])

    # ------------------------------------------------------------- mutation

    def enqueue(self, message_id: str, mention: EntityMention,
                candidates: list[LinkCandidate]) -> str:
        with self._lock:
            self._counter += 1
            queue_id = f"amb-{self._counter:06d}"
            entry = AmbiguityEntry(
                queue_id=queue_id,
                message_id=message_id,
                mention=mention,
                candidates=list(candidates),
                created_at=utcnow(),
            )
            self._entries[queue_id] = entry
            if self._entry_log is not None:
                self._entry_log.append(entry.as_dict())
            return queue_id

    def apply_resolution(self, queue_id: str, chosen: str,
                         actor: str = "operator") -> LinkOutcome:
        """Close an open entry with a chosen node id or the REJECT sentinel."""
        with self._lock:
            entry = self._entries.get(queue_id)
            if entry is None:
                raise NotFoundError(f"queue entry {queue_id} not found")
            if entry.status != "open":
                raise ConflictError(f"queue entry {queue_id} already resolved")
            if chosen != REJECT and chosen not in {c.node for c in entry.candidates}:
                raise ValidationError(
                    f"node {chosen} is not among the queued candidates"
                )
            entry.status = "resolved"
            entry.chosen = chosen
            entry.resolved_by = actor
            entry.resolved_at = utcnow()
            if self._resolution_log is not None:
                self._resolution_log.append({
                    "queue_id": queue_id,
                    "message_id": entry.message_id,
                    "chosen": chosen,
                    "actor": actor,
                    "timestamp": to_rfc3339(entry.resolved_at),
                })
        if chosen == REJECT:
            return LinkOutcome.unlinked()
        return LinkOutcome.linked(chosen)

    # -------------------------------------------------------------- queries

    def get(self, queue_id: str) -> AmbiguityEntry:
        with self._lock:
            entry = self._entries.get(queue_id)
            if entry is None:
                raise NotFoundError(f"queue entry {queue_id} not found")
            return entry

    def list_open(self) -> list[AmbiguityEntry]:
        with self._lock:
            return sorted((e for e in self._entries.values() if e.status == "open"),
                          key=lambda e: e.queue_id)

    def entries_for_message(self, message_id: str) -> list[AmbiguityEntry]:
        with self._lock:
            return sorted((e for e in self._entries.values()
                           if e.message_id == message_id),
                          key=lambda e: e.queue_id)

    def resolutions_for_message(self, message_id: str) -> dict[tuple[int, int], str]:
        """Span -> chosen decision, for re-running a blocked message."""
        overrides: dict[tuple[int, int], str] = {}
        for entry in self.entries_for_message(message_id):
            if entry.status == "resolved" and entry.chosen is not None:
                overrides[entry.mention.span] = entry.chosen
        return overrides


def _entry_from_dict(record: dict) -> AmbiguityEntry:
    mention = EntityMention(
        surface=record["mention"]["surface"],
        start=record["mention"]["start"],
        end=record["mention"]["end"],
        mention_kind=record["mention"]["mention_kind"],
        metadata=MessageMetadata(),
    )
    candidates = []
    for c in record["candidates"]:
        candidate = LinkCandidate(mention=mention, node=c["node"], score=c["score"],
                                  raw_score=c["score"])
        for key, value in c.get("features", {}).items():
            setattr(candidate.features, key, value)
        candidates.append(candidate)
    return AmbiguityEntry(
        queue_id=record["queue_id"],
        message_id=record["message_id"],
        mention=mention,
        candidates=candidates,
        created_at=from_rfc3339(record["created_at"]),
        status=record.get("status", "open"),
        chosen=record.get("chosen"),
        resolved_by=record.get("resolved_by"),
        resolved_at=from_rfc3339(record["resolved_at"]) if record.get("resolved_at") else None,
    )
