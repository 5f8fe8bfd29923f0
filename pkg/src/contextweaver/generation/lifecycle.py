"""Generated-message records and their review state machine.

Legal transitions: blocked -> pending (ambiguity resolved or retry
succeeded), pending -> accepted, pending -> discarded. Decided messages
are immutable. The store journals every record version to an append-only
JSONL file; replay keeps the last version per message, so a restart
recovers identical states.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Optional

from ..errors import ConflictError, NotFoundError, ValidationError
from ..jsonl import JsonlAppendLog
from ..timeutil import from_rfc3339, to_rfc3339, utcnow


class MessageState:
    BLOCKED = "blocked"
    PENDING = "pending"
    ACCEPTED = "accepted"
    DISCARDED = "discarded"
    ALL = (BLOCKED, PENDING, ACCEPTED, DISCARDED)
    DECIDED = (ACCEPTED, DISCARDED)


_LEGAL_TRANSITIONS = {
    (MessageState.BLOCKED, MessageState.PENDING),
    (MessageState.PENDING, MessageState.ACCEPTED),
    (MessageState.PENDING, MessageState.DISCARDED),
}


@dataclass
class GeneratedMessage:
    message_id: str
    request_id: str
    domain: str
    raw_message: str
    metadata: dict = field(default_factory=dict)
    text: str = ""
    model_id: str = ""
    bundle: Optional[dict] = None
    state: str = MessageState.PENDING
    created_at: datetime = field(default_factory=utcnow)
    decided_at: Optional[datetime] = None
    decided_by: Optional[str] = None
    blocked_reason: Optional[str] = None
    queue_ids: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "message_id": self.message_id,
            "request_id": self.request_id,
            "domain": self.domain,
            "raw_message": self.raw_message,
            "metadata": dict(self.metadata),
            "text": self.text,
            "model_id": self.model_id,
            "bundle": self.bundle,
            "state": self.state,
            "created_at": to_rfc3339(self.created_at),
            "decided_at": to_rfc3339(self.decided_at) if self.decided_at else None,
            "decided_by": self.decided_by,
            "blocked_reason": self.blocked_reason,
            "queue_ids": list(self.queue_ids),
        }

    @classmethod
    def from_dict(cls, record: dict) -> "GeneratedMessage":
        return cls(
            message_id=record["message_id"],
            request_id=record["request_id"],
            domain=record["domain"],
            raw_message=record["raw_message"],
            metadata=record.get("metadata") or {},
            text=record.get("text", ""),
            model_id=record.get("model_id", ""),
            bundle=record.get("bundle"),
            state=record["state"],
            created_at=from_rfc3339(record["created_at"]),
            decided_at=(from_rfc3339(record["decided_at"])
                        if record.get("decided_at") else None),
            decided_by=record.get("decided_by"),
            blocked_reason=record.get("blocked_reason"),
            queue_ids=list(record.get("queue_ids") or []),
        )


class MessageStore:
    """Linearizable message-state store with write-through journaling."""

    def __init__(self, journal: Optional[JsonlAppendLog] = None):
        self._lock = threading.Lock()
        self._messages: dict[str, GeneratedMessage] = {}
        self._journal = journal
        if journal is not None:
            for record in journal.records():
                message = GeneratedMessage.from_dict(record)
                self._messages[message.message_id] = message

    def _persist(self, message: GeneratedMessage) -> None:
        if self._journal is not None:
            self._journal.append(message.as_dict())

    def create(self, message: GeneratedMessage) -> GeneratedMessage:
        with self._lock:
            if message.message_id in self._messages:
                raise ConflictError(f"message {message.message_id} already exists")
            if any(m.request_id == message.request_id for m in self._messages.values()):
                raise ConflictError(f"request {message.request_id} already submitted")
            self._messages[message.message_id] = message
            self._persist(message)
            return message

    def get(self, message_id: str) -> GeneratedMessage:
        with self._lock:
            message = self._messages.get(message_id)
            if message is None:
                raise NotFoundError(f"message {message_id} not found")
            return message

    def find_by_queue_id(self, queue_id: str) -> Optional[GeneratedMessage]:
        with self._lock:
            for message in self._messages.values():
                if queue_id in message.queue_ids:
                    return message
            return None

    def list(self, state: Optional[str] = None, cursor: Optional[str] = None,
             limit: int = 50) -> tuple[list[GeneratedMessage], Optional[str]]:
        """Cursor pagination over (created_at, message_id) ascending order.

        The cursor is a message id; its sort key is resolved against the
        full store, so pagination stays stable even when the cursor's
        message changes state between pages.
        """
        with self._lock:
            if cursor is not None:
                anchor = self._messages.get(cursor)
                if anchor is None:
                    raise NotFoundError(f"cursor {cursor} not found")
                after = (anchor.created_at, anchor.message_id)
            else:
                after = None
            messages = sorted(
                (m for m in self._messages.values()
                 if state is None or m.state == state),
                key=lambda m: (m.created_at, m.message_id),
            )
        if after is not None:
            messages = [m for m in messages if (m.created_at, m.message_id) > after]
        page = messages[:limit]
        next_cursor = page[-1].message_id if len(messages) > limit else None
        return page, next_cursor

    def replace(self, message: GeneratedMessage) -> GeneratedMessage:
        """Swap in a re-run result; only legal state moves are allowed."""
        with self._lock:
            current = self._messages.get(message.message_id)
            if current is None:
                raise NotFoundError(f"message {message.message_id} not found")
            if current.state in MessageState.DECIDED:
                raise ConflictError(f"message {message.message_id} already decided")
            if (current.state != message.state
                    and (current.state, message.state) not in _LEGAL_TRANSITIONS):
                raise ConflictError(
                    f"illegal transition {current.state} -> {message.state}"
                )
            self._messages[message.message_id] = message
            self._persist(message)
            return message

    def decide(self, message_id: str, decision: str, actor: str,
               now: Optional[datetime] = None) -> GeneratedMessage:
        """Atomic compare-and-set pending -> accepted/discarded."""
        if decision not in ("accept", "discard"):
            raise ValidationError(f"decision must be accept|discard, got {decision!r}")
        target = (MessageState.ACCEPTED if decision == "accept"
                  else MessageState.DISCARDED)
        with self._lock:
            current = self._messages.get(message_id)
            if current is None:
                raise NotFoundError(f"message {message_id} not found")
            if current.state != MessageState.PENDING:
                raise ConflictError(
                    f"message {message_id} is {current.state}, not pending"
                )
            decided = replace(current, state=target, decided_at=now or utcnow(),
                              decided_by=actor)
            self._messages[message_id] = decided
            self._persist(decided)
            return decided


def record_decision(store: MessageStore, feedback_log, message_id: str,
                    decision: str, actor: str,
                    now: Optional[datetime] = None) -> GeneratedMessage:
    """Apply a review decision and append it to the immutable feedback log."""
    decided = store.decide(message_id, decision, actor, now)
    feedback_log.append_decision(
        message_id=decided.message_id,
        domain=decided.domain,
        decision=decision,
        actor=actor,
        timestamp=decided.decided_at,
    )
    return decided
