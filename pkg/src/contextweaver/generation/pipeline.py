"""Draft orchestration: extract, link, bundle, prompt, generate, store.

A draft whose recipient mention (the leftmost person mention) cannot be
linked fails with NoRecipientError. Any ambiguous mention blocks the
draft until humans resolve every queue entry, at which point resume()
re-runs the pipeline with the resolutions as overrides. Generation
failures leave the draft blocked with a retryable reason.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from ..context import ContextRetriever
from ..errors import (
    ConflictError,
    GenerationError,
    NoRecipientError,
    NotFoundError,
    ValidationError,
)
from ..linking import EntityLinker, MentionKind, MentionLink, MessageMetadata, REJECT
from ..timeutil import utcnow
from .client import GenerationClient, StubGenerationClient, generate
from .lifecycle import GeneratedMessage, MessageState, MessageStore
from .prompt import DEFAULT_PREAMBLE, assemble_prompt

logger = logging.getLogger(__name__)

DOMAINS = ("healthcare", "education", "recruitment", "other")

BLOCKED_AMBIGUOUS = "ambiguous_entities"
BLOCKED_UNLINKED = "recipient_unlinked"
BLOCKED_GENERATION = "generation_error"


@dataclass(frozen=True)
class DraftRequest:
    request_id: str
    raw_message: str
    metadata: MessageMetadata = field(default_factory=MessageMetadata)
    domain: str = "other"

    def validate(self) -> None:
        if not self.request_id:
            raise ValidationError("request_id must be non-empty")
        if not self.raw_message or not self.raw_message.strip():
            raise ValidationError("raw_message must be non-empty")
        if self.domain not in DOMAINS:
            raise ValidationError(f"domain must be one of {DOMAINS}, got {self.domain!r}")
        self.metadata.validate()

    def metadata_dict(self) -> dict:
        return {
            "sender_id": self.metadata.sender_id,
            "sender_location": self.metadata.sender_location,
            "formality": self.metadata.formality,
            "channel": self.metadata.channel,
        }


class DraftPipeline:
    def __init__(
        self,
        linker: EntityLinker,
        retriever: ContextRetriever,
        store: MessageStore,
        client: Optional[GenerationClient] = None,
        preamble: str = DEFAULT_PREAMBLE,
    ):
        self.linker = linker
        self.retriever = retriever
        self.store = store
        self.client = client or StubGenerationClient()
        self.preamble = preamble

    # ------------------------------------------------------------ internals

    @staticmethod
    def _recipient_link(links: list[MentionLink]) -> Optional[MentionLink]:
        person_links = [l for l in links if l.mention.mention_kind == MentionKind.PERSON]
        return min(person_links, key=lambda l: l.mention.start, default=None)

    def _run(self, request: DraftRequest, message_id: str,
             overrides: Optional[dict] = None,
             now: Optional[datetime] = None,
             is_resume: bool = False) -> GeneratedMessage:
        now = now or utcnow()
        links = self.linker.link_message(
            request.raw_message, request.metadata, message_id, overrides, now)
        base = GeneratedMessage(
            message_id=message_id,
            request_id=request.request_id,
            domain=request.domain,
            raw_message=request.raw_message,
            metadata=request.metadata_dict(),
            created_at=now,
        )
        ambiguous = [l for l in links if l.outcome.is_ambiguous]
        if ambiguous:
            base.state = MessageState.BLOCKED
            base.blocked_reason = BLOCKED_AMBIGUOUS
            base.queue_ids = sorted(
                l.outcome.queue_id for l in ambiguous if l.outcome.queue_id)
            return base
        recipient_link = self._recipient_link(links)
        if recipient_link is None or not recipient_link.outcome.is_linked:
            if is_resume:
                # operator rejected (or the graph lost) every recipient
                # candidate; keep the record, flagged undeliverable
                base.state = MessageState.BLOCKED
                base.blocked_reason = BLOCKED_UNLINKED
                return base
            raise NoRecipientError(
                f"message {message_id} has no linkable recipient"
            )
        recipient = recipient_link.outcome.node
        bundle = self.retriever.build(recipient, request.raw_message,
                                      request.metadata, now)
        prompt = assemble_prompt(request.raw_message, bundle, self.preamble)
        try:
            text, model_id = generate(prompt, self.client)
        except GenerationError as exc:
            logger.warning("generation failed for %s: %s", message_id, exc)
            base.state = MessageState.BLOCKED
            base.blocked_reason = BLOCKED_GENERATION
            base.bundle = bundle.as_dict()
            return base
        base.state = MessageState.PENDING
        base.text = text
        base.model_id = model_id
        base.bundle = bundle.as_dict()
        return base

    # ------------------------------------------------------------- commands

    def submit_draft(self, request: DraftRequest,
                     now: Optional[datetime] = None) -> GeneratedMessage:
        request.validate()
        message_id = f"msg-{request.request_id}"
        # refuse duplicates before linking so a repeat submit cannot leave
        # stray ambiguity queue entries behind
        try:
            self.store.get(message_id)
        except NotFoundError:
            pass
        else:
            raise ConflictError(f"request {request.request_id} already submitted")
        message = self._run(request, message_id, overrides=None, now=now)
        return self.store.create(message)

    def resume(self, message_id: str,
               now: Optional[datetime] = None) -> GeneratedMessage:
        """Re-run a blocked draft using queued human resolutions as overrides."""
        current = self.store.get(message_id)
        if current.state != MessageState.BLOCKED:
            return current
        request = DraftRequest(
            request_id=current.request_id,
            raw_message=current.raw_message,
            metadata=MessageMetadata(
                sender_id=current.metadata.get("sender_id"),
                sender_location=current.metadata.get("sender_location"),
                formality=current.metadata.get("formality", "unknown"),
                channel=current.metadata.get("channel", ""),
            ),
            domain=current.domain,
        )
        overrides = {}
        if self.linker.queue is not None:
            overrides = self.linker.queue.resolutions_for_message(message_id)
        rerun = self._run(request, message_id, overrides=overrides, now=now,
                          is_resume=True)
        rerun.created_at = current.created_at
        rerun.queue_ids = sorted(set(current.queue_ids) | set(rerun.queue_ids))
        return self.store.replace(rerun)
