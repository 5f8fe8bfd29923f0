"""Prompt assembly, generation clients, and the review lifecycle."""

from .prompt import DEFAULT_PREAMBLE, Prompt, assemble_prompt
from .client import (
    GenerationClient,
    HttpGenerationClient,
    StubGenerationClient,
    build_client,
    generate,
)
from .lifecycle import GeneratedMessage, MessageState, MessageStore, record_decision
from .metrics import AcceptanceMetrics, DomainStats, FeedbackLog, compute_acceptance
from .pipeline import DraftPipeline, DraftRequest

__all__ = [
    "AcceptanceMetrics",
    "DEFAULT_PREAMBLE",
    "DomainStats",
    "DraftPipeline",
    "DraftRequest",
    "FeedbackLog",
    "GeneratedMessage",
    "GenerationClient",
    "HttpGenerationClient",
    "MessageState",
    "MessageStore",
    "Prompt",
    "StubGenerationClient",
    "assemble_prompt",
    "build_client",
    "compute_acceptance",
    "generate",
    "record_decision",
]
