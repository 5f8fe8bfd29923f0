"""Acceptance metrics recomputed from the append-only feedback log.

No cached counters: every metrics read replays the log, so replaying the
same log always reproduces identical numbers. Domains with no decided
messages report their rate as absent, never zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional, Union

from ..errors import ValidationError
from ..jsonl import JsonlAppendLog, read_jsonl
from ..timeutil import to_rfc3339, utcnow

DOMAINS = ("healthcare", "education", "recruitment", "other")


class FeedbackLog:
    """Line-delimited {message_id, domain, decision, actor, timestamp} records."""

    def __init__(self, path: Union[str, Path]):
        self._log = JsonlAppendLog(path)

    @property
    def path(self) -> Path:
        return self._log.path

    def append_decision(self, message_id: str, domain: str, decision: str,
                        actor: str, timestamp: Optional[datetime] = None) -> None:
        if decision not in ("accept", "discard"):
            raise ValidationError(f"decision must be accept|discard, got {decision!r}")
        self._log.append({
            "message_id": message_id,
            "domain": domain,
            "decision": decision,
            "actor": actor,
            "timestamp": to_rfc3339(timestamp or utcnow()),
        })

    def records(self) -> list[dict]:
        return list(self._log.records())


@dataclass
class DomainStats:
    accepted: int = 0
    decided: int = 0

    @property
    def rate(self) -> Optional[float]:
        if self.decided == 0:
            return None
        return self.accepted / self.decided

    def as_dict(self) -> dict:
        return {"accepted": self.accepted, "decided": self.decided, "rate": self.rate}


@dataclass
class AcceptanceMetrics:
    domains: dict[str, DomainStats] = field(default_factory=dict)

    @property
    def total_decided(self) -> int:
        return sum(stats.decided for stats in self.domains.values())

    def as_dict(self) -> dict:
        return {
            "domains": {name: stats.as_dict() for name, stats in self.domains.items()},
            "total_decided": self.total_decided,
        }


def compute_acceptance(
    feedback: Union[FeedbackLog, Iterable[dict], str, Path],
    domain_filter: Optional[str] = None,
) -> AcceptanceMetrics:
    """Per-domain accepted/decided/rate over decided messages only."""
    if isinstance(feedback, FeedbackLog):
        records = feedback.records()
    elif isinstance(feedback, (str, Path)):
        records = read_jsonl(feedback)
    else:
        records = feedback
    metrics = AcceptanceMetrics(domains={
        name: DomainStats() for name in DOMAINS
        if domain_filter is None or name == domain_filter
    })
    for record in records:
        domain = record.get("domain", "other")
        if domain_filter is not None and domain != domain_filter:
            continue
        stats = metrics.domains.setdefault(domain, DomainStats())
        stats.decided += 1
        if record.get("decision") == "accept":
            stats.accepted += 1
    return metrics
