"""TTL sweep keeping only fresh events in the graph and cache.

An Event node expires when last_seen + retention < now, where retention is
max(event_ttl, impact hint). The hint hook exists for a future impact-
duration predictor; the default predictor returns nothing, so the TTL
governs, and a hint can only extend retention, never shorten it.
Non-event nodes are never touched. Sweeps are idempotent.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from datetime import datetime, timedelta
from typing import Optional, Protocol

from .errors import ValidationError
from .ingest.cache import EventCache, EventRecord
from .kg import KnowledgeGraph, NodeKind

logger = logging.getLogger(__name__)

DEFAULT_EVENT_TTL = timedelta(hours=72)
DEFAULT_SWEEP_PERIOD = timedelta(hours=1)


@dataclass(frozen=True)
class RetentionPolicy:
    event_ttl: timedelta = DEFAULT_EVENT_TTL
    sweep_period: timedelta = DEFAULT_SWEEP_PERIOD

    def validate(self) -> None:
        if self.event_ttl <= timedelta(0):
            raise ValidationError("event_ttl must be positive")
        if self.sweep_period <= timedelta(0):
            raise ValidationError("sweep_period must be positive")


@dataclass
class SweepReport:
    removed_events: int = 0
    removed_edges: int = 0
    evicted_cache: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


class ImpactDurationPredictor(Protocol):
    def hint(self, record: EventRecord) -> Optional[timedelta]: ...


class NullImpactPredictor:
    """Default: no prediction, the TTL alone governs retention."""

    def hint(self, record: EventRecord) -> Optional[timedelta]:
        return None


def impact_duration_hint(record: EventRecord,
                         predictor: Optional[ImpactDurationPredictor] = None
                         ) -> Optional[timedelta]:
    return (predictor or NullImpactPredictor()).hint(record)


def sweep_expired(
    kg: KnowledgeGraph,
    cache: Optional[EventCache],
    policy: RetentionPolicy,
    now: datetime,
    predictor: Optional[ImpactDurationPredictor] = None,
) -> SweepReport:
    policy.validate()
    report = SweepReport()
    for node in kg.nodes(NodeKind.EVENT):
        retention = policy.event_ttl
        if cache is not None:
            record = cache.get(node.id)
            if record is not None:
                hinted = impact_duration_hint(record, predictor)
                if hinted is not None and hinted > retention:
                    retention = hinted  # hints extend, never shorten
        if node.last_seen + retention < now:
            report.removed_edges += kg.remove_node(node.id)
            report.removed_events += 1
            if cache is not None and cache.evict(node.id):
                report.evicted_cache += 1
    if cache is not None:
        # coherence: drop any record whose node vanished by other means
        for record in cache.records():
            if not kg.has_node(record.event_node):
                cache.evict(record.event_node)
                report.evicted_cache += 1
    if report.removed_events:
        logger.info("sweep removed %d events (%d edges, %d cache records)",
                    report.removed_events, report.removed_edges, report.evicted_cache)
    return report
