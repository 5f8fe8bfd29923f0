"""Process wiring: stores, pipelines, schedulers, and persistence.

A Runtime owns everything stateful. Recovery order on startup: KG snapshot,
event-cache snapshot, message journal, ambiguity journals; feedback stays
on disk and is replayed per metrics read. Ingest cycles and sweeps share
one mutex so they never interleave; both grab the KG writer lock only for
bounded per-item sections, so API readers stay live.
"""

from __future__ import annotations

import logging
import threading
from datetime import datetime, timedelta
from pathlib import Path
from typing import Callable, Optional

from ..context import ContextRetriever
from ..errors import ConflictError
from ..generation import (
    DraftPipeline,
    DraftRequest,
    FeedbackLog,
    GeneratedMessage,
    MessageStore,
    build_client,
    compute_acceptance,
    record_decision,
)
from ..ingest import (
    EventCache,
    FixtureFeedAdapter,
    HttpFeedAdapter,
    IngestReport,
    run_ingest_cycle,
)
from ..jsonl import JsonlAppendLog
from ..kg import KnowledgeGraph, load_profile_dir, load_snapshot, save_snapshot
from ..linking import AmbiguityQueue, EntityLinker, MessageMetadata, REJECT
from ..maintenance import RetentionPolicy, SweepReport, sweep_expired
from ..timeutil import utcnow
from .config import ServiceConfig

logger = logging.getLogger(__name__)

KG_SNAPSHOT_FILE = "kg.snapshot.jsonl"
CACHE_SNAPSHOT_FILE = "event_cache.jsonl"
MESSAGES_FILE = "messages.jsonl"
FEEDBACK_FILE = "feedback.jsonl"
AMBIGUITIES_FILE = "ambiguities.jsonl"
RESOLUTIONS_FILE = "resolutions.jsonl"

FIXTURE_URL_PREFIX = "fixture:"


class PeriodicWorker(threading.Thread):
    """Calls fn every period; a tick that finds work running is skipped."""

    def __init__(self, name: str, period_s: float, fn: Callable[[], None]):
        super().__init__(name=name, daemon=True)
        self.period_s = period_s
        self.fn = fn
        self._halt = threading.Event()  # Thread reserves the _stop name

    def run(self) -> None:
        while not self._halt.wait(self.period_s):
            try:
                self.fn()
            except ConflictError:
                logger.info("%s tick skipped: previous run still active", self.name)
            except Exception:
                logger.exception("%s tick failed", self.name)

    def stop(self) -> None:
        self._halt.set()


class Runtime:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.data_dir = Path(config.data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)

        self.kg = self._recover_graph()
        self.cache = self._recover_cache()
        self.queue = AmbiguityQueue(
            JsonlAppendLog(self.data_dir / AMBIGUITIES_FILE),
            JsonlAppendLog(self.data_dir / RESOLUTIONS_FILE),
        )
        self.store = MessageStore(JsonlAppendLog(self.data_dir / MESSAGES_FILE))
        self.feedback = FeedbackLog(self.data_dir / FEEDBACK_FILE)

        if config.profiles_dir:
            loaded = load_profile_dir(self.kg, config.profiles_dir)
            logger.info("loaded %d profile records", loaded)

        self.adapter = self._build_adapter()
        self.client = build_client(config.llm_url, config.llm_key, config.llm_model)
        self.linker = EntityLinker(
            self.kg, self.queue,
            weights=config.weights,
            accept_floor=config.accept_floor,
            ambiguity_margin=config.ambiguity_margin,
            candidate_floor=config.candidate_floor,
        )
        self.retriever = ContextRetriever(
            self.kg, k=config.top_k, affinity=config.affinity,
            classifier=config.intent_classifier, gate=config.location_gate,
            half_life_days=config.recency_half_life_days,
        )
        self.pipeline = DraftPipeline(self.linker, self.retriever, self.store,
                                      self.client, preamble=config.preamble)
        self.retention = RetentionPolicy(
            event_ttl=timedelta(hours=config.event_ttl_h),
            sweep_period=timedelta(seconds=config.sweep_period_s),
        )
        # sweeps and ingest cycles are mutually exclusive
        self._maintenance_lock = threading.Lock()
        self._workers: list[PeriodicWorker] = []

    # ------------------------------------------------------------- recovery

    def _recover_graph(self) -> KnowledgeGraph:
        path = self.data_dir / KG_SNAPSHOT_FILE
        if path.exists():
            return load_snapshot(path)
        return KnowledgeGraph()

    def _recover_cache(self) -> EventCache:
        path = self.data_dir / CACHE_SNAPSHOT_FILE
        if path.exists():
            return EventCache.load(path, self.config.similarity_threshold)
        return EventCache(self.config.similarity_threshold)

    def _build_adapter(self):
        url = self.config.feed_url
        if not url:
            return None
        if url.startswith(FIXTURE_URL_PREFIX):
            return FixtureFeedAdapter(url[len(FIXTURE_URL_PREFIX):])
        return HttpFeedAdapter(url, self.config.feed_key, self.config.feed_topics)

    # ---------------------------------------------------------- persistence

    def snapshot(self) -> dict[str, str]:
        kg_path = self.data_dir / KG_SNAPSHOT_FILE
        cache_path = self.data_dir / CACHE_SNAPSHOT_FILE
        save_snapshot(self.kg, kg_path)
        self.cache.save(cache_path)
        return {"kg": str(kg_path), "event_cache": str(cache_path)}

    # ----------------------------------------------------------- operations

    def ingest_once(self, now: Optional[datetime] = None) -> IngestReport:
        if self.adapter is None:
            return IngestReport(error="no feed adapter configured")
        if not self._maintenance_lock.acquire(blocking=False):
            raise ConflictError("an ingest cycle or sweep is already running")
        try:
            report = run_ingest_cycle(self.adapter, self.cache, self.kg, now=now)
            self.snapshot()
            return report
        finally:
            self._maintenance_lock.release()

    def sweep_once(self, now: Optional[datetime] = None) -> SweepReport:
        if not self._maintenance_lock.acquire(blocking=False):
            raise ConflictError("an ingest cycle or sweep is already running")
        try:
            report = sweep_expired(self.kg, self.cache, self.retention,
                                   now or utcnow())
            self.snapshot()
            return report
        finally:
            self._maintenance_lock.release()

    def submit(self, request: DraftRequest) -> GeneratedMessage:
        return self.pipeline.submit_draft(request)

    def decide(self, message_id: str, decision: str, actor: str) -> GeneratedMessage:
        return record_decision(self.store, self.feedback, message_id, decision, actor)

    def resolve_ambiguity(self, queue_id: str, chosen: Optional[str],
                          actor: str) -> tuple[dict, Optional[GeneratedMessage]]:
        """Apply one resolution; resume the message once nothing stays open."""
        self.queue.apply_resolution(queue_id, chosen if chosen is not None else REJECT,
                                    actor)
        message = self.store.find_by_queue_id(queue_id)
        resumed = None
        if message is not None:
            still_open = [e for e in self.queue.entries_for_message(message.message_id)
                          if e.status == "open"]
            if not still_open:
                resumed = self.pipeline.resume(message.message_id)
        return self.queue.get(queue_id).as_dict(), resumed

    def metrics(self):
        return compute_acceptance(self.feedback)

    def node_with_edges(self, node_id: str) -> dict:
        node = self.kg.get_node(node_id)  # raises NotFoundError
        incident = self.kg.neighbors(node_id, None, "both")
        return {
            "node": {
                "id": node.id,
                "kind": node.kind,
                "canonical_name": node.canonical_name,
                "aliases": sorted(node.aliases),
                "attributes": [
                    {"key": a.key, "value": a.value, "source": a.source}
                    for a in sorted(node.attributes, key=lambda a: (a.key, a.source))
                ],
            },
            "edges": [
                {"src": e.src, "dst": e.dst, "kind": e.kind, "weight": e.weight}
                for e, _ in incident
            ],
        }

    # ----------------------------------------------------------- schedulers

    def start_schedulers(self) -> None:
        if self.adapter is not None:
            self._workers.append(PeriodicWorker(
                "ingest", self.config.feed_period_s, self.ingest_once))
        self._workers.append(PeriodicWorker(
            "sweep", self.config.sweep_period_s, self.sweep_once))
        self._workers.append(PeriodicWorker(
            "snapshot", self.config.snapshot_period_s, self.snapshot))
        for worker in self._workers:
            worker.start()

    def close(self) -> None:
        for worker in self._workers:
            worker.stop()
        for worker in self._workers:
            worker.join(timeout=2.0)
        self._workers.clear()
        self.snapshot()
