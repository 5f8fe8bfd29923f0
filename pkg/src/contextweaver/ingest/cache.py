"""Embedding-indexed event cache used to deduplicate incoming news items.

Insertion keeps two invariants: one record per event node, and pairwise
cosine similarity of stored embeddings below the threshold (the dedup gate
guarantees the latter; insert re-checks it). The cache snapshots to a
line-delimited JSON file alongside the graph so dedup survives restarts.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..errors import SnapshotParseError, SnapshotVersionError, ValidationError
from ..timeutil import from_rfc3339, to_rfc3339
from .embedding import HashedTrigramEmbedder, TextEmbedder, cosine
from .types import NewsItem

CACHE_FORMAT = "event-cache"
CACHE_VERSION = 1

DEFAULT_SIMILARITY_THRESHOLD = 0.85


@dataclass(frozen=True)
class EventRecord:
    event_node: str
    category: str
    status: str
    embedding: np.ndarray
    first_seen: datetime
    last_seen: datetime

    def validate(self) -> None:
        if self.first_seen > self.last_seen:
            raise ValidationError(f"event record {self.event_node}: first_seen > last_seen")


class EventCache:
    def __init__(self, similarity_threshold: float = DEFAULT_SIMILARITY_THRESHOLD):
        if not (0.0 < similarity_threshold <= 1.0):
            raise ValidationError(
                f"similarity_threshold {similarity_threshold} outside (0, 1]"
            )
        self.similarity_threshold = similarity_threshold
        self._lock = threading.Lock()
        self._records: dict[str, EventRecord] = {}

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    def records(self) -> list[EventRecord]:
        with self._lock:
            return sorted(self._records.values(), key=lambda r: r.event_node)

    def get(self, event_node: str) -> Optional[EventRecord]:
        with self._lock:
            return self._records.get(event_node)

    def best_match(self, embedding: np.ndarray) -> Optional[tuple[EventRecord, float]]:
        """Record with maximal cosine to the query (ties: ascending node id)."""
        with self._lock:
            best: Optional[tuple[EventRecord, float]] = None
            for node_id in sorted(self._records):
                record = self._records[node_id]
                sim = cosine(embedding, record.embedding)
                if best is None or sim > best[1]:
                    best = (record, sim)
            return best

    def insert(self, record: EventRecord) -> None:
        record.validate()
        with self._lock:
            if record.event_node in self._records:
                raise ValidationError(f"cache already holds event {record.event_node}")
            for other in self._records.values():
                sim = cosine(record.embedding, other.embedding)
                if sim >= self.similarity_threshold:
                    raise ValidationError(
                        f"cache insert for {record.event_node} violates pairwise "
                        f"similarity bound against {other.event_node} ({sim:.3f})"
                    )
            self._records[record.event_node] = record

    def update(self, record: EventRecord) -> None:
        record.validate()
        with self._lock:
            if record.event_node not in self._records:
                raise ValidationError(f"cache has no record for {record.event_node}")
            self._records[record.event_node] = record

    def evict(self, event_node: str) -> bool:
        with self._lock:
            return self._records.pop(event_node, None) is not None

    # ----------------------------------------------------------- persistence

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        lines = [json.dumps({"format": CACHE_FORMAT, "version": CACHE_VERSION},
                            sort_keys=True, separators=(",", ":"))]
        for record in self.records():
            lines.append(json.dumps({
                "event_node": record.event_node,
                "category": record.category,
                "status": record.status,
                "embedding": record.embedding.tolist(),
                "first_seen": to_rfc3339(record.first_seen),
                "last_seen": to_rfc3339(record.last_seen),
            }, sort_keys=True, separators=(",", ":")))
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: Union[str, Path],
             similarity_threshold: float = DEFAULT_SIMILARITY_THRESHOLD) -> "EventCache":
        cache = cls(similarity_threshold)
        path = Path(path)
        with path.open(encoding="utf-8") as fh:
            for line_no, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise SnapshotParseError(line_no, f"invalid JSON ({exc.msg})") from exc
                if line_no == 1:
                    if record.get("format") != CACHE_FORMAT:
                        raise SnapshotParseError(line_no, "missing event-cache header")
                    if record.get("version") != CACHE_VERSION:
                        raise SnapshotVersionError(
                            f"event-cache version {record.get('version')!r} unsupported"
                        )
                    continue
                try:
                    with cache._lock:
                        cache._records[record["event_node"]] = EventRecord(
                            event_node=record["event_node"],
                            category=record["category"],
                            status=record["status"],
                            embedding=np.asarray(record["embedding"], dtype=np.float64),
                            first_seen=from_rfc3339(record["first_seen"]),
                            last_seen=from_rfc3339(record["last_seen"]),
                        )
                except (KeyError, TypeError, ValueError) as exc:
                    raise SnapshotParseError(line_no, f"bad record: {exc}") from exc
        return cache


def dedup_lookup(
    item: NewsItem,
    cache: EventCache,
    embedder: Optional[TextEmbedder] = None,
) -> Optional[EventRecord]:
    """Cached record most similar to the item, if it clears the threshold."""
    embedder = embedder or HashedTrigramEmbedder()
    best = cache.best_match(embedder.embed(item.dedup_text()))
    if best is None:
        return None
    record, sim = best
    if sim >= cache.similarity_threshold:
        return record
    return None


def record_with_last_seen(record: EventRecord, seen_at: datetime) -> EventRecord:
    """Copy with last_seen advanced (max semantics)."""
    if seen_at > record.last_seen:
        return replace(record, last_seen=seen_at)
    return record
