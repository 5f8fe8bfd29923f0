"""In-memory property-graph store with reader/writer locking.

Readers run concurrently; writes are serialized and every public operation
is linearizable. Read operations hand out copies so callers can never
observe a node mid-mutation.
"""

from __future__ import annotations

import logging
import re
import threading
from contextlib import contextmanager
from datetime import datetime
from typing import Iterable, Optional

from ..errors import DanglingEdgeError, NotFoundError, ValidationError
from .model import (
    Attribute,
    Edge,
    EdgeKind,
    Node,
    NodeId,
    NodeKind,
    normalize_name,
    validate_edge_endpoints,
)

logger = logging.getLogger(__name__)

_GENERATED_ID_RE = re.compile(r"^[a-z]+-(\d+)$")


class _ReadWriteLock:
    """Many readers or one writer; writers get priority over new readers."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False
        self._writers_waiting = 0

    @contextmanager
    def read(self):
        with self._cond:
            while self._writer or self._writers_waiting:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if self._readers == 0:
                    self._cond.notify_all()

    @contextmanager
    def write(self):
        with self._cond:
            self._writers_waiting += 1
            while self._writer or self._readers:
                self._cond.wait()
            self._writers_waiting -= 1
            self._writer = True
        try:
            yield
        finally:
            with self._cond:
                self._writer = False
                self._cond.notify_all()


class KnowledgeGraph:
    """Typed graph of Person / Location / Event / Topic nodes."""

    def __init__(self):
        self._lock = _ReadWriteLock()
        self._nodes: dict[NodeId, Node] = {}
        # edges indexed by (src, dst, kind); plus adjacency sets per node
        self._edges: dict[tuple[NodeId, NodeId, str], Edge] = {}
        self._out: dict[NodeId, set[tuple[NodeId, NodeId, str]]] = {}
        self._in: dict[NodeId, set[tuple[NodeId, NodeId, str]]] = {}
        # ids retired by remove_node; never handed out again in this process
        self._retired: set[NodeId] = set()
        self._id_counter = 0

    # ------------------------------------------------------------------ ids

    def new_node_id(self, prefix: str = "n") -> NodeId:
        """Deterministic counter-based ids so replays produce identical graphs."""
        with self._lock.write():
            return self._next_id(prefix)

    def _next_id(self, prefix: str) -> NodeId:
        while True:
            self._id_counter += 1
            candidate = f"{prefix}-{self._id_counter:06d}"
            if candidate not in self._nodes and candidate not in self._retired:
                return candidate

    def _observe_id(self, node_id: NodeId) -> None:
        m = _GENERATED_ID_RE.match(node_id)
        if m:
            self._id_counter = max(self._id_counter, int(m.group(1)))

    # ---------------------------------------------------------------- nodes

    def upsert_node(self, node: Node, now: Optional[datetime] = None) -> NodeId:
        """Insert a node, or merge aliases/attributes into the existing one.

        Merge rules: alias union; per (key, source) the later observed_at
        wins; canonical_name and created_at of the first insert are kept;
        last_seen never regresses.
        """
        node.validate(now)
        with self._lock.write():
            if node.id in self._retired:
                raise ValidationError(f"node id {node.id} was removed and may not be reused")
            existing = self._nodes.get(node.id)
            if existing is None:
                self._nodes[node.id] = node.copy()
                self._out.setdefault(node.id, set())
                self._in.setdefault(node.id, set())
                self._observe_id(node.id)
                return node.id
            if existing.kind != node.kind:
                raise ValidationError(
                    f"node {node.id}: kind change {existing.kind} -> {node.kind} not allowed"
                )
            existing.aliases |= set(node.aliases)
            merged = {(a.key, a.source): a for a in existing.attributes}
            for attr in node.attributes:
                current = merged.get((attr.key, attr.source))
                if current is None or attr.observed_at >= current.observed_at:
                    merged[(attr.key, attr.source)] = attr
            existing.attributes = [merged[k] for k in sorted(merged)]
            if node.last_seen > existing.last_seen:
                existing.last_seen = node.last_seen
            return existing.id

    def get_node(self, node_id: NodeId) -> Node:
        with self._lock.read():
            node = self._nodes.get(node_id)
            if node is None:
                raise NotFoundError(f"node {node_id} not found")
            return node.copy()

    def has_node(self, node_id: NodeId) -> bool:
        with self._lock.read():
            return node_id in self._nodes

    def set_attribute(self, node_id: NodeId, attr: Attribute) -> None:
        """Write-through helper: replace the (key, source) slot on a node."""
        attr.validate()
        with self._lock.write():
            node = self._nodes.get(node_id)
            if node is None:
                raise NotFoundError(f"node {node_id} not found")
            kept = [a for a in node.attributes if (a.key, a.source) != (attr.key, attr.source)]
            kept.append(attr)
            node.attributes = sorted(kept, key=lambda a: (a.key, a.source))

    def touch(self, node_id: NodeId, seen_at: datetime) -> None:
        """Advance last_seen (max semantics; out-of-order inputs never regress it)."""
        with self._lock.write():
            node = self._nodes.get(node_id)
            if node is None:
                raise NotFoundError(f"node {node_id} not found")
            if seen_at > node.last_seen:
                node.last_seen = seen_at

    def find_by_name(self, name: str, kind_filter: Optional[str] = None) -> list[Node]:
        """All nodes whose alias set contains the normalized name, by id."""
        if not name or not name.strip():
            raise ValidationError("name must be non-empty")
        needle = normalize_name(name)
        with self._lock.read():
            hits = [
                node.copy()
                for node in self._nodes.values()
                if (kind_filter is None or node.kind == kind_filter)
                and needle in node.normalized_aliases()
            ]
        return sorted(hits, key=lambda n: n.id)

    def remove_node(self, node_id: NodeId) -> int:
        """Remove a node and every incident edge; returns the edge count."""
        with self._lock.write():
            if node_id not in self._nodes:
                raise NotFoundError(f"node {node_id} not found")
            incident = self._out.get(node_id, set()) | self._in.get(node_id, set())
            for key in incident:
                self._edges.pop(key, None)
                self._out.get(key[0], set()).discard(key)
                self._in.get(key[1], set()).discard(key)
            del self._nodes[node_id]
            self._out.pop(node_id, None)
            self._in.pop(node_id, None)
            self._retired.add(node_id)
            return len(incident)

    # ---------------------------------------------------------------- edges

    def upsert_edge(self, edge: Edge) -> None:
        """Insert an edge; re-upsert of the same (src, dst, kind) replaces weight."""
        edge.validate()
        with self._lock.write():
            src = self._nodes.get(edge.src)
            dst = self._nodes.get(edge.dst)
            if src is None or dst is None:
                missing = edge.src if src is None else edge.dst
                raise DanglingEdgeError(f"edge endpoint {missing} does not exist")
            validate_edge_endpoints(edge, src.kind, dst.kind)
            key = edge.key()
            existing = self._edges.get(key)
            if existing is not None:
                # replace weight, keep the original created_at
                edge = Edge(
                    src=edge.src,
                    dst=edge.dst,
                    kind=edge.kind,
                    weight=edge.weight,
                    created_at=existing.created_at,
                )
            self._edges[key] = edge
            self._out.setdefault(edge.src, set()).add(key)
            self._in.setdefault(edge.dst, set()).add(key)

    def neighbors(
        self,
        node_id: NodeId,
        kind_filter: Optional[str] = None,
        direction: str = "both",
    ) -> list[tuple[Edge, Node]]:
        """Incident edges with their far nodes, ordered by (edge kind, far id)."""
        if direction not in ("out", "in", "both"):
            raise ValidationError(f"direction must be out|in|both, got {direction!r}")
        with self._lock.read():
            if node_id not in self._nodes:
                raise NotFoundError(f"node {node_id} not found")
            keys: set[tuple[NodeId, NodeId, str]] = set()
            if direction in ("out", "both"):
                keys |= self._out.get(node_id, set())
            if direction in ("in", "both"):
                keys |= self._in.get(node_id, set())
            results = []
            for key in keys:
                edge = self._edges[key]
                if kind_filter is not None and edge.kind != kind_filter:
                    continue
                far_id = edge.dst if edge.src == node_id else edge.src
                results.append((edge, self._nodes[far_id].copy()))
        return sorted(results, key=lambda pair: (pair[0].kind, pair[1].id))

    # ------------------------------------------------------------- scanning

    def nodes(self, kind_filter: Optional[str] = None) -> list[Node]:
        with self._lock.read():
            return sorted(
                (n.copy() for n in self._nodes.values()
                 if kind_filter is None or n.kind == kind_filter),
                key=lambda n: n.id,
            )

    def edges(self) -> list[Edge]:
        with self._lock.read():
            return sorted(self._edges.values(), key=lambda e: (e.src, e.kind, e.dst))

    def node_count(self) -> int:
        with self._lock.read():
            return len(self._nodes)

    def edge_count(self) -> int:
        with self._lock.read():
            return len(self._edges)

    # ------------------------------------------------------------ bulk load

    def load(self, nodes: Iterable[Node], edges: Iterable[Edge]) -> None:
        """Populate an empty store from snapshot contents (no merge semantics)."""
        with self._lock.write():
            if self._nodes or self._edges:
                raise ValidationError("load() requires an empty graph")
            for node in nodes:
                node.validate()
                self._nodes[node.id] = node.copy()
                self._out.setdefault(node.id, set())
                self._in.setdefault(node.id, set())
                self._observe_id(node.id)
            for edge in edges:
                edge.validate()
                src = self._nodes.get(edge.src)
                dst = self._nodes.get(edge.dst)
                if src is None or dst is None:
                    missing = edge.src if src is None else edge.dst
                    raise DanglingEdgeError(f"edge endpoint {missing} does not exist")
                validate_edge_endpoints(edge, src.kind, dst.kind)
                key = edge.key()
                self._edges[key] = edge
                self._out[edge.src].add(key)
                self._in[edge.dst].add(key)
