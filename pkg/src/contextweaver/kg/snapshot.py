"""Line-delimited JSON snapshots of the graph.

Format: line 1 is ``{"format":"kg-snapshot","version":1}``; each following
line is one ``{"t":"node",...}`` or ``{"t":"edge",...}`` record. Records are
written in canonical order (nodes by id, edges by (src, kind, dst), aliases
and attributes sorted) so identical graphs serialize to identical bytes.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Union

from ..errors import SnapshotParseError, SnapshotVersionError
from ..timeutil import from_rfc3339, to_rfc3339
from .model import Attribute, Edge, Node
from .store import KnowledgeGraph

SNAPSHOT_FORMAT = "kg-snapshot"
SNAPSHOT_VERSION = 1


def _node_record(node: Node) -> dict:
    return {
        "t": "node",
        "id": node.id,
        "kind": node.kind,
        "canonical_name": node.canonical_name,
        "aliases": sorted(node.aliases),
        "attributes": [
            {
                "key": a.key,
                "value": a.value,
                "source": a.source,
                "observed_at": to_rfc3339(a.observed_at),
            }
            for a in sorted(node.attributes, key=lambda a: (a.key, a.source))
        ],
        "created_at": to_rfc3339(node.created_at),
        "last_seen": to_rfc3339(node.last_seen),
    }


def _edge_record(edge: Edge) -> dict:
    return {
        "t": "edge",
        "src": edge.src,
        "dst": edge.dst,
        "kind": edge.kind,
        "weight": edge.weight,
        "created_at": to_rfc3339(edge.created_at),
    }


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def snapshot_lines(kg: KnowledgeGraph) -> list[str]:
    """Canonical serialization as a list of JSON lines (header first)."""
    lines = [_dump({"format": SNAPSHOT_FORMAT, "version": SNAPSHOT_VERSION})]
    lines.extend(_dump(_node_record(n)) for n in kg.nodes())
    lines.extend(_dump(_edge_record(e)) for e in kg.edges())
    return lines


def save_snapshot(kg: KnowledgeGraph, path: Union[str, Path]) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(snapshot_lines(kg)) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def load_snapshot(path: Union[str, Path]) -> KnowledgeGraph:
    path = Path(path)
    nodes: list[Node] = []
    edges: list[Edge] = []
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
                if record.get("format") != SNAPSHOT_FORMAT:
                    raise SnapshotParseError(line_no, "missing kg-snapshot header")
                if record.get("version") != SNAPSHOT_VERSION:
                    raise SnapshotVersionError(
                        f"snapshot version {record.get('version')!r} unsupported "
                        f"(expected {SNAPSHOT_VERSION})"
                    )
                continue
            try:
                kind = record["t"]
                if kind == "node":
                    nodes.append(_parse_node(record))
                elif kind == "edge":
                    edges.append(_parse_edge(record))
                else:
                    raise SnapshotParseError(line_no, f"unknown record type {kind!r}")
            except SnapshotParseError:
                raise
            except (KeyError, TypeError, ValueError) as exc:
                raise SnapshotParseError(line_no, f"bad record: {exc}") from exc
    kg = KnowledgeGraph()
    kg.load(nodes, edges)
    return kg


def _parse_node(record: dict) -> Node:
    return Node(
        id=record["id"],
        kind=record["kind"],
        canonical_name=record["canonical_name"],
        aliases=set(record["aliases"]),
        attributes=[
            Attribute(
                key=a["key"],
                value=a["value"],
                source=a["source"],
                observed_at=from_rfc3339(a["observed_at"]),
            )
            for a in record.get("attributes", [])
        ],
        created_at=from_rfc3339(record["created_at"]),
        last_seen=from_rfc3339(record["last_seen"]),
    )


def _parse_edge(record: dict) -> Edge:
    return Edge(
        src=record["src"],
        dst=record["dst"],
        kind=record["kind"],
        weight=float(record["weight"]),
        created_at=from_rfc3339(record["created_at"]),
    )
