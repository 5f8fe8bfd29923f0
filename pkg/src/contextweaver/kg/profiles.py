"""Profile fixture ingestion.

Profiles replace live social/biography crawling: a directory of record
files, one person or location per record, with the same field names as
Node/Attribute. A file may hold a single JSON object, a JSON array, or
line-delimited JSON.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Union

from ..errors import ValidationError
from ..timeutil import from_rfc3339, utcnow
from .model import Attribute, Node, NodeKind
from .store import KnowledgeGraph

logger = logging.getLogger(__name__)

_PROFILE_KINDS = (NodeKind.PERSON, NodeKind.LOCATION)


def _iter_records(path: Path):
    text = path.read_text(encoding="utf-8").strip()
    if not text:
        return
    if text.startswith("["):
        yield from json.loads(text)
        return
    for line in text.splitlines():
        line = line.strip()
        if line:
            yield json.loads(line)


def parse_profile_record(record: dict, kg: KnowledgeGraph) -> Node:
    kind = record.get("kind")
    if kind not in _PROFILE_KINDS:
        raise ValidationError(f"profile records must be Person or Location, got {kind!r}")
    name = record.get("canonical_name")
    if not name:
        raise ValidationError("profile record needs a canonical_name")
    now = utcnow()
    attributes = [
        Attribute(
            key=a["key"],
            value=a["value"],
            source=a.get("source", "profile"),
            observed_at=from_rfc3339(a["observed_at"]) if "observed_at" in a else now,
        )
        for a in record.get("attributes", [])
    ]
    node_id = record.get("id") or kg.new_node_id(kind.lower())
    return Node(
        id=node_id,
        kind=kind,
        canonical_name=name,
        aliases=set(record.get("aliases", [])),
        attributes=attributes,
        created_at=from_rfc3339(record["created_at"]) if "created_at" in record else now,
        last_seen=from_rfc3339(record["last_seen"]) if "last_seen" in record else now,
    )


def load_profile_dir(kg: KnowledgeGraph, directory: Union[str, Path]) -> int:
    """Upsert every profile record found under a directory; returns the count.

    Records that fail validation are skipped with a warning so one bad file
    cannot block the rest of the batch.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ValidationError(f"profile directory {directory} does not exist")
    loaded = 0
    for path in sorted(directory.iterdir()):
        if path.is_dir() or path.name.startswith("."):
            continue
        try:
            records = list(_iter_records(path))
        except (json.JSONDecodeError, OSError) as exc:
            logger.warning("profile file %s skipped: %s", path.name, exc)
            continue
        for record in records:
            try:
                kg.upsert_node(parse_profile_record(record, kg))
                loaded += 1
            except (ValidationError, KeyError, TypeError, ValueError) as exc:
                logger.warning("profile record in %s skipped: %s", path.name, exc)
    return loaded
