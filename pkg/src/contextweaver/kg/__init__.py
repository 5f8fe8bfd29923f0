"""Typed property-graph store for people, locations, events, and topics."""

from .model import (
    Attribute,
    AttributeSource,
    Edge,
    EdgeKind,
    EventStatus,
    Node,
    NodeKind,
    normalize_name,
)
from .store import KnowledgeGraph
from .snapshot import SNAPSHOT_VERSION, load_snapshot, save_snapshot, snapshot_lines
from .profiles import load_profile_dir

__all__ = [
    "Attribute",
    "AttributeSource",
    "Edge",
    "EdgeKind",
    "EventStatus",
    "KnowledgeGraph",
    "Node",
    "NodeKind",
    "SNAPSHOT_VERSION",
    "load_profile_dir",
    "load_snapshot",
    "normalize_name",
    "save_snapshot",
    "snapshot_lines",
]
