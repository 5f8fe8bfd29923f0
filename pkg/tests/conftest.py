"""Shared fixtures and graph builders for the test suite."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import pytest

from contextweaver.kg import Attribute, Edge, EdgeKind, KnowledgeGraph, Node, NodeKind

# Fixed reference instant so every derived value in the suite is reproducible.
NOW = datetime(2026, 3, 14, 12, 0, 0, tzinfo=timezone.utc)


def ts(hours_ago: float = 0.0) -> datetime:
    return NOW - timedelta(hours=hours_ago)


def make_node(node_id, kind=NodeKind.PERSON, name=None, aliases=(), attrs=(), last_seen=None):
    attributes = [
        Attribute(key=k, value=v, source=s, observed_at=o if o is not None else ts(24))
        for (k, v, s, o) in attrs
    ]
    if kind == NodeKind.EVENT and not any(a.key == "status" for a in attributes):
        attributes.append(Attribute("status", "ongoing", "feed", ts(24)))
    return Node(
        id=node_id,
        kind=kind,
        canonical_name=name or node_id,
        aliases=set(aliases),
        attributes=attributes,
        created_at=ts(48),
        last_seen=last_seen or ts(1),
    )


def make_edge(src, dst, kind, weight=1.0, created_at=None):
    return Edge(src=src, dst=dst, kind=kind, weight=weight, created_at=created_at or ts(24))


@pytest.fixture
def kg():
    return KnowledgeGraph()


def random_graph(rng: random.Random, max_nodes: int = 50) -> KnowledgeGraph:
    """Seeded random graph over all four node kinds with compatible edges."""
    kg = KnowledgeGraph()
    n_people = rng.randint(1, max(1, max_nodes // 3))
    n_locations = rng.randint(1, max(1, max_nodes // 4))
    n_topics = rng.randint(1, max(1, max_nodes // 4))
    n_events = rng.randint(0, max(1, max_nodes // 4))
    names = ["Alex", "Sam", "Jordan", "Riley", "Casey", "Morgan", "Jamie", "Drew"]
    for i in range(n_people):
        kg.upsert_node(make_node(
            f"p{i:03d}", NodeKind.PERSON, name=rng.choice(names),
            aliases={f"person {i}"},
            attrs=[("interest", rng.choice(["ai", "cooking", "surf"]), "profile", ts(rng.randint(1, 400)))],
            last_seen=ts(rng.randint(1, 360)),
        ))
    for i in range(n_locations):
        kg.upsert_node(make_node(
            f"l{i:03d}", NodeKind.LOCATION, name=f"City {i}",
            aliases={f"city{i}"}, last_seen=ts(rng.randint(1, 360)),
        ))
    for i in range(n_topics):
        kg.upsert_node(make_node(f"t{i:03d}", NodeKind.TOPIC, name=f"Topic {i}",
                                 last_seen=ts(rng.randint(1, 360))))
    for i in range(n_events):
        kg.upsert_node(make_node(f"e{i:03d}", NodeKind.EVENT, name=f"Event {i}",
                                 last_seen=ts(rng.randint(1, 360))))
    for i in range(n_people):
        if n_locations and rng.random() < 0.8:
            kg.upsert_edge(make_edge(f"p{i:03d}", f"l{rng.randrange(n_locations):03d}",
                                     EdgeKind.LOCATED_IN))
        for _ in range(rng.randint(0, 3)):
            kind = rng.choice([EdgeKind.INTERESTED_IN, EdgeKind.HAS_SKILL])
            kg.upsert_edge(make_edge(f"p{i:03d}", f"t{rng.randrange(n_topics):03d}", kind,
                                     weight=round(rng.random(), 3)))
        if n_events and rng.random() < 0.3:
            kg.upsert_edge(make_edge(f"p{i:03d}", f"e{rng.randrange(n_events):03d}",
                                     EdgeKind.ATTENDED))
    for i in range(n_events):
        if n_locations:
            kg.upsert_edge(make_edge(f"e{i:03d}", f"l{rng.randrange(n_locations):03d}",
                                     EdgeKind.OCCURS_AT))
    return kg
