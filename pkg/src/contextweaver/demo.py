"""Small seeded graph used by the examples, demos, and end-to-end tests.

People, locations, topics, and one ongoing weather event, including two
persons sharing the alias "Alex" to exercise the ambiguity queue.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone
from typing import Optional

from .kg import Attribute, Edge, EdgeKind, KnowledgeGraph, Node, NodeKind

DEMO_NOW = datetime(2026, 3, 14, 12, 0, 0, tzinfo=timezone.utc)


def build_demo_graph(kg: Optional[KnowledgeGraph] = None,
                     now: datetime = DEMO_NOW) -> KnowledgeGraph:
    kg = kg or KnowledgeGraph()
    day = timedelta(days=1)

    def node(node_id, kind, name, aliases=(), attrs=(), last_seen=None):
        kg.upsert_node(Node(
            id=node_id, kind=kind, canonical_name=name, aliases=set(aliases),
            attributes=[Attribute(k, v, s, now - day * age) for k, v, s, age in attrs],
            created_at=now - 30 * day, last_seen=last_seen or (now - day),
        ))

    def edge(src, dst, kind, age_days=7):
        kg.upsert_edge(Edge(src=src, dst=dst, kind=kind, weight=1.0,
                            created_at=now - day * age_days))

    node("springfield", NodeKind.LOCATION, "Springfield",
         attrs=[("cultural_greeting", "Howdy", "location_corpus", 20),
                ("description", "riverside city with a historic mill district",
                 "location_corpus", 20)])
    node("san-francisco", NodeKind.LOCATION, "San Francisco", aliases={"SF"},
         attrs=[("description", "coastal tech hub by the bay", "location_corpus", 20)])

    node("john", NodeKind.PERSON, "John",
         attrs=[("interest", "cardiology", "profile", 3)])
    node("rahul", NodeKind.PERSON, "Rahul")
    node("emily", NodeKind.PERSON, "Emily",
         attrs=[("role", "product designer", "profile", 5)])
    node("aisha", NodeKind.PERSON, "Aisha",
         attrs=[("preference", "culturally relevant recipes", "profile", 4)])
    # the ambiguous pair: same alias, identical last_seen so scores tie exactly
    node("alex-kim", NodeKind.PERSON, "Alex Kim", aliases={"Alex"},
         last_seen=now - day)
    node("alex-singh", NodeKind.PERSON, "Alex Singh", aliases={"Alex"},
         last_seen=now - day)

    node("topic-ml", NodeKind.TOPIC, "machine learning", aliases={"ML"})
    node("topic-ai", NodeKind.TOPIC, "AI")
    node("topic-design", NodeKind.TOPIC, "product design")

    node("evt-rain", NodeKind.EVENT, "Heavy rain expected",
         attrs=[("category", "Weather", "feed", 0),
                ("status", "ongoing", "feed", 0)],
         last_seen=now - timedelta(hours=2))

    edge("john", "springfield", EdgeKind.LOCATED_IN)
    edge("emily", "san-francisco", EdgeKind.LOCATED_IN)
    edge("alex-kim", "springfield", EdgeKind.LOCATED_IN)
    edge("alex-singh", "springfield", EdgeKind.LOCATED_IN)
    edge("rahul", "topic-ml", EdgeKind.HAS_SKILL, age_days=10)
    edge("alex-kim", "topic-ai", EdgeKind.INTERESTED_IN, age_days=5)
    edge("alex-singh", "topic-ai", EdgeKind.INTERESTED_IN, age_days=5)
    edge("emily", "topic-design", EdgeKind.HAS_SKILL, age_days=12)
    edge("evt-rain", "springfield", EdgeKind.OCCURS_AT, age_days=0)
    return kg
