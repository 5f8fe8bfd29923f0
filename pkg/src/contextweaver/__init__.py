"""Context-aware message enrichment backed by a typed knowledge graph.

Subpackages:
    kg          -- property-graph store, snapshot persistence, profile loading
    ingest      -- news feed adapters, event classification, dedup, KG linking
    linking     -- mention extraction, candidate scoring, ambiguity queue
    context     -- intent classification, attribute ranking, context bundles
    generation  -- prompt assembly, generation clients, review lifecycle
    service     -- HTTP API, configuration, runtime wiring, CLI

The top-level module keeps only shared error types and time helpers so the
subpackages stay independently importable.
"""

__version__ = "0.1.0"
