"""Service configuration: YAML file plus environment overrides.

Every table the pipelines consume (classifier keywords, intent rules,
location gate, affinity matrix, scorer weights) can be overridden here and
is validated at startup; a bad field aborts with a ConfigError naming it.
Environment variables CW_FEED_URL, CW_FEED_KEY, CW_LLM_URL, CW_LLM_KEY,
CW_LLM_MODEL, and CW_DATA_DIR override their file counterparts.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Union

import yaml

from ..context import AffinityTable, RuleIntentClassifier, RuleLocationGate
from ..errors import ConfigError
from ..generation.prompt import DEFAULT_PREAMBLE
from ..ingest.cache import DEFAULT_SIMILARITY_THRESHOLD
from ..linking.scoring import (
    DEFAULT_ACCEPT_FLOOR,
    DEFAULT_AMBIGUITY_MARGIN,
    DEFAULT_CANDIDATE_FLOOR,
    ScoringWeights,
)

MIN_FEED_PERIOD_S = 60

ENV_CONFIG = "CW_CONFIG"
_ENV_OVERRIDES = {
    "CW_FEED_URL": ("feed", "url"),
    "CW_FEED_KEY": ("feed", "key"),
    "CW_LLM_URL": ("llm", "url"),
    "CW_LLM_KEY": ("llm", "key"),
    "CW_LLM_MODEL": ("llm", "model"),
    "CW_DATA_DIR": ("data_dir",),
}


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8040
    data_dir: str = "./cw-data"
    auth_token: Optional[str] = None
    # feed
    feed_url: Optional[str] = None
    feed_key: Optional[str] = None
    feed_topics: list[str] = field(default_factory=list)
    feed_period_s: int = 3600
    # llm
    llm_url: str = "stub:"
    llm_key: Optional[str] = None
    llm_model: str = "stub"
    # retention
    event_ttl_h: float = 72.0
    sweep_period_s: int = 3600
    # dedup
    similarity_threshold: float = DEFAULT_SIMILARITY_THRESHOLD
    # linking
    accept_floor: float = DEFAULT_ACCEPT_FLOOR
    ambiguity_margin: float = DEFAULT_AMBIGUITY_MARGIN
    candidate_floor: float = DEFAULT_CANDIDATE_FLOOR
    weights: ScoringWeights = field(default_factory=ScoringWeights)
    # context
    top_k: int = 5
    recency_half_life_days: float = 90.0
    affinity: AffinityTable = field(default_factory=AffinityTable)
    intent_classifier: RuleIntentClassifier = field(default_factory=RuleIntentClassifier)
    location_gate: RuleLocationGate = field(default_factory=RuleLocationGate)
    # prompt / persistence / api
    preamble: str = DEFAULT_PREAMBLE
    snapshot_period_s: int = 300
    page_size: int = 50
    profiles_dir: Optional[str] = None

    def validate(self) -> None:
        if not self.data_dir:
            raise ConfigError("data_dir", "must be non-empty")
        if not (1 <= self.port <= 65535):
            raise ConfigError("listen.port", f"{self.port} outside [1, 65535]")
        if self.feed_period_s < MIN_FEED_PERIOD_S:
            raise ConfigError("feed.period_s",
                              f"{self.feed_period_s} below minimum {MIN_FEED_PERIOD_S}")
        if not (0.0 < self.similarity_threshold <= 1.0):
            raise ConfigError("dedup.similarity_threshold",
                              f"{self.similarity_threshold} outside (0, 1]")
        for name, value in [("linking.accept_floor", self.accept_floor),
                            ("linking.ambiguity_margin", self.ambiguity_margin),
                            ("linking.candidate_floor", self.candidate_floor)]:
            if not (0.0 <= value <= 1.0):
                raise ConfigError(name, f"{value} outside [0, 1]")
        for name in ("name_sim", "alias_exact", "kind_match", "location_prior", "recency"):
            if getattr(self.weights, name) < 0.0:
                raise ConfigError(f"linking.weights.{name}", "must be >= 0")
        if self.top_k < 0:
            raise ConfigError("context.top_k", "must be >= 0")
        if self.recency_half_life_days <= 0.0:
            raise ConfigError("context.recency_half_life_days", "must be > 0")
        if self.event_ttl_h <= 0.0:
            raise ConfigError("retention.event_ttl_h", "must be > 0")
        if self.sweep_period_s <= 0:
            raise ConfigError("retention.sweep_period_s", "must be > 0")
        if self.snapshot_period_s <= 0:
            raise ConfigError("snapshot_period_s", "must be > 0")
        if self.page_size <= 0:
            raise ConfigError("page_size", "must be > 0")

    @property
    def data_path(self) -> Path:
        return Path(self.data_dir)


def _get(raw: Mapping[str, Any], *path: str, default: Any = None) -> Any:
    node: Any = raw
    for part in path:
        if not isinstance(node, Mapping) or part not in node:
            return default
        node = node[part]
    return node


def _typed(raw: Mapping[str, Any], caster, field_name: str, *path: str, default: Any):
    value = _get(raw, *path, default=default)
    if value is None:
        return default  # explicit nulls fall back like absent keys
    try:
        return caster(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(field_name, f"bad value {value!r}: {exc}") from exc


def load_config(path: Optional[Union[str, Path]] = None,
                env: Optional[Mapping[str, str]] = None) -> ServiceConfig:
    """Read config from a YAML file (optional) and apply env overrides."""
    env = env if env is not None else os.environ
    if path is None and env.get(ENV_CONFIG):
        path = env[ENV_CONFIG]
    raw: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from exc
        loaded = yaml.safe_load(text) or {}
        if not isinstance(loaded, dict):
            raise ConfigError("config", f"{path} must contain a mapping")
        raw = loaded
    for var, target in _ENV_OVERRIDES.items():
        if env.get(var):
            node = raw
            for part in target[:-1]:
                node = node.setdefault(part, {})
            node[target[-1]] = env[var]

    weights_raw = _get(raw, "linking", "weights", default=None)
    if weights_raw is not None:
        known = {"name_sim", "alias_exact", "kind_match", "location_prior", "recency"}
        unknown = set(weights_raw) - known
        if unknown:
            raise ConfigError("linking.weights", f"unknown feature(s) {sorted(unknown)}")
        try:
            weights = ScoringWeights(**{k: float(v) for k, v in weights_raw.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError("linking.weights", str(exc)) from exc
    else:
        weights = ScoringWeights()

    affinity_raw = _get(raw, "context", "affinity", default=None)
    affinity = AffinityTable(affinity_raw) if affinity_raw else AffinityTable()
    rules_raw = _get(raw, "context", "intent_rules", default=None)
    if rules_raw is not None:
        try:
            rules = [(entry["intent"], tuple(entry["phrases"])) for entry in rules_raw]
        except (TypeError, KeyError) as exc:
            raise ConfigError("context.intent_rules",
                              "entries need intent and phrases fields") from exc
        classifier = RuleIntentClassifier(rules)
    else:
        classifier = RuleIntentClassifier()
    gate_raw = _get(raw, "context", "location_gate", default=None)
    gate = RuleLocationGate(gate_raw) if gate_raw else RuleLocationGate()

    topics = _get(raw, "feed", "topics", default=[]) or []
    if not isinstance(topics, list):
        raise ConfigError("feed.topics", "must be a list of strings")

    config = ServiceConfig(
        host=str(_get(raw, "listen", "host", default="127.0.0.1")),
        port=_typed(raw, int, "listen.port", "listen", "port", default=8040),
        data_dir=str(_get(raw, "data_dir", default="./cw-data")),
        auth_token=_get(raw, "auth_token", default=None),
        feed_url=_get(raw, "feed", "url", default=None),
        feed_key=_get(raw, "feed", "key", default=None),
        feed_topics=[str(t) for t in topics],
        feed_period_s=_typed(raw, int, "feed.period_s", "feed", "period_s", default=3600),
        llm_url=str(_get(raw, "llm", "url", default="stub:")),
        llm_key=_get(raw, "llm", "key", default=None),
        llm_model=str(_get(raw, "llm", "model", default="stub")),
        event_ttl_h=_typed(raw, float, "retention.event_ttl_h",
                           "retention", "event_ttl_h", default=72.0),
        sweep_period_s=_typed(raw, int, "retention.sweep_period_s",
                              "retention", "sweep_period_s", default=3600),
        similarity_threshold=_typed(raw, float, "dedup.similarity_threshold",
                                    "dedup", "similarity_threshold",
                                    default=DEFAULT_SIMILARITY_THRESHOLD),
        accept_floor=_typed(raw, float, "linking.accept_floor",
                            "linking", "accept_floor", default=DEFAULT_ACCEPT_FLOOR),
        ambiguity_margin=_typed(raw, float, "linking.ambiguity_margin",
                                "linking", "ambiguity_margin",
                                default=DEFAULT_AMBIGUITY_MARGIN),
        candidate_floor=_typed(raw, float, "linking.candidate_floor",
                               "linking", "candidate_floor",
                               default=DEFAULT_CANDIDATE_FLOOR),
        weights=weights,
        top_k=_typed(raw, int, "context.top_k", "context", "top_k", default=5),
        recency_half_life_days=_typed(raw, float, "context.recency_half_life_days",
                                      "context", "recency_half_life_days", default=90.0),
        affinity=affinity,
        intent_classifier=classifier,
        location_gate=gate,
        preamble=str(_get(raw, "prompt", "preamble", default=DEFAULT_PREAMBLE)),
        snapshot_period_s=_typed(raw, int, "snapshot_period_s",
                                 "snapshot_period_s", default=300),
        page_size=_typed(raw, int, "page_size", "page_size", default=50),
        profiles_dir=_get(raw, "profiles_dir", default=None),
    )
    config.validate()
    return config
