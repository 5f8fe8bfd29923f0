"""UTC timestamp helpers.

Everything in the system is timezone-aware UTC. Serialized timestamps are
RFC 3339 strings with a ``Z`` suffix; Python 3.10's ``fromisoformat`` does
not accept ``Z``, hence the parse helper here.
"""

from __future__ import annotations

from datetime import datetime, timezone

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def ensure_utc(dt: datetime) -> datetime:
    """Coerce a datetime to timezone-aware UTC (naive input is taken as UTC)."""
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def to_rfc3339(dt: datetime) -> str:
    return ensure_utc(dt).isoformat().replace("+00:00", "Z")


def from_rfc3339(value: str) -> datetime:
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    return ensure_utc(datetime.fromisoformat(text))
