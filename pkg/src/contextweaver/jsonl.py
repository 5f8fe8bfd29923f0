"""Append-only line-delimited JSON logs used for durable state."""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Iterator, Optional, Union


class JsonlAppendLog:
    """Thread-safe append-only JSONL file. Records are plain dicts."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        line = json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def records(self) -> Iterator[dict]:
        yield from read_jsonl(self.path)


def read_jsonl(path: Union[str, Path]) -> Iterator[dict]:
    path = Path(path)
    if not path.exists():
        return
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
