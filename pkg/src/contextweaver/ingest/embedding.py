"""Deterministic text embeddings for event similarity.

Recipe: lowercase, take contiguous character 3-grams, hash each gram into
256 buckets with FNV-1a (fixed offset/prime, so identical across runs and
platforms), count occurrences, L2-normalize. Texts shorter than three
characters use the whole text as a single gram so that only empty text
maps to the zero vector. Learned embedders can be swapped in behind the
TextEmbedder protocol.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

EMBEDDING_DIM = 256

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def _fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def char_ngrams(text: str, n: int = 3) -> list[str]:
    if len(text) >= n:
        return [text[i : i + n] for i in range(len(text) - n + 1)]
    if text:
        return [text]
    return []


def embed_text(text: str, dim: int = EMBEDDING_DIM) -> np.ndarray:
    """Unit-norm embedding of text; zero vector only for empty text."""
    vec = np.zeros(dim, dtype=np.float64)
    for gram in char_ngrams(text.lower()):
        vec[_fnv1a(gram.encode("utf-8")) % dim] += 1.0
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; zero vectors compare as 0."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


class TextEmbedder(Protocol):
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


class HashedTrigramEmbedder:
    """Default embedder wrapping :func:`embed_text`."""

    def __init__(self, dim: int = EMBEDDING_DIM):
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        return embed_text(text, self.dim)
