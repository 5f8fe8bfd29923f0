"""Text-generation backends.

The stub client renders a normative deterministic concatenation so
end-to-end tests are byte-exact:

    text = original                                   (no context clauses)
    text = original + ", " + "; ".join(clauses)       (otherwise)

where clauses are the prompt's bullet lines minus the "- " prefix, in
section order. The HTTP client POSTs {prompt, model_id} and expects
{text}; any transport or payload failure raises GenerationError so the
draft stays retryable.
"""

from __future__ import annotations

from typing import Optional, Protocol

import requests

from ..errors import GenerationError
from .prompt import Prompt

STUB_MODEL_ID = "stub"
STUB_URL_PREFIX = "stub:"


class GenerationClient(Protocol):
    def complete(self, prompt: Prompt) -> tuple[str, str]:
        """Returns (text, model_id)."""
        ...


class StubGenerationClient:
    def complete(self, prompt: Prompt) -> tuple[str, str]:
        clauses = prompt.clauses()
        if not clauses:
            return prompt.original, STUB_MODEL_ID
        return prompt.original + ", " + "; ".join(clauses), STUB_MODEL_ID


class HttpGenerationClient:
    def __init__(self, url: str, api_key: Optional[str] = None,
                 model: str = "default", timeout_s: float = 30.0):
        self.url = url
        self.api_key = api_key
        self.model = model
        self.timeout_s = timeout_s

    def complete(self, prompt: Prompt) -> tuple[str, str]:
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            response = requests.post(
                self.url,
                json={"prompt": prompt.render(), "model_id": self.model},
                headers=headers,
                timeout=self.timeout_s,
            )
            response.raise_for_status()
            payload = response.json()
            text = payload["text"]
        except (requests.RequestException, ValueError, KeyError, TypeError) as exc:
            raise GenerationError(f"generation backend {self.url} failed: {exc}") from exc
        return text, self.model


def build_client(url: str, api_key: Optional[str] = None,
                 model: str = "default") -> GenerationClient:
    """stub: URLs select the deterministic stub; anything else goes remote."""
    if not url or url.startswith(STUB_URL_PREFIX):
        return StubGenerationClient()
    return HttpGenerationClient(url, api_key, model)


def generate(prompt: Prompt, client: GenerationClient) -> tuple[str, str]:
    return client.complete(prompt)
