"""Live HTTP adapter contracts, exercised against a local server."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from urllib.parse import parse_qs, urlparse

import pytest

from contextweaver.context import ContextBundle
from contextweaver.errors import FetchError, GenerationError
from contextweaver.generation import HttpGenerationClient, assemble_prompt
from contextweaver.ingest import HttpFeedAdapter, fetch_feed

from conftest import NOW, ts


class _Handler(BaseHTTPRequestHandler):
    feed_items = []
    llm_behavior = "ok"
    last_request = {}

    def log_message(self, *args):
        pass

    def _reply(self, status, payload):
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        url = urlparse(self.path)
        _Handler.last_request = {
            "path": url.path,
            "query": parse_qs(url.query),
            "auth": self.headers.get("Authorization"),
        }
        if url.path == "/feed":
            self._reply(200, _Handler.feed_items)
        elif url.path == "/broken":
            self._reply(200, {"not": "an array"})
        else:
            self._reply(404, {"detail": "nope"})

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length) or b"{}")
        _Handler.last_request = {"path": self.path, "body": body,
                                 "auth": self.headers.get("Authorization")}
        if _Handler.llm_behavior == "ok":
            self._reply(200, {"text": body["prompt"].splitlines()[3] + " [rewritten]"})
        elif _Handler.llm_behavior == "missing-text":
            self._reply(200, {"oops": True})
        else:
            self._reply(500, {"detail": "backend exploded"})


@pytest.fixture(scope="module")
def server():
    httpd = HTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_port}"
    httpd.shutdown()


class TestHttpFeedAdapter:
    def test_fetch_sends_topics_since_and_auth(self, server):
        _Handler.feed_items = [{
            "item_id": "h1", "headline": "Gale warning issued",
            "location_name": "New Harbor", "published_at": "2026-03-13T00:00:00Z",
        }]
        adapter = HttpFeedAdapter(f"{server}/feed", api_key="k123",
                                  topics=["weather", "protests"])
        items = fetch_feed(adapter, ts(100), NOW)
        assert [i.item_id for i in items] == ["h1"]
        assert _Handler.last_request["query"]["topics"] == ["weather,protests"]
        assert "since" in _Handler.last_request["query"]
        assert _Handler.last_request["auth"] == "Bearer k123"

    def test_non_array_payload_is_fetch_error(self, server):
        with pytest.raises(FetchError):
            HttpFeedAdapter(f"{server}/broken").fetch_raw(ts(1))

    def test_unreachable_endpoint_is_fetch_error(self):
        with pytest.raises(FetchError):
            HttpFeedAdapter("http://127.0.0.1:1/feed", timeout_s=0.2).fetch_raw(ts(1))


class TestHttpGenerationClient:
    def _prompt(self):
        return assemble_prompt("Hi Sam, hello.", ContextBundle(recipient="p", intent="Other"))

    def test_round_trip(self, server):
        _Handler.llm_behavior = "ok"
        client = HttpGenerationClient(f"{server}/complete", api_key="k9", model="m-1")
        text, model_id = client.complete(self._prompt())
        assert text == "Hi Sam, hello. [rewritten]"
        assert model_id == "m-1"
        assert _Handler.last_request["body"]["model_id"] == "m-1"
        assert _Handler.last_request["auth"] == "Bearer k9"

    def test_missing_text_field_is_generation_error(self, server):
        _Handler.llm_behavior = "missing-text"
        with pytest.raises(GenerationError):
            HttpGenerationClient(f"{server}/complete").complete(self._prompt())

    def test_server_error_is_generation_error(self, server):
        _Handler.llm_behavior = "boom"
        with pytest.raises(GenerationError):
            HttpGenerationClient(f"{server}/complete").complete(self._prompt())
