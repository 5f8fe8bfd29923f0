"""HTTP/JSON API over a Runtime.

Status mapping: malformed bodies are 400, unknown ids 404, state conflicts
409, unlinked recipients and rejected resolution targets 422, generation
backend failures 503. All payload field names mirror the domain types.
"""

from __future__ import annotations

from typing import Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..errors import (
    ConflictError,
    GenerationError,
    NoRecipientError,
    NotFoundError,
    ValidationError,
)
from ..generation import DraftRequest, MessageState
from ..generation.pipeline import BLOCKED_GENERATION
from ..linking import MessageMetadata
from .runtime import Runtime


class MetadataBody(BaseModel):
    sender_id: Optional[str] = None
    sender_location: Optional[str] = None
    formality: str = "unknown"
    channel: str = ""


class DraftBody(BaseModel):
    request_id: str = Field(min_length=1)
    raw_message: str = Field(min_length=1)
    metadata: MetadataBody = Field(default_factory=MetadataBody)
    domain: str = "other"


class DecisionBody(BaseModel):
    decision: str
    actor: str = "operator"


class ResolutionBody(BaseModel):
    node_id: Optional[str] = None
    reject: bool = False
    actor: str = "operator"


def create_app(runtime: Runtime) -> FastAPI:
    app = FastAPI(title="contextweaver", version="0.1.0")

    def require_auth(authorization: Optional[str] = Header(default=None)) -> None:
        token = runtime.config.auth_token
        if token and authorization != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or bad bearer token")

    guarded = [Depends(require_auth)]

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(ValidationError)
    async def domain_validation(request: Request, exc: ValidationError):
        status = 422 if request.url.path.startswith("/v1/ambiguities") else 400
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.exception_handler(NotFoundError)
    async def not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(ConflictError)
    async def conflict(request: Request, exc: ConflictError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(NoRecipientError)
    async def no_recipient(request: Request, exc: NoRecipientError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(GenerationError)
    async def generation_down(request: Request, exc: GenerationError):
        return JSONResponse(status_code=503, content={"detail": str(exc)})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "nodes": runtime.kg.node_count()}

    @app.post("/v1/messages", status_code=201, dependencies=guarded)
    def submit_message(body: DraftBody):
        request = DraftRequest(
            request_id=body.request_id,
            raw_message=body.raw_message,
            metadata=MessageMetadata(
                sender_id=body.metadata.sender_id,
                sender_location=body.metadata.sender_location,
                formality=body.metadata.formality,
                channel=body.metadata.channel,
            ),
            domain=body.domain,
        )
        message = runtime.submit(request)
        if message.blocked_reason == BLOCKED_GENERATION:
            return JSONResponse(status_code=503, content={
                "detail": "generation backend unavailable; draft stored for retry",
                "message": message.as_dict(),
            })
        return message.as_dict()

    @app.get("/v1/reviews", dependencies=guarded)
    def list_reviews(state: str = Query(default=MessageState.PENDING),
                     cursor: Optional[str] = None,
                     limit: Optional[int] = Query(default=None, ge=1, le=500)):
        if state not in MessageState.ALL:
            raise ValidationError(f"unknown state {state!r}")
        items, next_cursor = runtime.store.list(
            state=state, cursor=cursor, limit=limit or runtime.config.page_size)
        return {"items": [m.as_dict() for m in items], "next_cursor": next_cursor}

    @app.post("/v1/reviews/{message_id}/decision", dependencies=guarded)
    def decide_review(message_id: str, body: DecisionBody):
        if body.decision not in ("accept", "discard"):
            raise ValidationError(f"decision must be accept|discard, got {body.decision!r}")
        return runtime.decide(message_id, body.decision, body.actor).as_dict()

    @app.get("/v1/ambiguities", dependencies=guarded)
    def list_ambiguities():
        return {"items": [entry.as_dict() for entry in runtime.queue.list_open()]}

    @app.post("/v1/ambiguities/{queue_id}/resolution", dependencies=guarded)
    def resolve_ambiguity(queue_id: str, body: ResolutionBody):
        if body.reject == (body.node_id is not None):
            raise ValidationError("provide exactly one of node_id or reject=true")
        entry, resumed = runtime.resolve_ambiguity(queue_id, body.node_id, body.actor)
        return {"entry": entry, "message": resumed.as_dict() if resumed else None}

    @app.get("/v1/metrics", dependencies=guarded)
    def metrics():
        return runtime.metrics().as_dict()

    @app.post("/v1/ingest/run", dependencies=guarded)
    def ingest_run():
        return runtime.ingest_once().as_dict()

    @app.post("/v1/maintenance/sweep", dependencies=guarded)
    def sweep_run():
        return runtime.sweep_once().as_dict()

    @app.get("/v1/kg/nodes/{node_id}", dependencies=guarded)
    def get_node(node_id: str):
        return runtime.node_with_edges(node_id)

    return app
