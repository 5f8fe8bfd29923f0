"""Exception hierarchy shared by all contextweaver components."""


class ContextWeaverError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ContextWeaverError):
    """Input violates a documented invariant (bad kind, empty field, ...)."""


class DanglingEdgeError(ValidationError):
    """Edge references a node that is not present in the graph."""


class NotFoundError(ContextWeaverError):
    """Referenced entity (node, message, queue entry) does not exist."""


class ConflictError(ContextWeaverError):
    """Operation clashes with current state (already decided / resolved / running)."""


class SnapshotError(ContextWeaverError):
    """Base class for snapshot persistence failures."""


class SnapshotParseError(SnapshotError):
    """Snapshot file is malformed; carries the 1-based offending line number."""

    def __init__(self, line_no: int, detail: str):
        super().__init__(f"line {line_no}: {detail}")
        self.line_no = line_no
        self.detail = detail


class SnapshotVersionError(SnapshotError):
    """Snapshot was written with an unsupported format version."""


class FetchError(ContextWeaverError):
    """Feed adapter could not be reached; the ingest cycle is skipped."""


class IngestError(ContextWeaverError):
    """Applying a news item to the graph failed."""


class ConsistencyError(ContextWeaverError):
    """Cache and graph disagree (e.g. cached event node missing from the KG)."""


class GenerationError(ContextWeaverError):
    """Text-generation backend failed or timed out; the draft stays retryable."""


class NoRecipientError(ContextWeaverError):
    """The message names no linkable recipient; nothing can be generated."""


class ConfigError(ContextWeaverError):
    """Startup configuration is invalid; message names the offending field."""

    def __init__(self, field: str, detail: str):
        super().__init__(f"{field}: {detail}")
        self.field = field
        self.detail = detail
