"""HTTP facade, configuration, runtime wiring, and CLI."""

from .config import ServiceConfig, load_config
from .runtime import Runtime
from .app import create_app

__all__ = ["Runtime", "ServiceConfig", "create_app", "load_config"]
