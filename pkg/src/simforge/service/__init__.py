"""HTTP session service and offline static publisher."""

from .app import ServiceConfig, create_app, serve
from .publish import publish_static
from .registry import RegistryError, RegistryEntry, SimulationRegistry
from .sessions import Session, SessionError, SessionStore

__all__ = [
    "RegistryEntry",
    "RegistryError",
    "ServiceConfig",
    "Session",
    "SessionError",
    "SessionStore",
    "SimulationRegistry",
    "create_app",
    "publish_static",
    "serve",
]
