"""In-process session store with idle expiry and per-session run locks."""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from ..compiler import ComputeIR, UiFormIR
from ..runtime.engine import ParamValuation, RunResult

__all__ = ["SessionError", "Session", "SessionStore"]


class SessionError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


@dataclass
class Session:
    session_id: str
    doc_id: str
    language: Optional[str]
    compute_ir: ComputeIR
    ui_ir: UiFormIR
    valuation: ParamValuation
    last_result: RunResult
    run_counter: int = 0
    last_activity: float = field(default_factory=time.monotonic)
    # serializes runs: at most one in-flight run per session
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def touch(self) -> None:
        self.last_activity = time.monotonic()


class SessionStore:
    def __init__(self, ttl_seconds: float = 1800.0):
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    @staticmethod
    def new_id() -> str:
        return secrets.token_hex(16)  # 128 bits

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.session_id] = session

    def get(self, session_id: str) -> Session:
        """Fetch a live session; an expired one answers 410 and is reclaimed."""
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise SessionError(404, f"unknown session {session_id!r}")
            if time.monotonic() - session.last_activity > self.ttl:
                del self._sessions[session_id]
                raise SessionError(410, "session expired")
            session.touch()
        self.sweep()
        return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise SessionError(404, f"unknown session {session_id!r}")
            del self._sessions[session_id]

    def sweep(self) -> None:
        """Reclaim every expired session."""
        now = time.monotonic()
        with self._lock:
            dead = [
                sid
                for sid, session in self._sessions.items()
                if now - session.last_activity > self.ttl
            ]
            for sid in dead:
                del self._sessions[sid]

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)
