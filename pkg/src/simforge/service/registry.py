"""Startup-loaded collection of simulation documents plus an IR cache."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..compiler import ComputeIR, UiFormIR, lower
from ..document import (
    DocumentParseError,
    SimulationDoc,
    parse_document,
    resolve_language,
    validate,
)

__all__ = ["RegistryError", "RegistryEntry", "SimulationRegistry"]


class RegistryError(ValueError):
    pass


@dataclass
class RegistryEntry:
    doc_id: str
    path: Path
    doc: SimulationDoc
    title: str
    keywords: list[str]
    languages: list[str]
    notes: list[str] = field(default_factory=list)
    author: str = ""
    date: str = ""


class SimulationRegistry:
    """All documents under a directory; every one must validate at startup."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.entries: dict[str, RegistryEntry] = {}
        self._ir_cache: dict[tuple[str, Optional[str]], tuple[ComputeIR, UiFormIR]] = {}
        self._cache_lock = threading.Lock()
        self._load()

    def _load(self) -> None:
        if not self.directory.is_dir():
            raise RegistryError(f"not a directory: {self.directory}")
        problems: list[str] = []
        for path in sorted(self.directory.glob("*.xml")):
            doc_id = path.stem
            try:
                doc = parse_document(path.read_text(encoding="utf-8"), doc_id=doc_id)
            except DocumentParseError as exc:
                problems.extend(f"{path.name}:{e}" for e in exc.errors)
                continue
            report = validate(doc)
            if report.errors:
                problems.extend(f"{path.name}:{e}" for e in report.errors)
                continue
            view = resolve_language(doc, None)
            header = view.doc.header
            title = header.title if isinstance(header.title, str) else ""
            notes: list[str] = []
            for block in view.doc.notes:
                notes.extend(block if isinstance(block, list) else [])
            self.entries[doc_id] = RegistryEntry(
                doc_id=doc_id,
                path=path,
                doc=doc,
                title=title or doc_id,
                keywords=list(doc.header.keywords),
                languages=doc.languages(),
                notes=notes,
                author=header.author,
                date=header.date,
            )
        if problems:
            raise RegistryError(
                "invalid simulation documents:\n  " + "\n  ".join(problems)
            )

    def get(self, doc_id: str) -> Optional[RegistryEntry]:
        return self.entries.get(doc_id)

    def compiled(
        self, doc_id: str, language: Optional[str]
    ) -> tuple[ComputeIR, UiFormIR]:
        """Lowered IRs for (doc, language); immutable, so cached and shared."""
        key = (doc_id, language)
        with self._cache_lock:
            cached = self._ir_cache.get(key)
        if cached is not None:
            return cached
        entry = self.entries[doc_id]
        view = resolve_language(entry.doc, language)
        compiled = lower(view)
        with self._cache_lock:
            self._ir_cache[key] = compiled
        return compiled
