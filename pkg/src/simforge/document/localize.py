"""Collapse localized text to a single language.

resolve_language() deep-copies the document, replacing every LocalizedText
with the chosen variant (falling back to the default variant with a warning)
and every LocalizedBlock with its paragraph list.  The result is structurally
a SimulationDoc whose text fields hold plain strings.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

from ..expr import BinOp, Call, Neg, Num, Sym
from . import model as m

__all__ = ["LocalizedView", "resolve_language"]

_EXPR_NODES = (Num, Sym, Neg, BinOp, Call)


@dataclass
class LocalizedView:
    """A document with one language applied.

    `doc` mirrors SimulationDoc but LocalizedText fields hold str and notes
    variants hold list[str].  `languages` lists the tags available in the
    original document.
    """

    doc: m.SimulationDoc
    language: Optional[str]
    warnings: list[str]
    languages: list[str]


def resolve_language(
    doc: m.SimulationDoc, lang: Optional[str] = None
) -> LocalizedView:
    """Pick the `lang` variant of every localized element (default fallback)."""
    warnings: list[str] = []

    def walk(obj):
        if isinstance(obj, m.LocalizedText):
            text, fell_back = obj.resolve(lang)
            if fell_back:
                warnings.append(
                    f"no {lang!r} variant at line {obj.pos.line}; using default"
                )
            return text
        if isinstance(obj, m.LocalizedBlock):
            paras, fell_back = obj.resolve(lang)
            if fell_back:
                warnings.append(
                    f"no {lang!r} notes variant at line {obj.pos.line}; using default"
                )
            return list(paras)
        if isinstance(obj, _EXPR_NODES) or isinstance(obj, m.SourcePos):
            return obj
        if isinstance(obj, list):
            return [walk(v) for v in obj]
        if isinstance(obj, tuple):
            return tuple(walk(v) for v in obj)
        if isinstance(obj, dict):
            return {k: walk(v) for k, v in obj.items()}
        if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            values = {
                f.name: walk(getattr(obj, f.name))
                for f in dataclasses.fields(obj)
            }
            return type(obj)(**values)
        return obj

    return LocalizedView(
        doc=walk(doc),
        language=lang,
        warnings=warnings,
        languages=doc.languages(),
    )
