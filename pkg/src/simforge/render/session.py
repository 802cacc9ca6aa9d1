"""Save and load parameter sessions as plain text.

Format (UTF-8, LF line endings):

    !session version=1 doc=<doc-id>
    # comment lines are ignored
    L = 1
    g0 = 9.81
    m = [1 2; 3 4]

Scalar values use the shortest decimal form that round-trips the double
(up to 17 significant digits); matrices use bracketed rows separated by
semicolons.
"""

from __future__ import annotations

import re
from typing import Optional

import numpy as np

from ..compiler.ir import ComputeIR
from ..document.model import SimulationDoc
from ..expr import fmt_real
from ..runtime.engine import ParamValuation, make_valuation

__all__ = ["SessionFormatError", "save_session", "load_session", "parse_session_text"]

_HEADER_RE = re.compile(r"^!session\s+version=(\d+)\s+doc=(\S+)\s*$")


class SessionFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def save_session(valuation: ParamValuation, doc_id: str) -> str:
    """One line per parameter, in valuation order."""
    lines = [f"!session version=1 doc={doc_id}"]
    for symbol, value in valuation.items():
        if isinstance(value, np.ndarray) and value.ndim == 2:
            rows = "; ".join(" ".join(fmt_real(v) for v in row) for row in value)
            lines.append(f"{symbol} = [{rows}]")
        else:
            lines.append(f"{symbol} = {fmt_real(float(value))}")
    return "\n".join(lines) + "\n"


def parse_session_text(text: str) -> tuple[str, dict]:
    """Parse session text into (doc_id, overrides).  Raises SessionFormatError."""
    doc_id: Optional[str] = None
    overrides: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if doc_id is None:
            match = _HEADER_RE.match(line)
            if match is None:
                raise SessionFormatError(
                    "expected header '!session version=1 doc=<id>'", lineno
                )
            if match.group(1) != "1":
                raise SessionFormatError(
                    f"unsupported session version {match.group(1)}", lineno
                )
            doc_id = match.group(2)
            continue
        if "=" not in line:
            raise SessionFormatError(f"expected 'symbol = value': {line!r}", lineno)
        symbol, _, rhs = line.partition("=")
        symbol = symbol.strip()
        rhs = rhs.strip()
        if not symbol:
            raise SessionFormatError("missing symbol before '='", lineno)
        if rhs.startswith("["):
            if not rhs.endswith("]"):
                raise SessionFormatError("unterminated matrix value", lineno)
            rows = []
            for row_text in rhs[1:-1].split(";"):
                entries = row_text.replace(",", " ").split()
                if not entries:
                    continue
                try:
                    rows.append([float(v) for v in entries])
                except ValueError:
                    raise SessionFormatError(
                        f"not a number in matrix: {row_text.strip()!r}", lineno
                    ) from None
            if not rows or any(len(r) != len(rows[0]) for r in rows):
                raise SessionFormatError("malformed matrix value", lineno)
            overrides[symbol] = rows
        else:
            try:
                overrides[symbol] = float(rhs)
            except ValueError:
                raise SessionFormatError(f"not a number: {rhs!r}", lineno) from None
    if doc_id is None:
        raise SessionFormatError("empty session file", 1)
    return doc_id, overrides


def load_session(
    text: str,
    doc: SimulationDoc,
    *,
    ir: Optional[ComputeIR] = None,
) -> tuple[ParamValuation, list[str]]:
    """Apply a session file on top of the document's defaults.

    The header doc id must match; unknown symbols are skipped with a warning
    and bounded values are clamped with a warning.
    """
    doc_id, overrides = parse_session_text(text)
    if doc_id != doc.doc_id:
        raise SessionFormatError(
            f"session file is for document {doc_id!r}, not {doc.doc_id!r}", 1
        )
    if ir is None:
        from ..compiler.lower import lower
        from ..document.localize import resolve_language

        ir, _ = lower(resolve_language(doc, None))

    known = {d.symbol for d in ir.param_decls}
    warnings = [
        f"unknown parameter {symbol}" for symbol in overrides if symbol not in known
    ]
    usable = {k: v for k, v in overrides.items() if k in known}
    valuation, clamp_warnings = make_valuation(ir, usable)
    return valuation, warnings + clamp_warnings
