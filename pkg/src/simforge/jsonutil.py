"""Canonical JSON serialization shared by the IR emitters and the service.

Canonical means: sorted keys, no insignificant whitespace, UTF-8 text, and
floats printed with Python's shortest round-trip repr.  Identical logical
content always produces identical bytes.
"""

from __future__ import annotations

import json
import math
from typing import Any

__all__ = ["canonical_dumps", "sanitize_floats"]


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sanitize_floats(obj: Any) -> Any:
    """Replace non-finite floats with None (JSON has no NaN/Inf)."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: sanitize_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize_floats(v) for v in obj]
    return obj
