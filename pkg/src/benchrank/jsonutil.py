"""Canonical JSON rendering shared by the CLI, the store and the HTTP API.

Every machine-readable document the project emits goes through one of these
two functions so that the same logical document is always byte-identical,
no matter which surface produced it.
"""

from __future__ import annotations

import json
from typing import Any


def canonical_json(doc: Any) -> str:
    """Pretty canonical form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def canonical_line(doc: Any) -> str:
    """Compact canonical form used for one-record-per-line logs."""
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
