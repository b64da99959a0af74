from __future__ import annotations

import json
import sys
from datetime import datetime as _dt
from typing import Any, Dict, TextIO

_QUIET = False


def set_quiet(quiet: bool) -> None:
    """Silence info/ok/debug lines (warnings and errors are always shown)."""
    global _QUIET
    _QUIET = bool(quiet)


def log(level: str, msg: str, *, stream: TextIO | None = None) -> None:
    """Lightweight logger that prefixes messages with an ISO timestamp and a level.

    Diagnostics go to stderr; stdout is reserved for data records.
    """
    if _QUIET and level in {"info", "ok", "debug"}:
        return
    ts = _dt.now().isoformat(timespec='seconds')
    print(f"[{ts}] [{level}] {msg}", file=stream or sys.stderr)


def json_line(record: Dict[str, Any]) -> str:
    """Render one record as a single-line JSON object with stable key order."""
    return json.dumps(record, ensure_ascii=False, separators=(', ', ': '))
