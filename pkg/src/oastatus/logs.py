"""Structured ``level key=value`` log lines on stderr."""

from __future__ import annotations

import logging
import sys


def _quote(value) -> str:
    text = str(value)
    if not text or any(c in text for c in ' "=\t\n'):
        return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
    return text


def kv(event: str, **fields) -> str:
    parts = [f"event={_quote(event)}"]
    parts += [f"{key}={_quote(value)}" for key, value in fields.items()]
    return " ".join(parts)


class KeyValueFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return f"{record.levelname.lower()} logger={record.name} {record.getMessage()}"


def configure(level: int = logging.INFO) -> None:
    root = logging.getLogger("oastatus")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(KeyValueFormatter())
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
