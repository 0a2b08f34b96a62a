"""Run manifests: what went in, what came out, and a timestamp-free digest."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def path_digest(path: str | Path) -> str:
    """sha256 of a file, or of the sorted (relative name, digest) list of a directory."""
    path = Path(path)
    if path.is_file():
        return file_digest(path)
    h = hashlib.sha256()
    for f in sorted(p for p in path.rglob("*") if p.is_file()):
        h.update(f.relative_to(path).as_posix().encode())
        h.update(b"\0")
        h.update(file_digest(f).encode())
        h.update(b"\n")
    return h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    command: str
    argv: list[str]
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    policy_digest: str | None = None
    seed: int | None = None
    tool_version: str = __version__
    started_at: str = field(default_factory=_now)
    finished_at: str | None = None

    def add_input(self, path: str | Path | None) -> None:
        if path is not None:
            self.inputs[str(path)] = path_digest(path)

    def add_output(self, path: str | Path) -> None:
        self.outputs[str(path)] = file_digest(path)

    def digest(self) -> str:
        body = asdict(self)
        body.pop("started_at")
        body.pop("finished_at")
        return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()

    def write(self, path: str | Path) -> str:
        self.finished_at = _now()
        body = asdict(self)
        body["digest"] = self.digest()
        Path(path).write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return body["digest"]


def manifest_path(report: str | Path) -> Path:
    return Path(f"{report}.manifest.json")
