"""Licence URL policy, embargo delay and per-publication licence resolution."""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from datetime import date
from importlib import resources
from pathlib import Path
from typing import Iterable
from urllib.parse import urlsplit, urlunsplit


class LicenceClass(enum.Enum):
    OA = "OA"
    NONOA = "NonOA"
    UNCLEAR = "Unclear"


class LicenceStatus(enum.IntEnum):
    """Resolved status; integer order is the dominance order."""

    NONE = 0
    UNCLEAR = 1
    NONOA = 2
    OA = 3

    @property
    def label(self) -> str:
        return _STATUS_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "LicenceStatus":
        for status, label in _STATUS_LABELS.items():
            if label == text:
                return status
        raise ValueError(f"unknown licence status {text!r}")


_STATUS_LABELS = {
    LicenceStatus.NONE: "None",
    LicenceStatus.UNCLEAR: "Unclear",
    LicenceStatus.NONOA: "NonOA",
    LicenceStatus.OA: "OA",
}

_CLASS_TO_STATUS = {
    LicenceClass.OA: LicenceStatus.OA,
    LicenceClass.NONOA: LicenceStatus.NONOA,
    LicenceClass.UNCLEAR: LicenceStatus.UNCLEAR,
}


class Delay(enum.Enum):
    DELAYED = "Delayed"
    NOT_DELAYED = "NotDelayed"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class LicenceEntry:
    url: str
    start_date: date | None = None
    delay_in_days: int | None = None
    content_version: str | None = None

    def __post_init__(self):
        if not self.url:
            raise ValueError("licence url must be non-empty")
        if self.delay_in_days is not None and self.delay_in_days < 0:
            raise ValueError("delay_in_days must be >= 0")


@dataclass(frozen=True)
class ResolvedLicence:
    status: LicenceStatus
    delayed: Delay
    distinct_urls: int
    max_delay_days: int | None = None


NO_LICENCE = ResolvedLicence(LicenceStatus.NONE, Delay.UNKNOWN, 0, None)


def normalize_licence_url(url: str) -> str:
    """Canonical form used for deduplication and policy matching.

    >>> normalize_licence_url("HTTP://CreativeCommons.org/licenses/by/4.0/")
    'https://creativecommons.org/licenses/by/4.0'
    """
    text = url.strip()
    parts = urlsplit(text)
    scheme = parts.scheme.lower()
    if scheme not in ("http", "https") or not parts.netloc:
        return text
    path = parts.path.rstrip("/")
    return urlunsplit(("https", parts.netloc.lower(), path, parts.query, ""))


@dataclass
class LicencePolicy:
    """Prefix lists deciding whether a licence URL grants open access.

    Patterns are normalized on construction; the longest matching prefix wins.
    """

    oa_patterns: list[str] = field(default_factory=list)
    nonoa_patterns: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.oa_patterns = [normalize_licence_url(p) for p in self.oa_patterns]
        self.nonoa_patterns = [normalize_licence_url(p) for p in self.nonoa_patterns]
        overlap = set(self.oa_patterns) & set(self.nonoa_patterns)
        if overlap:
            raise ValueError(f"patterns listed as both OA and NONOA: {sorted(overlap)}")
        # longest first; ties cannot occur because the sets are disjoint
        table = [(p, LicenceClass.OA) for p in self.oa_patterns]
        table += [(p, LicenceClass.NONOA) for p in self.nonoa_patterns]
        table.sort(key=lambda item: len(item[0]), reverse=True)
        self._table = table

    def classify(self, normalized_url: str) -> LicenceClass:
        for prefix, cls in self._table:
            if normalized_url.startswith(prefix):
                return cls
        return LicenceClass.UNCLEAR

    def dumps(self) -> str:
        lines = [f"OA {p}" for p in self.oa_patterns]
        lines += [f"NONOA {p}" for p in self.nonoa_patterns]
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()

    @classmethod
    def parse(cls, text: str) -> "LicencePolicy":
        oa, nonoa = [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                kind, prefix = line.split(None, 1)
            except ValueError:
                raise ValueError(f"policy line {lineno}: expected '<OA|NONOA> <prefix>'") from None
            kind = kind.upper()
            if kind == "OA":
                oa.append(prefix.strip())
            elif kind == "NONOA":
                nonoa.append(prefix.strip())
            else:
                raise ValueError(f"policy line {lineno}: unknown kind {kind!r}")
        return cls(oa, nonoa)

    @classmethod
    def load(cls, path: str | Path) -> "LicencePolicy":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> "LicencePolicy":
        text = resources.files("oastatus").joinpath("default_policy.txt").read_text(encoding="utf-8")
        return cls.parse(text)


def classify_licence_url(url: str, policy: LicencePolicy) -> LicenceClass:
    return policy.classify(normalize_licence_url(url))


def compute_delay(entry: LicenceEntry, issued: date | None) -> int | None:
    """Embargo in days: the explicit delay if recorded, else start minus issue date."""
    if entry.delay_in_days is not None:
        return entry.delay_in_days
    if entry.start_date is not None and issued is not None:
        return max(0, (entry.start_date - issued).days)
    return None


def resolve_licences(
    entries: Iterable[LicenceEntry],
    issued: date | None,
    policy: LicencePolicy,
    grace_days: int = 0,
) -> ResolvedLicence:
    """Collapse all licence rows of one publication into a single status.

    Any OA URL makes the publication OA; otherwise any non-OA URL makes it
    NonOA; otherwise the URLs are Unclear. The delay flag only looks at the
    entries backing the winning status: one undelayed entry is enough for
    NotDelayed.
    """
    by_class: dict[LicenceStatus, list[LicenceEntry]] = {}
    urls: set[str] = set()
    for entry in entries:
        url = normalize_licence_url(entry.url)
        urls.add(url)
        status = _CLASS_TO_STATUS[policy.classify(url)]
        by_class.setdefault(status, []).append(entry)
    if not urls:
        return NO_LICENCE

    status = max(by_class)
    delays = [d for d in (compute_delay(e, issued) for e in by_class[status]) if d is not None]
    if not delays:
        delayed = Delay.UNKNOWN
    elif min(delays) <= grace_days:
        delayed = Delay.NOT_DELAYED
    else:
        delayed = Delay.DELAYED
    return ResolvedLicence(
        status=status,
        delayed=delayed,
        distinct_urls=len(urls),
        max_delay_days=max(delays) if delays else None,
    )
