"""Parsing and normalization of the four input corpora.

Publications (CSV), the Crossref snapshot (JSON lines or JSON arrays), the
Unpaywall snapshot (JSON lines, optionally gzipped) and the ISSN-Gold table
(CSV). Every reader streams and skips-and-counts malformed records instead of
aborting.
"""

from __future__ import annotations

import codecs
import csv
import enum
import gzip
import heapq
import io
import json
import logging
import os
import re
import shutil
import tempfile
import threading
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from .errors import BadCheckDigit, MalformedDoi, MalformedIssn, MissingColumn, MissingDoi, UnparsableRecord
from .licence import LicenceEntry
from .logs import kv

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# identifiers

_DOI_PREFIXES = (
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
    "doi.org/",
    "dx.doi.org/",
    "doi:",
)


def normalize_doi(raw: str) -> str:
    """Canonical lowercase DOI without resolver prefix.

    >>> normalize_doi(" https://doi.org/10.1000/XYZ ")
    '10.1000/xyz'
    """
    if not isinstance(raw, str):
        raise MalformedDoi(f"not text: {raw!r}")
    text = raw.strip().lower()
    stripped = True
    while stripped:
        stripped = False
        for prefix in _DOI_PREFIXES:
            if text.startswith(prefix):
                text = text[len(prefix):].strip()
                stripped = True
    if not text.startswith("10.") or "/" not in text:
        raise MalformedDoi(f"not a DOI: {raw!r}")
    return text


def issn_check_digit(first7: str) -> str:
    total = sum(int(d) * w for d, w in zip(first7, range(8, 1, -1)))
    check = (11 - total % 11) % 11
    return "X" if check == 10 else str(check)


_ISSN_SHAPE = re.compile(r"^(\d{4})-?(\d{3}[\dX])$")


def validate_issn(raw: str) -> str:
    """Return the hyphenated uppercase ISSN or raise.

    >>> validate_issn("20493630")
    '2049-3630'
    """
    if not isinstance(raw, str):
        raise MalformedIssn(f"not text: {raw!r}")
    m = _ISSN_SHAPE.match(raw.strip().upper())
    if m is None:
        raise MalformedIssn(f"not an ISSN: {raw!r}")
    digits = m.group(1) + m.group(2)
    if issn_check_digit(digits[:7]) != digits[7]:
        raise BadCheckDigit(f"bad ISSN check digit: {raw!r}")
    return f"{digits[:4]}-{digits[4:]}"


# ---------------------------------------------------------------------------
# record types


class Source(enum.Enum):
    WOS = "WOS"
    SCOPUS = "Scopus"

    @classmethod
    def parse(cls, text: str) -> "Source":
        key = text.strip().lower()
        if key in ("wos", "web of science"):
            return cls.WOS
        if key == "scopus":
            return cls.SCOPUS
        raise ValueError(f"unknown source {text!r}")


class DocType(enum.Enum):
    ARTICLE = "article"
    REVIEW = "review"
    OTHER = "other"

    @classmethod
    def parse(cls, text: str) -> "DocType":
        key = text.strip().lower()
        if key in ("article", "journal-article"):
            return cls.ARTICLE
        if key == "review":
            return cls.REVIEW
        return cls.OTHER


@dataclass(frozen=True)
class PublicationRecord:
    source: Source
    native_id: str
    doi: str | None
    issns: tuple[str, ...]
    year: int
    doc_type: DocType = DocType.ARTICLE
    journal_title: str = ""
    volume: str | None = None
    issue: str | None = None

    def __post_init__(self):
        if not self.native_id:
            raise ValueError("native_id must be non-empty")
        if not 1800 <= self.year <= 2100:
            raise ValueError(f"year out of range: {self.year}")
        if len(set(self.issns)) != len(self.issns):
            object.__setattr__(self, "issns", tuple(dict.fromkeys(self.issns)))


@dataclass(frozen=True)
class CrossrefWork:
    doi: str
    issued_date: date | None = None
    issns: tuple[str, ...] = ()
    licences: tuple[LicenceEntry, ...] = ()


@dataclass(frozen=True)
class UnpaywallRecord:
    doi: str
    is_oa: bool | None = None
    pdf_url: str | None = None


class Membership(NamedTuple):
    in_doaj: bool
    in_road: bool


@dataclass
class GoldDirectory:
    """ISSN to linking-ISSN table plus DOAJ/ROAD membership keyed by ISSN-L."""

    issn_to_issnl: dict[str, str] = field(default_factory=dict)
    membership: dict[str, Membership] = field(default_factory=dict)

    def is_gold(self, issnl: str) -> bool:
        return issnl in self.membership


def to_issnl(issn: str, directory: GoldDirectory) -> str:
    return directory.issn_to_issnl.get(issn, issn)


@dataclass
class IngestStats:
    input: str
    records_ok: int = 0
    records_skipped: int = 0
    duplicates: int = 0
    decode_errors: int = 0

    def merge(self, other: "IngestStats") -> None:
        self.records_ok += other.records_ok
        self.records_skipped += other.records_skipped
        self.duplicates += other.duplicates
        self.decode_errors += other.decode_errors


# ---------------------------------------------------------------------------
# low-level readers

_decode_state = threading.local()


def _count_decode_error(exc: UnicodeDecodeError):
    _decode_state.count = getattr(_decode_state, "count", 0) + 1
    return "\ufffd", exc.end


codecs.register_error("oastatus-count", _count_decode_error)


def _decode_errors_seen() -> int:
    return getattr(_decode_state, "count", 0)


def open_text(path: str | Path) -> io.TextIOBase:
    """UTF-8 text reader; gzip detected by magic bytes, bad bytes replaced and counted."""
    with open(path, "rb") as probe:
        magic = probe.read(2)
    raw = gzip.open(path, "rb") if magic == b"\x1f\x8b" else open(path, "rb")
    return io.TextIOWrapper(raw, encoding="utf-8", errors="oastatus-count", newline="")


_ARRAY_TOKENS = re.compile(r'["\\\[\]{},]')


def _iter_array_elements(fh: io.TextIOBase, chunk_size: int = 1 << 16) -> Iterator[str]:
    """Yield the raw text of each top-level element of a JSON array.

    Only string/bracket state is tracked, so a malformed element is still
    delimited and can be skipped on its own.
    """
    buf = fh.read(chunk_size).lstrip()
    if not buf.startswith("["):
        raise UnparsableRecord("JSON array file does not start with '['")
    pos = 1
    start = 1
    depth = 0
    in_string = False
    eof = False
    while True:
        m = _ARRAY_TOKENS.search(buf, pos)
        if m is None or (in_string and m.group() == "\\" and m.end() >= len(buf)):
            if eof:
                tail = buf[start:].strip()
                if tail:
                    yield tail
                return
            chunk = fh.read(chunk_size)
            if not chunk:
                eof = True
            buf = buf[start:] + chunk
            pos -= start
            start = 0
            pos = max(pos, 0)
            continue
        ch = m.group()
        pos = m.end()
        if in_string:
            if ch == "\\":
                pos += 1
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch in "[{":
            depth += 1
        elif ch in "]}" and depth > 0:
            depth -= 1
        elif depth == 0 and ch in ",]":
            element = buf[start:m.start()].strip()
            if element:
                yield element
            if ch == "]":
                return
            start = pos


def iter_raw_records(path: str | Path) -> Iterator[str]:
    """Raw record texts from a JSON-lines or JSON-array file (auto-detected)."""
    with open_text(path) as fh:
        head = fh.read(1)
        while head and head.isspace():
            head = fh.read(1)
        if not head:
            return
        if head == "[":
            rest = fh
            yield from _iter_array_elements(_Prepend("[", rest))
            return
        first = head + fh.readline()
        if first.strip():
            yield first.strip()
        for line in fh:
            line = line.strip()
            if line:
                yield line


class _Prepend:
    def __init__(self, prefix: str, fh):
        self._prefix = prefix
        self._fh = fh

    def read(self, n: int) -> str:
        if self._prefix:
            out, self._prefix = self._prefix, ""
            return out + self._fh.read(max(n - len(out), 0))
        return self._fh.read(n)


# ---------------------------------------------------------------------------
# Crossref


def _date_from_parts(node) -> date | None:
    """Date from a Crossref ``{"date-parts": [[y, m, d]]}`` node, padding to Jan 1st."""
    if not isinstance(node, dict):
        return None
    parts = node.get("date-parts")
    if not parts or not isinstance(parts, list) or not isinstance(parts[0], list):
        return None
    first = [p for p in parts[0] if p is not None]
    if not first:
        return None
    try:
        nums = [int(p) for p in first[:3]]
        year = nums[0]
        month = nums[1] if len(nums) > 1 else 1
        day = nums[2] if len(nums) > 2 else 1
        return date(year, month, day)
    except (TypeError, ValueError):
        return None


def _parse_licence(node) -> LicenceEntry | None:
    if not isinstance(node, dict):
        return None
    url = node.get("URL") or node.get("url")
    if not isinstance(url, str) or not url.strip():
        return None
    delay = node.get("delay-in-days")
    try:
        delay = None if delay is None else max(0, int(delay))
    except (TypeError, ValueError):
        delay = None
    version = node.get("content-version")
    return LicenceEntry(
        url=url.strip(),
        start_date=_date_from_parts(node.get("start")),
        delay_in_days=delay,
        content_version=version if isinstance(version, str) else None,
    )


def _clean_issns(values) -> tuple[str, ...]:
    if isinstance(values, str):
        values = [values]
    if not isinstance(values, list):
        return ()
    out = []
    for raw in values:
        try:
            issn = validate_issn(raw)
        except MalformedIssn:
            continue
        if issn not in out:
            out.append(issn)
    return tuple(out)


def parse_crossref_work(record: str | dict) -> CrossrefWork:
    """Parse one Crossref work record (JSON text or already-decoded dict).

    API envelopes (``{"message": {...}}``) are unwrapped.
    """
    if isinstance(record, str):
        try:
            record = json.loads(record)
        except json.JSONDecodeError as exc:
            raise UnparsableRecord(f"malformed JSON: {exc}") from None
    if not isinstance(record, dict):
        raise UnparsableRecord("work record is not a JSON object")
    if "DOI" not in record and isinstance(record.get("message"), dict):
        record = record["message"]
    raw_doi = record.get("DOI")
    if not raw_doi:
        raise MissingDoi("work record has no DOI")
    try:
        doi = normalize_doi(raw_doi)
    except MalformedDoi as exc:
        raise MissingDoi(str(exc)) from None
    licences = record.get("license") or []
    if not isinstance(licences, list):
        licences = []
    return CrossrefWork(
        doi=doi,
        issued_date=_date_from_parts(record.get("issued")),
        issns=_clean_issns(record.get("ISSN")),
        licences=tuple(e for e in map(_parse_licence, licences) if e is not None),
    )


def _parts(d: date | None):
    return None if d is None else {"date-parts": [[d.year, d.month, d.day]]}


def work_to_json(work: CrossrefWork) -> str:
    """Serialize a work in Crossref field names, so normalized output is itself a valid snapshot file."""
    obj = {"DOI": work.doi}
    if work.issued_date is not None:
        obj["issued"] = _parts(work.issued_date)
    if work.issns:
        obj["ISSN"] = list(work.issns)
    lic = []
    for e in work.licences:
        row = {"URL": e.url}
        if e.start_date is not None:
            row["start"] = _parts(e.start_date)
        if e.delay_in_days is not None:
            row["delay-in-days"] = e.delay_in_days
        if e.content_version is not None:
            row["content-version"] = e.content_version
        lic.append(row)
    obj["license"] = lic
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def snapshot_files(path: str | Path) -> list[Path]:
    """Files of a snapshot directory in canonical (name) order; a single file is its own snapshot."""
    path = Path(path)
    if path.is_file():
        return [path]
    if not path.is_dir():
        raise FileNotFoundError(path)
    return sorted(p for p in path.rglob("*") if p.is_file() and not p.name.startswith("."))


def iter_crossref_file(path: str | Path, stats: IngestStats) -> Iterator[CrossrefWork]:
    before = _decode_errors_seen()
    try:
        for text in iter_raw_records(path):
            try:
                work = parse_crossref_work(text)
            except UnparsableRecord as exc:
                stats.records_skipped += 1
                log.debug(kv("skip_record", input=str(path), reason=str(exc)[:120]))
                continue
            stats.records_ok += 1
            yield work
    except UnparsableRecord as exc:
        stats.records_skipped += 1
        log.warning(kv("skip_file", input=str(path), reason=str(exc)))
    finally:
        stats.decode_errors += _decode_errors_seen() - before


def iter_crossref_snapshot(path: str | Path, stats: IngestStats | None = None) -> Iterator[CrossrefWork]:
    """Stream every work in the snapshot, in file order, without deduplication."""
    stats = stats if stats is not None else IngestStats(str(path))
    for file in snapshot_files(path):
        yield from iter_crossref_file(file, stats)


def load_crossref_works(path: str | Path, dois: set[str] | None = None, stats: IngestStats | None = None) -> dict[str, CrossrefWork]:
    """DOI-keyed works (last record wins), optionally restricted to ``dois`` to bound memory."""
    stats = stats if stats is not None else IngestStats(str(path))
    works: dict[str, CrossrefWork] = {}
    for work in iter_crossref_snapshot(path, stats):
        if dois is not None and work.doi not in dois:
            continue
        if work.doi in works:
            stats.duplicates += 1
        works[work.doi] = work
    return works


# external-memory normalization ----------------------------------------------

_BYTES_PER_RECORD_GUESS = 256


def _bucket_of(doi: str, n_buckets: int) -> int:
    return zlib.crc32(doi.encode("utf-8")) % n_buckets


def _partition_file(file_idx: int, path: str, tmp_dir: str, n_buckets: int) -> IngestStats:
    stats = IngestStats(path)
    handles: dict[int, io.TextIOBase] = {}
    try:
        for work in iter_crossref_file(path, stats):
            b = _bucket_of(work.doi, n_buckets)
            fh = handles.get(b)
            if fh is None:
                fh = handles[b] = open(
                    os.path.join(tmp_dir, f"b{b:05d}.f{file_idx:08d}"), "w", encoding="utf-8"
                )
            fh.write(work.doi)
            fh.write("\t")
            fh.write(work_to_json(work))
            fh.write("\n")
    finally:
        for fh in handles.values():
            fh.close()
    return stats


def _dedupe_bucket(bucket: int, tmp_dir: str) -> tuple[str | None, int]:
    parts = sorted(Path(tmp_dir).glob(f"b{bucket:05d}.f*"))
    if not parts:
        return None, 0
    latest: dict[str, str] = {}
    dups = 0
    for part in parts:
        with open(part, encoding="utf-8") as fh:
            for line in fh:
                doi, _, body = line.partition("\t")
                if doi in latest:
                    dups += 1
                latest[doi] = body
        part.unlink()
    out = os.path.join(tmp_dir, f"sorted{bucket:05d}")
    with open(out, "w", encoding="utf-8") as fh:
        for doi in sorted(latest):
            fh.write(doi)
            fh.write("\t")
            fh.write(latest[doi])
    return out, dups


def _sorted_lines(path: str) -> Iterator[tuple[str, str]]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            doi, _, body = line.partition("\t")
            yield doi, body


def _run(fn, jobs: list[tuple], workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def normalize_snapshot(
    src: str | Path,
    out_path: str | Path,
    workers: int = 1,
    batch_size: int = 100_000,
    tmp_dir: str | Path | None = None,
) -> IngestStats:
    """Parse, deduplicate (last record wins) and DOI-sort a Crossref snapshot.

    Records are hash-partitioned by DOI into on-disk buckets sized around
    ``batch_size`` records, so peak memory does not grow with the snapshot.
    Files are processed in parallel by ``workers`` processes; the output is
    byte-identical for any worker count.
    """
    files = snapshot_files(src)
    total_bytes = sum(f.stat().st_size for f in files)
    n_buckets = max(1, min(4096, -(-total_bytes // (batch_size * _BYTES_PER_RECORD_GUESS))))
    stats = IngestStats(str(src))
    work_dir = tempfile.mkdtemp(prefix="oastatus-ingest-", dir=tmp_dir)
    try:
        jobs = [(i, str(f), work_dir, n_buckets) for i, f in enumerate(files)]
        for file_stats in _run(_partition_file, jobs, workers):
            stats.merge(file_stats)
            if file_stats.records_skipped or file_stats.decode_errors:
                log.info(kv("file_ingested", input=file_stats.input, records_ok=file_stats.records_ok,
                            records_skipped=file_stats.records_skipped, decode_errors=file_stats.decode_errors))
        results = _run(_dedupe_bucket, [(b, work_dir) for b in range(n_buckets)], workers)
        sorted_parts = []
        for part, dups in results:
            stats.duplicates += dups
            if part is not None:
                sorted_parts.append(part)
        with open(out_path, "w", encoding="utf-8", newline="\n") as out:
            for _, body in heapq.merge(*(_sorted_lines(p) for p in sorted_parts)):
                out.write(body)
    finally:
        shutil.rmtree(work_dir, ignore_errors=True)
    if stats.duplicates:
        log.warning(kv("duplicate_dois", input=str(src), duplicates=stats.duplicates))
    return stats


# ---------------------------------------------------------------------------
# Unpaywall


def parse_unpaywall_record(record: str | dict) -> UnpaywallRecord:
    if isinstance(record, str):
        try:
            record = json.loads(record)
        except json.JSONDecodeError as exc:
            raise UnparsableRecord(f"malformed JSON: {exc}") from None
    if not isinstance(record, dict):
        raise UnparsableRecord("unpaywall record is not a JSON object")
    raw = record.get("doi")
    if not raw:
        raise MissingDoi("unpaywall record has no doi")
    try:
        doi = normalize_doi(raw)
    except MalformedDoi as exc:
        raise MissingDoi(str(exc)) from None
    is_oa = record.get("is_oa")
    if not isinstance(is_oa, bool):
        is_oa = None
    pdf_url = None
    best = record.get("best_oa_location")
    if isinstance(best, dict):
        pdf_url = best.get("url_for_pdf") or best.get("url") or None
    return UnpaywallRecord(doi=doi, is_oa=is_oa, pdf_url=pdf_url)


def iter_unpaywall(path: str | Path, stats: IngestStats | None = None) -> Iterator[UnpaywallRecord]:
    stats = stats if stats is not None else IngestStats(str(path))
    for file in snapshot_files(path):
        before = _decode_errors_seen()
        try:
            for text in iter_raw_records(file):
                try:
                    rec = parse_unpaywall_record(text)
                except UnparsableRecord:
                    stats.records_skipped += 1
                    continue
                stats.records_ok += 1
                yield rec
        except UnparsableRecord as exc:
            stats.records_skipped += 1
            log.warning(kv("skip_file", input=str(file), reason=str(exc)))
        finally:
            stats.decode_errors += _decode_errors_seen() - before


def load_unpaywall(path: str | Path, dois: set[str] | None = None, stats: IngestStats | None = None) -> dict[str, UnpaywallRecord]:
    """One record per DOI; a later duplicate replaces an earlier one and is counted."""
    stats = stats if stats is not None else IngestStats(str(path))
    out: dict[str, UnpaywallRecord] = {}
    for rec in iter_unpaywall(path, stats):
        if dois is not None and rec.doi not in dois:
            continue
        if rec.doi in out:
            stats.duplicates += 1
        out[rec.doi] = rec
    if stats.duplicates:
        log.warning(kv("duplicate_dois", input=str(path), duplicates=stats.duplicates))
    return out


# ---------------------------------------------------------------------------
# tables

GOLD_COLUMNS = ("issn", "issnl", "in_doaj", "in_road")
PUBLICATION_COLUMNS = ("source", "native_id", "doi", "issns", "year", "doc_type", "journal_title", "volume", "issue")


def _reader(fh, required: Iterable[str], name: str) -> csv.DictReader:
    reader = csv.DictReader(fh)
    header = reader.fieldnames or []
    missing = [c for c in required if c not in header]
    if missing:
        raise MissingColumn(f"{name}: missing column(s) {', '.join(missing)}")
    return reader


def _flag(text: str | None) -> bool:
    value = (text or "").strip().lower()
    if value in ("1", "true", "yes", "y", "t"):
        return True
    if value in ("0", "false", "no", "n", "f", ""):
        return False
    raise ValueError(f"not a 0/1 flag: {text!r}")


def load_gold_directory(path: str | Path, stats: IngestStats | None = None) -> GoldDirectory:
    """Read the ISSN-Gold table; rows failing validation are skipped and counted."""
    stats = stats if stats is not None else IngestStats(str(path))
    rows: dict[str, tuple[str, bool, bool]] = {}
    with open_text(path) as fh:
        reader = _reader(fh, GOLD_COLUMNS, str(path))
        for row in reader:
            try:
                issn = validate_issn(row["issn"])
                issnl = validate_issn(row["issnl"]) if (row["issnl"] or "").strip() else issn
                flags = (_flag(row["in_doaj"]), _flag(row["in_road"]))
            except (MalformedIssn, ValueError) as exc:
                stats.records_skipped += 1
                log.debug(kv("skip_row", input=str(path), line=reader.line_num, reason=str(exc)))
                continue
            stats.records_ok += 1
            if issn in rows:
                stats.duplicates += 1
            rows[issn] = (issnl, *flags)
    if stats.duplicates:
        log.warning(kv("duplicate_issns", input=str(path), duplicates=stats.duplicates))
    directory = GoldDirectory()
    merged: dict[str, list[bool]] = {}
    for issn, (issnl, doaj, road) in rows.items():
        directory.issn_to_issnl[issn] = issnl
        acc = merged.setdefault(issnl, [False, False])
        acc[0] |= doaj
        acc[1] |= road
    for issnl, (doaj, road) in merged.items():
        if doaj or road:
            directory.membership[issnl] = Membership(doaj, road)
    return directory


def _blank(text: str | None) -> str | None:
    text = (text or "").strip()
    return text or None


def load_publications(path: str | Path, stats: IngestStats | None = None) -> Iterator[PublicationRecord]:
    """Stream publication rows.

    A bad DOI leaves the record without DOI (it classifies as NA later); a bad
    ISSN is dropped from the list. Rows without a valid source, id or year are
    skipped.
    """
    stats = stats if stats is not None else IngestStats(str(path))
    before = _decode_errors_seen()
    with open_text(path) as fh:
        reader = _reader(fh, PUBLICATION_COLUMNS, str(path))
        for row in reader:
            line = reader.line_num
            doi = None
            raw_doi = (row["doi"] or "").strip()
            if raw_doi:
                try:
                    doi = normalize_doi(raw_doi)
                except MalformedDoi:
                    log.warning(kv("bad_doi", input=str(path), line=line, doi=raw_doi))
            issns = []
            for raw in (row["issns"] or "").split(";"):
                if not raw.strip():
                    continue
                try:
                    issns.append(validate_issn(raw))
                except MalformedIssn as exc:
                    log.warning(kv("bad_issn", input=str(path), line=line, reason=str(exc)))
            try:
                rec = PublicationRecord(
                    source=Source.parse(row["source"] or ""),
                    native_id=(row["native_id"] or "").strip(),
                    doi=doi,
                    issns=tuple(dict.fromkeys(issns)),
                    year=int((row["year"] or "").strip()),
                    doc_type=DocType.parse(row["doc_type"] or ""),
                    journal_title=(row["journal_title"] or "").strip(),
                    volume=_blank(row["volume"]),
                    issue=_blank(row["issue"]),
                )
            except ValueError as exc:
                stats.records_skipped += 1
                log.warning(kv("skip_row", input=str(path), line=line, reason=str(exc)))
                continue
            stats.records_ok += 1
            yield rec
    stats.decode_errors += _decode_errors_seen() - before


def write_publications(records: Iterable[PublicationRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PUBLICATION_COLUMNS)
        for r in records:
            w.writerow([r.source.value, r.native_id, r.doi or "", ";".join(r.issns), r.year,
                        r.doc_type.value, r.journal_title, r.volume or "", r.issue or ""])


REPORT_COLUMNS = ("input", "records_ok", "records_skipped", "duplicates")


def write_ingest_report(rows: Iterable[IngestStats], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for s in rows:
            w.writerow([s.input, s.records_ok, s.records_skipped, s.duplicates])
