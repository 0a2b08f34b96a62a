"""Issue-level open-access classification.

Publications are grouped into journal issues; each issue's resolved licence
statuses decide whether its OA members are Hidden Gold, Hybrid or Probable
Hybrid, and whether the issue is Closed. Directory-listed journals are Gold
regardless of licences.
"""

from __future__ import annotations

import csv
import enum
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import InconsistentInput
from .ingest import CrossrefWork, GoldDirectory, PublicationRecord, Source, _reader, open_text, to_issnl
from .licence import Delay, LicencePolicy, LicenceStatus, ResolvedLicence, resolve_licences


class Kind(enum.Enum):
    GOLD = "Gold"
    HIDDEN_GOLD = "HiddenGold"
    HYBRID = "Hybrid"
    PROBABLE_HYBRID = "ProbableHybrid"
    CLOSED = "Closed"
    NA = "NA"

    @property
    def is_oa(self) -> bool:
        return self not in (Kind.CLOSED, Kind.NA)


@dataclass(frozen=True)
class OaCategory:
    kind: Kind
    delayed: Delay = Delay.UNKNOWN

    def __post_init__(self):
        if not self.kind.is_oa and self.delayed is not Delay.UNKNOWN:
            raise ValueError(f"{self.kind.value} carries no delay flag")


@dataclass(frozen=True)
class IssueKey:
    source: Source
    journal_key: str
    volume: str
    issue: str


@dataclass(frozen=True)
class IssueAggregate:
    n_total: int
    n_oa: int
    n_nonoa: int
    n_na: int

    def __add__(self, other: "IssueAggregate") -> "IssueAggregate":
        return IssueAggregate(
            self.n_total + other.n_total,
            self.n_oa + other.n_oa,
            self.n_nonoa + other.n_nonoa,
            self.n_na + other.n_na,
        )

    @classmethod
    def of(cls, status: LicenceStatus) -> "IssueAggregate":
        if status is LicenceStatus.OA:
            return cls(1, 1, 0, 0)
        if status is LicenceStatus.NONOA:
            return cls(1, 0, 1, 0)
        return cls(1, 0, 0, 1)


@dataclass(frozen=True)
class ClassifyConfig:
    # no-licence members of a probable-hybrid issue: NA (strict) or ProbableHybrid
    probable_hybrid_includes_unlicensed: bool = False
    delay_grace_days: int = 0


_WS = re.compile(r"\s+")


def normalize_title(title: str) -> str:
    return _WS.sub(" ", title).strip().lower()


def journal_key(rec: PublicationRecord, directory: GoldDirectory) -> str:
    if rec.issns:
        return to_issnl(rec.issns[0], directory)
    return normalize_title(rec.journal_title)


def issue_key(rec: PublicationRecord, directory: GoldDirectory) -> IssueKey | None:
    volume = (rec.volume or "").strip()
    issue = (rec.issue or "").strip()
    jkey = journal_key(rec, directory)
    if not (volume and issue and jkey):
        return None
    return IssueKey(rec.source, jkey, volume, issue)


def aggregate_issue(members: Iterable[tuple[PublicationRecord, ResolvedLicence]]) -> IssueAggregate:
    total = None
    for _, resolved in members:
        one = IssueAggregate.of(resolved.status)
        total = one if total is None else total + one
    if total is None:
        raise ValueError("an issue needs at least one member")
    return total


def is_gold(rec: PublicationRecord, directory: GoldDirectory) -> bool:
    return any(directory.is_gold(to_issnl(issn, directory)) for issn in rec.issns)


def classify_publication(
    rec: PublicationRecord,
    resolved: ResolvedLicence,
    agg: IssueAggregate | None,
    directory: GoldDirectory,
    config: ClassifyConfig = ClassifyConfig(),
) -> OaCategory:
    """Assign one category; the first matching rule wins."""
    has_key = issue_key(rec, directory) is not None
    if has_key != (agg is not None):
        raise InconsistentInput(
            f"{rec.source.value}:{rec.native_id}: issue aggregate "
            f"{'missing' if has_key else 'given'} for a publication "
            f"{'with' if has_key else 'without'} issue metadata"
        )
    oa = resolved.status is LicenceStatus.OA
    if is_gold(rec, directory):
        kind = Kind.GOLD
    elif agg is None:
        kind = Kind.NA
    elif agg.n_oa == agg.n_total:
        kind = Kind.HIDDEN_GOLD
    elif oa and agg.n_nonoa >= 1:
        kind = Kind.HYBRID
    elif agg.n_nonoa == 0 and agg.n_oa >= 1 and agg.n_na >= 1 and (
        oa or config.probable_hybrid_includes_unlicensed
    ):
        kind = Kind.PROBABLE_HYBRID
    elif agg.n_nonoa == agg.n_total:
        kind = Kind.CLOSED
    else:
        kind = Kind.NA
    return OaCategory(kind, resolved.delayed if kind.is_oa else Delay.UNKNOWN)


@dataclass(frozen=True)
class Classified:
    record: PublicationRecord
    resolved: ResolvedLicence
    category: OaCategory
    issue_size: int | None = None  # members sharing the issue key; None without one


def _sort_key(rec: PublicationRecord):
    # trailing fields only break ties between repeated native ids
    return (rec.source.value, rec.native_id, rec.doi or "", rec.year, rec.issns,
            rec.doc_type.value, rec.journal_title, rec.volume or "", rec.issue or "")


def _resolve_partition(
    pubs: list[PublicationRecord],
    works: Mapping[str, CrossrefWork],
    directory: GoldDirectory,
    policy: LicencePolicy,
    config: ClassifyConfig,
):
    resolved_rows = []
    aggs: dict[IssueKey, IssueAggregate] = {}
    for rec in pubs:
        work = works.get(rec.doi) if rec.doi else None
        if work is None:
            resolved = resolve_licences((), None, policy, config.delay_grace_days)
        else:
            resolved = resolve_licences(work.licences, work.issued_date, policy, config.delay_grace_days)
        key = issue_key(rec, directory)
        if key is not None:
            one = IssueAggregate.of(resolved.status)
            aggs[key] = aggs[key] + one if key in aggs else one
        resolved_rows.append((rec, resolved, key))
    return resolved_rows, aggs


def merge_aggregates(parts: Iterable[Mapping[IssueKey, IssueAggregate]]) -> dict[IssueKey, IssueAggregate]:
    merged: dict[IssueKey, IssueAggregate] = {}
    for part in parts:
        for key, agg in part.items():
            merged[key] = merged[key] + agg if key in merged else agg
    return merged


def classify_corpus(
    pubs: Iterable[PublicationRecord],
    works: Mapping[str, CrossrefWork],
    directory: GoldDirectory,
    policy: LicencePolicy,
    config: ClassifyConfig = ClassifyConfig(),
    workers: int = 1,
    partition_size: int = 50_000,
) -> Iterator[Classified]:
    """Two passes: resolve licences and build issue aggregates, then classify.

    DOIs absent from ``works`` count as having no licence. Output is sorted by
    ``(source, native_id)`` and does not depend on input order or ``workers``.
    """
    partitions: list[list[PublicationRecord]] = []
    current: list[PublicationRecord] = []
    for rec in pubs:
        current.append(rec)
        if len(current) >= partition_size:
            partitions.append(current)
            current = []
    if current:
        partitions.append(current)
    if not partitions:
        return

    def pass1(part):
        return _resolve_partition(part, works, directory, policy, config)

    if workers > 1 and len(partitions) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(pass1, partitions))
    else:
        results = [pass1(p) for p in partitions]

    aggs = merge_aggregates(r[1] for r in results)
    rows = [row for r in results for row in r[0]]
    rows.sort(key=lambda row: _sort_key(row[0]))
    for rec, resolved, key in rows:
        agg = aggs[key] if key is not None else None
        category = classify_publication(rec, resolved, agg, directory, config)
        yield Classified(rec, resolved, category, agg.n_total if agg is not None else None)


CLASSIFIED_COLUMNS = (
    "source", "native_id", "doi", "year", "category", "delayed",
    "crossref_status", "distinct_urls", "max_delay_days",
)


def write_classified(rows: Iterable[Classified], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CLASSIFIED_COLUMNS)
        for row in rows:
            rec, res, cat = row.record, row.resolved, row.category
            w.writerow([
                rec.source.value, rec.native_id, rec.doi or "", rec.year,
                cat.kind.value, cat.delayed.value, res.status.label,
                res.distinct_urls, "" if res.max_delay_days is None else res.max_delay_days,
            ])
            n += 1
    return n


@dataclass(frozen=True)
class ClassifiedRow:
    """One line of a classified CSV, read back for the report stages."""

    source: Source
    native_id: str
    doi: str | None
    year: int
    category: OaCategory
    crossref_status: LicenceStatus
    distinct_urls: int
    max_delay_days: int | None


def read_classified(path: str | Path) -> Iterator[ClassifiedRow]:
    with open_text(path) as fh:
        for row in _reader(fh, CLASSIFIED_COLUMNS, str(path)):
            yield ClassifiedRow(
                source=Source.parse(row["source"]),
                native_id=row["native_id"],
                doi=row["doi"] or None,
                year=int(row["year"]),
                category=OaCategory(Kind(row["category"]), Delay(row["delayed"])),
                crossref_status=LicenceStatus.from_label(row["crossref_status"]),
                distinct_urls=int(row["distinct_urls"]),
                max_delay_days=int(row["max_delay_days"]) if row["max_delay_days"] else None,
            )
