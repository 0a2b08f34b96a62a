"""Cross-source reports: Crossref vs Unpaywall cross-tab, contradiction rate,
licence-count histogram, yearly trends, audit sampling and manual-check summary.
"""

from __future__ import annotations

import csv
import enum
from collections import Counter
from dataclasses import dataclass, replace
from decimal import Decimal
from pathlib import Path
from typing import Iterable, Iterator, Mapping, TypeVar

from .classify import Kind, OaCategory
from .errors import EmptyCorpus, SampleTooLarge, UnfilledRows
from .ingest import CrossrefWork, UnpaywallRecord, _reader, open_text
from .licence import Delay, LicenceStatus, ResolvedLicence
from .rng import Xoshiro256


class SourceStatus(enum.Enum):
    OPEN_ACCESS = "Open Access"
    CLOSED_ACCESS = "Closed Access"
    NA = "NA"


def crossref_status(resolved: ResolvedLicence | LicenceStatus) -> SourceStatus:
    status = resolved.status if isinstance(resolved, ResolvedLicence) else resolved
    if status is LicenceStatus.OA:
        return SourceStatus.OPEN_ACCESS
    if status is LicenceStatus.NONOA:
        return SourceStatus.CLOSED_ACCESS
    return SourceStatus.NA


def unpaywall_status(rec: UnpaywallRecord | None) -> SourceStatus:
    if rec is None or rec.is_oa is None:
        return SourceStatus.NA
    return SourceStatus.OPEN_ACCESS if rec.is_oa else SourceStatus.CLOSED_ACCESS


def percent(frequency: int, total: int) -> Decimal:
    """``100 * frequency / total`` rounded half-up to two decimals, computed exactly."""
    if total <= 0:
        raise ValueError("total must be positive")
    hundredths = (2 * 10_000 * frequency + total) // (2 * total)
    return Decimal(hundredths).scaleb(-2)


# ---------------------------------------------------------------------------
# cross-tab


@dataclass(frozen=True)
class CrossTabRow:
    crossref: SourceStatus
    unpaywall: SourceStatus
    frequency: int
    percent: Decimal


@dataclass(frozen=True)
class CrossTab:
    rows: tuple[CrossTabRow, ...]

    @property
    def total(self) -> int:
        return sum(r.frequency for r in self.rows)

    def frequency(self, crossref: SourceStatus, unpaywall: SourceStatus) -> int:
        for r in self.rows:
            if r.crossref is crossref and r.unpaywall is unpaywall:
                return r.frequency
        return 0

    @classmethod
    def from_counts(cls, counts: Mapping[tuple[SourceStatus, SourceStatus], int]) -> "CrossTab":
        cells = {k: v for k, v in counts.items() if v > 0}
        total = sum(cells.values())
        if total == 0:
            raise EmptyCorpus("cross-tab of an empty corpus")
        ordered = sorted(cells.items(), key=lambda kv: (-kv[1], kv[0][0].value, kv[0][1].value))
        return cls(tuple(CrossTabRow(c, u, f, percent(f, total)) for (c, u), f in ordered))


def crosstab(pairs: Iterable[tuple[SourceStatus, SourceStatus]]) -> CrossTab:
    return CrossTab.from_counts(Counter(pairs))


CONTRADICTIONS = frozenset({
    (SourceStatus.NA, SourceStatus.OPEN_ACCESS),
    (SourceStatus.CLOSED_ACCESS, SourceStatus.OPEN_ACCESS),
    (SourceStatus.OPEN_ACCESS, SourceStatus.CLOSED_ACCESS),
})


def contradiction_rate(tab: CrossTab) -> float:
    """Percent of publications in the contradicting cells, from raw frequencies."""
    hits = sum(r.frequency for r in tab.rows if (r.crossref, r.unpaywall) in CONTRADICTIONS)
    return 100.0 * hits / tab.total


def write_crosstab(tab: CrossTab, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("crossref_status", "unpaywall_status", "frequency", "percent"))
        for r in tab.rows:
            w.writerow((r.crossref.value, r.unpaywall.value, r.frequency, r.percent))


# ---------------------------------------------------------------------------
# licence counts per DOI


@dataclass(frozen=True)
class HistogramRow:
    licences: int
    frequency: int
    percent: Decimal


def licence_histogram(works: Iterable[CrossrefWork]) -> list[HistogramRow]:
    """DOIs per number of licence rows (raw rows, before URL deduplication)."""
    counts = Counter(len(w.licences) for w in works)
    total = sum(counts.values())
    return [HistogramRow(k, counts[k], percent(counts[k], total)) for k in sorted(counts)]


def write_histogram(rows: Iterable[HistogramRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("licences_per_doi", "frequency", "percent"))
        for r in rows:
            w.writerow((r.licences, r.frequency, r.percent))


# ---------------------------------------------------------------------------
# trends


@dataclass(frozen=True)
class TrendRow:
    year: int
    kind: Kind
    delayed: Delay
    n: int


_KIND_ORDER = {k: i for i, k in enumerate(Kind)}
_DELAY_ORDER = {d: i for i, d in enumerate(Delay)}


def yearly_trends(classified: Iterable[tuple[object, OaCategory]], year_min: int, year_max: int) -> list[TrendRow]:
    """Counts per (year, category, delay flag); NA publications are left out.

    Items are ``(record, category)`` pairs where ``record.year`` is read, or
    ``(year, category)``.
    """
    if year_min > year_max:
        raise ValueError("year_min must not exceed year_max")
    counts: Counter = Counter()
    for rec, cat in classified:
        year = rec if isinstance(rec, int) else rec.year
        if cat.kind is Kind.NA or not year_min <= year <= year_max:
            continue
        counts[(year, cat.kind, cat.delayed)] += 1
    keys = sorted(counts, key=lambda k: (k[0], _KIND_ORDER[k[1]], _DELAY_ORDER[k[2]]))
    return [TrendRow(y, k, d, counts[(y, k, d)]) for y, k, d in keys]


def write_trends(rows: Iterable[TrendRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("year", "category", "delayed", "n"))
        for r in rows:
            w.writerow((r.year, r.kind.value, r.delayed.value, r.n))


# ---------------------------------------------------------------------------
# audit sample and manual checks


class Accessibility(enum.Enum):
    ACCESSIBLE = "Accessible"
    NO_ACCESS = "NoAccess"
    NA = "NA"


@dataclass(frozen=True)
class SampleRow:
    """A worksheet line; ``pdf_accessible`` stays ``None`` until checked by hand."""

    doi: str
    licence_status: SourceStatus
    unpaywall_status: SourceStatus
    pdf_url: str | None = None
    pdf_accessible: Accessibility | None = None


T = TypeVar("T")


def draw_sample(items: Iterable[T], n: int, seed: int) -> list[T]:
    """Uniform sample without replacement, reproducible for a given seed.

    Reservoir sampling over the stream followed by a shuffle, driven by the
    pinned generator in :mod:`oastatus.rng`.
    """
    if n < 0:
        raise ValueError("sample size must be non-negative")
    rng = Xoshiro256(seed)
    reservoir: list[T] = []
    seen = 0
    for item in items:
        if seen < n:
            reservoir.append(item)
        else:
            j = rng.below(seen + 1)
            if j < n:
                reservoir[j] = item
        seen += 1
    if n > seen:
        raise SampleTooLarge(f"asked for {n} items from a corpus of {seen}")
    rng.shuffle(reservoir)
    return reservoir


WORKSHEET_COLUMNS = ("doi", "licence_status", "unpaywall_status", "pdf_url", "pdf_accessible")


def write_worksheet(rows: Iterable[SampleRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(WORKSHEET_COLUMNS)
        for r in rows:
            w.writerow((r.doi, r.licence_status.value, r.unpaywall_status.value, r.pdf_url or "",
                        r.pdf_accessible.value if r.pdf_accessible else ""))


def read_worksheet(path: str | Path) -> Iterator[SampleRow]:
    with open_text(path) as fh:
        for row in _reader(fh, WORKSHEET_COLUMNS, str(path)):
            filled = (row["pdf_accessible"] or "").strip()
            yield SampleRow(
                doi=row["doi"],
                licence_status=SourceStatus(row["licence_status"]),
                unpaywall_status=SourceStatus(row["unpaywall_status"]),
                pdf_url=row["pdf_url"] or None,
                pdf_accessible=Accessibility(filled) if filled else None,
            )


@dataclass(frozen=True)
class CheckGroup:
    pdf_accessible: Accessibility
    licence_status: SourceStatus
    unpaywall_status: SourceStatus
    frequency: int
    percent: Decimal


@dataclass(frozen=True)
class ManualCheckSummary:
    groups: tuple[CheckGroup, ...]
    total: int
    # OA by licence or Unpaywall, yet no PDF reachable at the publisher
    inaccessible_oa: float
    # PDF reachable although the licence is not an OA one
    accessible_non_oa: float
    # one source says Open Access, the other Closed Access
    contradictions: float


def summarize_manual_checks(rows: Iterable[SampleRow]) -> ManualCheckSummary:
    rows = list(rows)
    if any(r.pdf_accessible is None for r in rows):
        raise UnfilledRows("worksheet has rows without pdf_accessible")
    if not rows:
        raise EmptyCorpus("no manual-check rows")
    total = len(rows)
    counts = Counter((r.pdf_accessible, r.licence_status, r.unpaywall_status) for r in rows)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0][0].value, kv[0][1].value, kv[0][2].value))
    groups = tuple(CheckGroup(a, l, u, f, percent(f, total)) for (a, l, u), f in ordered)

    oa = SourceStatus.OPEN_ACCESS
    closed = SourceStatus.CLOSED_ACCESS
    inaccessible_oa = sum(
        1 for r in rows
        if r.pdf_accessible is Accessibility.NO_ACCESS and oa in (r.licence_status, r.unpaywall_status)
    )
    accessible_non_oa = sum(
        1 for r in rows if r.pdf_accessible is Accessibility.ACCESSIBLE and r.licence_status is not oa
    )
    contradictions = sum(1 for r in rows if {r.licence_status, r.unpaywall_status} == {oa, closed})
    return ManualCheckSummary(
        groups=groups,
        total=total,
        inaccessible_oa=100.0 * inaccessible_oa / total,
        accessible_non_oa=100.0 * accessible_non_oa / total,
        contradictions=100.0 * contradictions / total,
    )


def write_manual_summary(summary: ManualCheckSummary, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("pdf_accessible", "licence_status", "unpaywall_status", "frequency", "percent"))
        for g in summary.groups:
            w.writerow((g.pdf_accessible.value, g.licence_status.value, g.unpaywall_status.value,
                        g.frequency, g.percent))


def fill(row: SampleRow, accessibility: Accessibility) -> SampleRow:
    return replace(row, pdf_accessible=accessibility)


# ---------------------------------------------------------------------------
# match coverage


@dataclass(frozen=True)
class CoverageRow:
    source: str
    publications: int
    with_doi: int
    in_crossref: int
    in_unpaywall: int

    @property
    def unpaywall_percent(self) -> Decimal | None:
        return percent(self.in_unpaywall, self.publications) if self.publications else None


def coverage(pubs: Iterable, crossref_dois: set[str] | None, unpaywall_dois: set[str] | None) -> list[CoverageRow]:
    """Per-source counts of publications matched by DOI to each snapshot."""
    acc: dict[str, list[int]] = {}
    for rec in pubs:
        c = acc.setdefault(rec.source.value, [0, 0, 0, 0])
        c[0] += 1
        if rec.doi:
            c[1] += 1
            if crossref_dois is not None and rec.doi in crossref_dois:
                c[2] += 1
            if unpaywall_dois is not None and rec.doi in unpaywall_dois:
                c[3] += 1
    return [CoverageRow(s, *acc[s]) for s in sorted(acc)]


def write_coverage(rows: Iterable[CoverageRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("source", "publications", "with_doi", "in_crossref", "in_unpaywall", "unpaywall_percent"))
        for r in rows:
            pct = r.unpaywall_percent
            w.writerow((r.source, r.publications, r.with_doi, r.in_crossref, r.in_unpaywall,
                        "" if pct is None else pct))
