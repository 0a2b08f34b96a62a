"""Command-line front end.

Each subcommand runs one pipeline stage, writes its outputs and a
``<output>.manifest.json`` next to the primary output. Exit status: 0 on
success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__, logs
from .classify import ClassifyConfig, Kind, classify_corpus, read_classified, write_classified
from .errors import OaStatusError, RemoteError, UnparsableRecord
from .ingest import (
    IngestStats,
    MalformedDoi,
    iter_crossref_snapshot,
    load_crossref_works,
    load_gold_directory,
    load_publications,
    load_unpaywall,
    normalize_doi,
    normalize_snapshot,
    work_to_json,
    write_ingest_report,
)
from .licence import LicencePolicy
from .manifest import RunManifest, manifest_path
from .reconcile import (
    SampleRow,
    contradiction_rate,
    coverage,
    crosstab,
    crossref_status,
    draw_sample,
    licence_histogram,
    read_worksheet,
    summarize_manual_checks,
    unpaywall_status,
    write_coverage,
    write_crosstab,
    write_histogram,
    write_manual_summary,
    write_trends,
    write_worksheet,
    yearly_trends,
)
from .remote import EMAIL_ENV, ApiClient, RetryPolicy
from .logs import kv

log = logging.getLogger("oastatus.cli")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _policy(path: str | None) -> LicencePolicy:
    return LicencePolicy.load(path) if path else LicencePolicy.default()


def _default_threads() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# subcommands


def cmd_ingest(args, manifest: RunManifest) -> list[Path]:
    out = Path(args.out)
    report = Path(args.report) if args.report else out.with_name(out.name + ".report.csv")
    stats = normalize_snapshot(args.crossref, out, workers=args.threads,
                               batch_size=args.batch_size, tmp_dir=args.tmp_dir)
    manifest.add_input(args.crossref)
    rows = [stats]
    outputs = [out, report]
    pub_dois = None
    pubs = []
    if args.pubs:
        pstats = IngestStats(args.pubs)
        pubs = list(load_publications(args.pubs, pstats))
        pub_dois = {p.doi for p in pubs if p.doi}
        rows.append(pstats)
        manifest.add_input(args.pubs)
    up_dois = None
    if args.unpaywall:
        ustats = IngestStats(args.unpaywall)
        up_dois = set(load_unpaywall(args.unpaywall, pub_dois, ustats))
        rows.append(ustats)
        manifest.add_input(args.unpaywall)
    if args.gold:
        gstats = IngestStats(args.gold)
        load_gold_directory(args.gold, gstats)
        rows.append(gstats)
        manifest.add_input(args.gold)
    write_ingest_report(rows, report)
    for s in rows:
        log.info(kv("ingested", input=s.input, records_ok=s.records_ok, records_skipped=s.records_skipped,
                    duplicates=s.duplicates, decode_errors=s.decode_errors))
    if args.pubs and args.coverage:
        cr_dois = {w.doi for w in iter_crossref_snapshot(out) if w.doi in pub_dois}
        write_coverage(coverage(pubs, cr_dois, up_dois), args.coverage)
        outputs.append(Path(args.coverage))
    return outputs


def cmd_classify(args, manifest: RunManifest) -> list[Path]:
    policy = _policy(args.policy)
    manifest.policy_digest = policy.digest()
    for p in (args.pubs, args.crossref, args.gold, args.policy):
        manifest.add_input(p)
    pstats = IngestStats(args.pubs)
    pubs = list(load_publications(args.pubs, pstats))
    dois = {p.doi for p in pubs if p.doi}
    works = load_crossref_works(args.crossref, dois)
    directory = load_gold_directory(args.gold)
    config = ClassifyConfig(
        probable_hybrid_includes_unlicensed=args.probable_hybrid_all,
        delay_grace_days=args.grace_days,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out = out_dir / "classified.csv"
    singletons = 0

    def tally(rows):
        nonlocal singletons
        for row in rows:
            if row.issue_size == 1 and row.category.kind is Kind.HIDDEN_GOLD:
                singletons += 1
            yield row

    n = write_classified(tally(classify_corpus(pubs, works, directory, policy, config, workers=args.threads)), out)
    log.info(kv("classified", publications=n, matched_crossref=len(works), skipped_rows=pstats.records_skipped))
    if singletons:
        # a lone OA publication forms an all-OA issue of its own
        log.warning(kv("single_publication_issues", hidden_gold=singletons))
    return [out]


def cmd_crosstab(args, manifest: RunManifest) -> list[Path]:
    manifest.add_input(args.classified)
    manifest.add_input(args.unpaywall)
    rows = list(read_classified(args.classified))
    upw = load_unpaywall(args.unpaywall, {r.doi for r in rows if r.doi})
    tab = crosstab(
        (crossref_status(r.crossref_status), unpaywall_status(upw.get(r.doi) if r.doi else None)) for r in rows
    )
    write_crosstab(tab, args.out)
    print(f"contradiction_rate={contradiction_rate(tab):.2f}")
    return [Path(args.out)]


def cmd_trends(args, manifest: RunManifest) -> list[Path]:
    manifest.add_input(args.classified)
    rows = read_classified(args.classified)
    write_trends(yearly_trends(((r.year, r.category) for r in rows), args.year_min, args.year_max), args.out)
    return [Path(args.out)]


def cmd_histogram(args, manifest: RunManifest) -> list[Path]:
    manifest.add_input(args.crossref)
    if args.pubs:
        manifest.add_input(args.pubs)
        dois = {p.doi for p in load_publications(args.pubs) if p.doi}
        works = load_crossref_works(args.crossref, dois).values()
    else:
        works = load_crossref_works(args.crossref).values()
    write_histogram(licence_histogram(works), args.out)
    return [Path(args.out)]


def cmd_sample(args, manifest: RunManifest) -> list[Path]:
    manifest.seed = args.seed
    manifest.add_input(args.classified)
    manifest.add_input(args.unpaywall)
    rows = [r for r in read_classified(args.classified) if r.doi]
    upw = load_unpaywall(args.unpaywall, {r.doi for r in rows}) if args.unpaywall else {}

    def candidates():
        for r in rows:
            rec = upw.get(r.doi)
            yield SampleRow(r.doi, crossref_status(r.crossref_status), unpaywall_status(rec),
                            rec.pdf_url if rec else None)

    write_worksheet(draw_sample(candidates(), args.n, args.seed), args.out)
    return [Path(args.out)]


def cmd_audit_summary(args, manifest: RunManifest) -> list[Path]:
    manifest.add_input(args.worksheet)
    summary = summarize_manual_checks(read_worksheet(args.worksheet))
    write_manual_summary(summary, args.out)
    print(f"sample_size={summary.total}")
    print(f"inaccessible_oa={summary.inaccessible_oa:.2f}")
    print(f"accessible_non_oa={summary.accessible_non_oa:.2f}")
    print(f"contradictions={summary.contradictions:.2f}")
    return [Path(args.out)]


def cmd_fetch(args, manifest: RunManifest) -> list[Path]:
    dois = list(args.doi or [])
    if args.dois_file:
        manifest.add_input(args.dois_file)
        dois += [line.strip() for line in Path(args.dois_file).read_text(encoding="utf-8").splitlines() if line.strip()]
    if not dois:
        raise UsageError("fetch: give at least one --doi or --dois-file")
    email_addr = args.email or os.environ.get(EMAIL_ENV)
    if args.api == "unpaywall" and not email_addr:
        raise UsageError(f"fetch unpaywall: --email or ${EMAIL_ENV} is required")
    policy = RetryPolicy(
        max_attempts=args.max_attempts,
        base_backoff=args.base_backoff,
        max_backoff=args.max_backoff,
        requests_per_second=args.rate,
        timeout=args.timeout,
    )
    failures = 0
    with ApiClient(policy, crossref_base=args.crossref_base, unpaywall_base=args.unpaywall_base,
                   contact_email=email_addr, cache_dir=args.cache_dir, cache_ttl=args.cache_ttl) as client, \
            open(args.out, "w", encoding="utf-8", newline="\n") as out:
        for raw in dois:
            try:
                doi = normalize_doi(raw)
                if args.api == "crossref":
                    out.write(work_to_json(client.fetch_crossref_work(doi)) + "\n")
                else:
                    rec = client.fetch_unpaywall_record(doi)
                    obj = {"doi": rec.doi, "is_oa": rec.is_oa}
                    if rec.pdf_url:
                        obj["best_oa_location"] = {"url_for_pdf": rec.pdf_url}
                    out.write(json.dumps(obj, separators=(",", ":")) + "\n")
            except (MalformedDoi, RemoteError, UnparsableRecord) as exc:
                failures += 1
                log.warning(kv("fetch_failed", api=args.api, doi=raw, error=type(exc).__name__, reason=str(exc)))
    if failures:
        raise _PartialFailure(f"{failures} of {len(dois)} lookups failed", [Path(args.out)])
    return [Path(args.out)]


class _PartialFailure(OaStatusError):
    def __init__(self, message, outputs):
        super().__init__(message)
        self.outputs = outputs


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oastatus", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"oastatus {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=_default_threads(), help="parallelism cap (default: cores)")
    common.add_argument("--log-level", default="info", choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common], help="normalize and deduplicate a Crossref snapshot")
    p.add_argument("--crossref", required=True, help="snapshot directory or file")
    p.add_argument("--out", required=True, help="normalized JSON-lines output, sorted by DOI")
    p.add_argument("--report", help="ingest report CSV (default: <out>.report.csv)")
    p.add_argument("--pubs")
    p.add_argument("--unpaywall")
    p.add_argument("--gold")
    p.add_argument("--coverage", help="DOI match coverage CSV (needs --pubs)")
    p.add_argument("--batch-size", type=int, default=100_000)
    p.add_argument("--tmp-dir")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("classify", parents=[common], help="assign an OA category to every publication")
    p.add_argument("--pubs", required=True)
    p.add_argument("--crossref", required=True, help="snapshot directory, snapshot file or ingest output")
    p.add_argument("--gold", required=True)
    p.add_argument("--policy", help="licence policy file (default: bundled Creative Commons policy)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--grace-days", type=int, default=0)
    p.add_argument("--probable-hybrid-all", action="store_true",
                   help="also mark unlicensed members of probable-hybrid issues as ProbableHybrid")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("crosstab", parents=[common], help="Crossref vs Unpaywall status table")
    p.add_argument("--classified", required=True)
    p.add_argument("--unpaywall", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_crosstab)

    p = sub.add_parser("trends", parents=[common], help="per-year category counts")
    p.add_argument("--classified", required=True)
    p.add_argument("--year-min", type=int, default=2000)
    p.add_argument("--year-max", type=int, default=2017)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_trends)

    p = sub.add_parser("histogram", parents=[common], help="licences-per-DOI histogram")
    p.add_argument("--crossref", required=True)
    p.add_argument("--pubs", help="restrict to DOIs of these publications")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("sample", parents=[common], help="draw a manual-check worksheet")
    p.add_argument("--classified", required=True)
    p.add_argument("--unpaywall")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("audit-summary", parents=[common], help="summarize a filled worksheet")
    p.add_argument("--worksheet", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_audit_summary)

    p = sub.add_parser("fetch", parents=[common], help="look up DOIs via the web APIs")
    p.add_argument("api", choices=["crossref", "unpaywall"])
    p.add_argument("--doi", action="append")
    p.add_argument("--dois-file")
    p.add_argument("--out", required=True)
    p.add_argument("--email", help=f"contact email (default: ${EMAIL_ENV})")
    p.add_argument("--rate", type=float, default=5.0, help="max requests per second")
    p.add_argument("--max-attempts", type=int, default=5)
    p.add_argument("--base-backoff", type=float, default=1.0)
    p.add_argument("--max-backoff", type=float, default=60.0)
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--cache-dir")
    p.add_argument("--cache-ttl", type=float, default=7 * 86400, help="seconds")
    p.add_argument("--crossref-base", default="https://api.crossref.org")
    p.add_argument("--unpaywall-base", default="https://api.unpaywall.org")
    p.set_defaults(func=cmd_fetch)
    return parser


def _write_manifest(manifest: RunManifest, outputs: list[Path]) -> None:
    for out in outputs:
        if out.exists():
            manifest.add_output(out)
    if outputs:
        digest = manifest.write(manifest_path(outputs[0]))
        log.info(kv("manifest", path=manifest_path(outputs[0]), digest=digest))


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    logs.configure(getattr(logging, args.log_level.upper()))
    if args.threads < 1:
        print("oastatus: error: --threads must be >= 1", file=sys.stderr)
        return 1
    manifest = RunManifest(command=args.command, argv=argv)
    try:
        outputs = args.func(args, manifest)
    except UsageError as exc:
        print(f"{parser.format_usage()}{exc}", file=sys.stderr)
        return 1
    except _PartialFailure as exc:
        _write_manifest(manifest, exc.outputs)
        log.error(kv("data_error", error=type(exc).__name__, reason=str(exc)))
        return 2
    except (OaStatusError, OSError, ValueError, csv.Error) as exc:
        log.error(kv("data_error", error=type(exc).__name__, reason=str(exc)))
        return 2
    _write_manifest(manifest, outputs)
    return 0


if __name__ == "__main__":
    sys.exit(main())
