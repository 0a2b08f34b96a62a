import gzip
import json
from datetime import date

import pytest
from hypothesis import given, strategies as st

from oastatus.errors import BadCheckDigit, MalformedDoi, MalformedIssn, MissingColumn, MissingDoi, UnparsableRecord
from oastatus.ingest import (
    DocType,
    GoldDirectory,
    IngestStats,
    Source,
    iter_crossref_snapshot,
    iter_raw_records,
    load_crossref_works,
    load_gold_directory,
    load_publications,
    load_unpaywall,
    normalize_doi,
    normalize_snapshot,
    parse_crossref_work,
    parse_unpaywall_record,
    to_issnl,
    validate_issn,
    work_to_json,
)

PUB_HEADER = "source,native_id,doi,issns,year,doc_type,journal_title,volume,issue\n"


def issn_weighted_sum(text):
    """Oracle: full ISSN (check digit weight 1, X = 10) sums to 0 mod 11."""
    digits = text.replace("-", "")
    values = [10 if c == "X" else int(c) for c in digits]
    return sum(v * w for v, w in zip(values, [8, 7, 6, 5, 4, 3, 2, 1]))


# -- DOI ----------------------------------------------------------------------


@pytest.mark.parametrize("raw, expected", [
    ("https://doi.org/10.1000/XYZ", "10.1000/xyz"),
    ("10.1000/xyz", "10.1000/xyz"),
    ("  doi:10.1038/Nature12373 ", "10.1038/nature12373"),
    ("http://dx.doi.org/10.1002/ANIE.201", "10.1002/anie.201"),
    ("DOI: 10.5555/abc", "10.5555/abc"),
])
def test_normalize_doi(raw, expected):
    assert normalize_doi(raw) == expected


@pytest.mark.parametrize("raw", ["not-a-doi", "", "10.1000", "https://example.org/10.1/x", "11.1/x"])
def test_normalize_doi_rejects(raw):
    with pytest.raises(MalformedDoi):
        normalize_doi(raw)


@given(st.text())
def test_normalize_doi_total_and_idempotent(raw):
    try:
        once = normalize_doi(raw)
    except MalformedDoi:
        return
    assert normalize_doi(once) == once
    assert once.startswith("10.") and "/" in once
    assert once == once.strip() == once.lower()


# -- ISSN ---------------------------------------------------------------------


def test_issn_hand_oracle():
    # 2*8 + 0*7 + 4*6 + 9*5 + 3*4 + 6*3 + 3*2 = 121 = 11 * 11, so the check digit is 0
    assert 2 * 8 + 0 * 7 + 4 * 6 + 9 * 5 + 3 * 4 + 6 * 3 + 3 * 2 == 121
    assert validate_issn("20493630") == "2049-3630"
    with pytest.raises(BadCheckDigit):
        validate_issn("2049-3631")


@pytest.mark.parametrize("raw", ["abcd-1234", "1234", "12345-678", "", "1234-567Y"])
def test_issn_malformed(raw):
    with pytest.raises(MalformedIssn) as info:
        validate_issn(raw)
    assert not isinstance(info.value, BadCheckDigit)


def test_issn_x_check_digit():
    assert validate_issn("1474-547x") == "1474-547X"


@given(st.from_regex(r"\A\d{4}-?\d{3}[0-9X]\Z"))
def test_issn_matches_weighted_sum_oracle(raw):
    ok = issn_weighted_sum(raw) % 11 == 0
    try:
        out = validate_issn(raw)
    except BadCheckDigit:
        assert not ok
    else:
        assert ok
        assert validate_issn(out) == out
        assert len(out) == 9 and out[4] == "-"


@given(st.text(max_size=12))
def test_issn_total(raw):
    try:
        out = validate_issn(raw)
    except MalformedIssn:
        return
    assert validate_issn(out) == out


# -- ISSN-L -------------------------------------------------------------------


def test_to_issnl(gold):
    assert to_issnl("1476-4687", gold) == "0028-0836"
    assert to_issnl("0140-6736", gold) == "0140-6736"
    assert to_issnl("2049-3630", gold) == "2049-3630"


def test_gold_directory_fixture(gold):
    assert set(gold.membership) == {"2049-3630", "1932-6203", "2045-2322"}
    assert gold.membership["1932-6203"].in_doaj and gold.membership["1932-6203"].in_road
    for key in gold.membership:
        assert key in gold.issn_to_issnl.values()


def test_gold_directory_rules(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text(
        "issn,issnl,in_doaj,in_road\n"
        "2049-3630,2049-3630,1,0\n"
        "1932-6203,1932-6203,0,1\n"
        "2045-2322,,1,1\n"
        "0028-0836,0028-0836,0,0\n"
        "2049-3631,2049-3631,1,0\n"
        "1932-6203,1932-6203,0,0\n"
    )
    stats = IngestStats("g")
    d = load_gold_directory(path, stats)
    assert set(d.membership) == {"2049-3630", "2045-2322"}
    assert d.issn_to_issnl["2045-2322"] == "2045-2322"
    assert stats.records_skipped == 1 and stats.duplicates == 1 and stats.records_ok == 5


def test_gold_directory_missing_column(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text("issn,in_doaj\n2049-3630,1\n")
    with pytest.raises(MissingColumn):
        load_gold_directory(path)


# -- Crossref -----------------------------------------------------------------

WORK = {
    "DOI": "10.1016/J.CELL.2017.01.001",
    "issued": {"date-parts": [[2017, 1, 1]]},
    "ISSN": ["0092-8674", "bogus"],
    "license": [
        {"URL": "https://www.elsevier.com/tdm/userlicense/1.0/", "start": {"date-parts": [[2017, 1, 1]]},
         "delay-in-days": 0, "content-version": "tdm"},
        {"URL": "http://creativecommons.org/licenses/by/4.0/", "start": {"date-parts": [[2018, 1, 1]]},
         "delay-in-days": 365, "content-version": "vor"},
    ],
    "title": ["ignored"],
}


def test_parse_crossref_work():
    w = parse_crossref_work(json.dumps(WORK))
    assert w.doi == "10.1016/j.cell.2017.01.001"
    assert w.issued_date == date(2017, 1, 1)
    assert w.issns == ("0092-8674",)
    assert len(w.licences) == 2
    assert w.licences[1].delay_in_days == 365
    assert w.licences[1].start_date == date(2018, 1, 1)
    assert w.licences[0].content_version == "tdm"


def test_parse_crossref_work_no_licence_and_padding():
    w = parse_crossref_work({"DOI": "10.1/x", "issued": {"date-parts": [[2017]]}})
    assert w.licences == ()
    assert w.issued_date == date(2017, 1, 1)
    w = parse_crossref_work({"DOI": "10.1/x", "issued": {"date-parts": [[2017, 5]]}})
    assert w.issued_date == date(2017, 5, 1)
    w = parse_crossref_work({"DOI": "10.1/x", "issued": {"date-parts": [[None]]}})
    assert w.issued_date is None


def test_parse_crossref_api_envelope():
    w = parse_crossref_work({"status": "ok", "message": WORK})
    assert w.doi == "10.1016/j.cell.2017.01.001"


@pytest.mark.parametrize("text, exc", [
    ("{not json", UnparsableRecord),
    ("[1, 2]", UnparsableRecord),
    ('{"title": "x"}', MissingDoi),
    ('{"DOI": "garbage"}', MissingDoi),
])
def test_parse_crossref_errors(text, exc):
    with pytest.raises(exc):
        parse_crossref_work(text)


def test_work_json_roundtrip():
    w = parse_crossref_work(WORK)
    assert parse_crossref_work(work_to_json(w)) == w


def test_snapshot_formats_and_skip_counting(tmp_path):
    snap = tmp_path / "snap"
    snap.mkdir()
    (snap / "a.jsonl").write_text(
        json.dumps({"DOI": "10.1/a"}) + "\n\n{broken\n" + json.dumps({"DOI": "10.1/b", "license": []}) + "\n"
    )
    (snap / "b.json").write_text(
        "  [\n" + json.dumps({"DOI": "10.1/c", "title": ["a, b ] { \" x"]}) + ",\n {bad: 1},\n"
        + json.dumps({"DOI": "10.1/a", "license": [{"URL": "u"}]}) + "\n]\n"
    )
    with gzip.open(snap / "c.jsonl.gz", "wt") as fh:
        fh.write(json.dumps({"DOI": "10.1/d"}) + "\n" + json.dumps({"nodoi": 1}) + "\n")
    stats = IngestStats("snap")
    works = list(iter_crossref_snapshot(snap, stats))
    assert [w.doi for w in works] == ["10.1/a", "10.1/b", "10.1/c", "10.1/a", "10.1/d"]
    assert stats.records_ok == 5 and stats.records_skipped == 3
    stats = IngestStats("snap")
    by_doi = load_crossref_works(snap, stats=stats)
    assert len(by_doi["10.1/a"].licences) == 1  # last record wins
    assert stats.duplicates == 1


def test_array_scanner_across_chunks(tmp_path):
    records = [{"DOI": f"10.1/{i}", "note": "\\\"" * (i % 7) + "]" * i} for i in range(300)]
    path = tmp_path / "big.json"
    path.write_text(json.dumps(records))
    from oastatus.ingest import _iter_array_elements, open_text

    with open_text(path) as fh:
        texts = list(_iter_array_elements(fh, chunk_size=37))
    assert [json.loads(t) for t in texts] == records
    assert len(list(iter_raw_records(path))) == 300


def test_invalid_utf8_replaced_and_counted(tmp_path):
    path = tmp_path / "s.jsonl"
    path.write_bytes(b'{"DOI": "10.1/a", "title": ["caf\xe9"]}\n{"DOI": "10.1/b"}\n')
    stats = IngestStats("s")
    assert [w.doi for w in iter_crossref_snapshot(path, stats)] == ["10.1/a", "10.1/b"]
    assert stats.decode_errors == 1


def test_normalize_snapshot_dedupes_and_sorts(tmp_path):
    snap = tmp_path / "snap"
    snap.mkdir()
    (snap / "1.jsonl").write_text("\n".join(json.dumps({"DOI": d, "license": [{"URL": f"u{i}"}]})
                                            for i, d in enumerate(["10.1/z", "10.1/a", "10.1/m"])) + "\n")
    (snap / "2.jsonl").write_text(json.dumps({"DOI": "10.1/A", "license": []}) + "\nxx\n")
    out = tmp_path / "out.jsonl"
    stats = normalize_snapshot(snap, out, batch_size=1)
    lines = out.read_text().splitlines()
    assert [json.loads(l)["DOI"] for l in lines] == ["10.1/a", "10.1/m", "10.1/z"]
    assert json.loads(lines[0])["license"] == []  # later file wins
    assert (stats.records_ok, stats.records_skipped, stats.duplicates) == (4, 1, 1)
    out2 = tmp_path / "out2.jsonl"
    normalize_snapshot(snap, out2, workers=2, batch_size=1)
    assert out2.read_bytes() == out.read_bytes()


# -- Unpaywall ----------------------------------------------------------------


def test_parse_unpaywall():
    assert parse_unpaywall_record('{"doi":"10.1/A","is_oa":true}').is_oa is True
    rec = parse_unpaywall_record('{"doi":"10.1/B"}')
    assert (rec.doi, rec.is_oa) == ("10.1/b", None)
    with pytest.raises(UnparsableRecord):
        parse_unpaywall_record("{malformed")


def test_load_unpaywall_gzip_and_duplicates(tmp_path):
    path = tmp_path / "u.jsonl.gz"
    with gzip.open(path, "wt") as fh:
        fh.write('{"doi":"10.1/a","is_oa":false}\n{oops\n{"doi":"10.1/a","is_oa":true}\n{"doi":"10.1/b"}\n')
    stats = IngestStats("u")
    recs = load_unpaywall(path, stats=stats)
    assert recs["10.1/a"].is_oa is True
    assert (stats.records_ok, stats.records_skipped, stats.duplicates) == (3, 1, 1)
    assert set(load_unpaywall(path, {"10.1/b"})) == {"10.1/b"}


# -- publications -------------------------------------------------------------


def test_load_publications(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text(
        PUB_HEADER
        + "WOS,w1,https://doi.org/10.1/A,2049-3630;20493630;2049-3631,2017,review,PeerJ,5,1\n"
        + "Scopus,s1,bad-doi,,2016,Article,Some  Journal,,\n"
        + "Nope,x,10.1/c,,2016,article,J,1,1\n"
        + "WOS,w2,,,1700,article,J,1,1\n"
    )
    stats = IngestStats("p")
    recs = list(load_publications(path, stats))
    assert len(recs) == 2 and stats.records_skipped == 2
    w1, s1 = recs
    assert w1.source is Source.WOS and w1.doi == "10.1/a" and w1.issns == ("2049-3630",)
    assert w1.doc_type is DocType.REVIEW and (w1.volume, w1.issue) == ("5", "1")
    assert s1.doi is None and s1.volume is None and s1.doc_type is DocType.ARTICLE


def test_load_publications_empty_and_missing_column(tmp_path):
    empty = tmp_path / "e.csv"
    empty.write_text(PUB_HEADER)
    assert list(load_publications(empty)) == []
    bad = tmp_path / "b.csv"
    bad.write_text("source,native_id\n")
    with pytest.raises(MissingColumn):
        list(load_publications(bad))


def test_histogram_contribution_is_licence_count():
    w = parse_crossref_work(WORK)
    assert len(w.licences) == len(WORK["license"])


def test_gold_directory_default_is_empty():
    assert GoldDirectory().membership == {}
