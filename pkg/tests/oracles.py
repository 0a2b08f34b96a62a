"""Independent reference implementations used as test oracles.

Nothing here calls into the package's resolution or classification code; the
rules are re-stated directly from the category definitions.
"""

import random
from datetime import date, timedelta

from oastatus.ingest import CrossrefWork, GoldDirectory, Membership, PublicationRecord, Source, issn_check_digit
from oastatus.licence import LicenceEntry

OA_URLS = ["https://creativecommons.org/licenses/by/4.0", "https://creativecommons.org/publicdomain/zero/1.0"]
NONOA_URLS = ["https://www.elsevier.com/tdm/userlicense/1.0", "https://doi.wiley.com/10.1002/tdm_license_1.1"]
UNCLEAR_URLS = ["https://publisher.example/licence/custom"]


def _variant(url, rnd):
    """Same licence, spelled the way publishers actually deposit it."""
    choice = rnd.randrange(4)
    if choice == 0:
        return url.replace("https://", "http://")
    if choice == 1:
        return url + "/"
    return url


def naive_status(entries):
    urls = {e.url.lower().replace("http://", "https://").rstrip("/") for e in entries}
    if not urls:
        return "None"
    if urls & set(OA_URLS):
        return "OA"
    if urls & set(NONOA_URLS):
        return "NonOA"
    return "Unclear"


def naive_delay(entries, issued, status):
    wanted = {"OA": OA_URLS, "NonOA": NONOA_URLS, "Unclear": UNCLEAR_URLS}.get(status, [])
    days = []
    for e in entries:
        if e.url.lower().replace("http://", "https://").rstrip("/") not in wanted:
            continue
        if e.delay_in_days is not None:
            days.append(e.delay_in_days)
        elif e.start_date is not None and issued is not None:
            days.append(max(0, (e.start_date - issued).days))
    if not days:
        return "Unknown"
    return "NotDelayed" if 0 in days else "Delayed"


def reference_classify(pubs, works, directory):
    """Return {(source, native_id): (category, delayed, status)} by brute force."""
    resolved = []
    for p in pubs:
        w = works.get(p.doi) if p.doi else None
        entries = list(w.licences) if w else []
        status = naive_status(entries)
        resolved.append((p, status, naive_delay(entries, w.issued_date if w else None, status)))

    def key(p):
        if not p.volume or not p.issue:
            return None
        if p.issns:
            journal = directory.issn_to_issnl.get(p.issns[0], p.issns[0])
        else:
            journal = " ".join(p.journal_title.split()).lower()
        if not journal:
            return None
        return (p.source.value, journal, p.volume, p.issue)

    out = {}
    for p, status, delay in resolved:
        gold = any(directory.issn_to_issnl.get(i, i) in directory.membership for i in p.issns)
        k = key(p)
        members = [s for q, s, _ in resolved if k is not None and key(q) == k]
        n_oa = members.count("OA")
        n_non = members.count("NonOA")
        n_na = len(members) - n_oa - n_non
        if gold:
            cat = "Gold"
        elif k is None:
            cat = "NA"
        elif n_oa == len(members):
            cat = "HiddenGold"
        elif status == "OA" and n_non > 0:
            cat = "Hybrid"
        elif status == "OA" and n_non == 0 and n_na > 0:
            cat = "ProbableHybrid"
        elif n_non == len(members):
            cat = "Closed"
        else:
            cat = "NA"
        out[(p.source.value, p.native_id)] = (cat, delay if cat not in ("Closed", "NA") else "Unknown", status)
    return out


def random_issn(rnd):
    first = "".join(str(rnd.randrange(10)) for _ in range(7))
    return f"{first[:4]}-{first[4:]}{issn_check_digit(first)}"


def random_corpus(seed, max_pubs=200, max_issues=20):
    """Synthetic publications, works and directory with varied licence mixes."""
    rnd = random.Random(seed)
    n_journals = rnd.randint(1, 6)
    journals = []
    directory = GoldDirectory()
    for j in range(n_journals):
        kind = rnd.random()
        if kind < 0.2:
            issns = ()  # keyed by title
        else:
            issns = tuple(random_issn(rnd) for _ in range(rnd.randint(1, 2)))
            issnl = issns[0] if rnd.random() < 0.6 else random_issn(rnd)
            for i in issns:
                directory.issn_to_issnl[i] = issnl
            if rnd.random() < 0.25:
                directory.membership[issnl] = Membership(rnd.random() < 0.7, rnd.random() < 0.5)
        title = rnd.choice(["Journal  of Tests", "journal of tests", "Annals of X", f"J{j}"])
        journals.append((issns, title))
    n_issues = rnd.randint(1, max_issues)
    issues = [(rnd.randrange(len(journals)), str(rnd.randint(1, 3)), str(rnd.randint(1, 4))) for _ in range(n_issues)]
    # bias towards issues with uniform licence mixes so HiddenGold/Closed occur
    issue_bias = [rnd.choice(["oa", "nonoa", "mixed", "mixed", "none"]) for _ in issues]

    pubs, works = [], {}
    n_pubs = rnd.randint(0, max_pubs)
    for n in range(n_pubs):
        idx = rnd.randrange(len(issues))
        j, vol, iss = issues[idx]
        issns, title = journals[j]
        if issns and rnd.random() < 0.3:
            issns = tuple(reversed(issns))
        if rnd.random() < 0.1:
            vol = None
        if rnd.random() < 0.05:
            iss = None
        doi = f"10.{rnd.randint(1000, 1010)}/p{seed}.{n}" if rnd.random() < 0.9 else None
        pubs.append(PublicationRecord(
            source=rnd.choice([Source.WOS, Source.SCOPUS]) if rnd.random() < 0.2 else Source.WOS,
            native_id=f"id{n:04d}",
            doi=doi,
            issns=issns,
            year=rnd.randint(2000, 2018),
            journal_title=title,
            volume=vol,
            issue=iss,
        ))
        if doi is None or rnd.random() < 0.1:
            continue
        issued = date(2017, 1, 1) + timedelta(days=rnd.randint(0, 300)) if rnd.random() < 0.8 else None
        bias = issue_bias[idx]
        if bias == "oa":
            pool = OA_URLS
        elif bias == "nonoa":
            pool = NONOA_URLS
        elif bias == "none":
            pool = []
        else:
            pool = OA_URLS + NONOA_URLS + UNCLEAR_URLS
        k = rnd.choice([0, 1, 1, 1, 2, 3]) if pool else 0
        entries = []
        for _ in range(k):
            url = _variant(rnd.choice(pool), rnd)
            mode = rnd.random()
            if mode < 0.3:
                entries.append(LicenceEntry(url, delay_in_days=rnd.choice([0, 0, 30, 365])))
            elif mode < 0.6 and issued is not None:
                entries.append(LicenceEntry(url, start_date=issued + timedelta(days=rnd.choice([0, 0, 90]))))
            else:
                entries.append(LicenceEntry(url))
        works[doi] = CrossrefWork(doi=doi, issued_date=issued, licences=tuple(entries))
    return pubs, works, directory


def perturb_licences(works, seed):
    rnd = random.Random(seed)
    pool = OA_URLS + NONOA_URLS + UNCLEAR_URLS
    out = {}
    for doi, w in works.items():
        entries = tuple(LicenceEntry(rnd.choice(pool)) for _ in range(rnd.randint(0, 3)))
        out[doi] = CrossrefWork(doi=w.doi, issued_date=w.issued_date, issns=w.issns, licences=entries)
    return out
