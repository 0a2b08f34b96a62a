"""Write a synthetic Crossref-shaped snapshot for scale testing.

Records are JSON lines split over several files. A fixed fraction of lines is
deliberately broken (truncated JSON, missing DOI, non-object, invalid UTF-8)
and some DOIs are repeated across files so deduplication has work to do.

    python scripts/generate_snapshot.py OUT_DIR --records 1000000 --files 8
"""

import argparse
import json
import random
from pathlib import Path

LICENCES = [
    "http://creativecommons.org/licenses/by/4.0/",
    "https://creativecommons.org/licenses/by-nc-nd/4.0/",
    "https://www.elsevier.com/tdm/userlicense/1.0/",
    "http://doi.wiley.com/10.1002/tdm_license_1.1",
    "https://www.springer.com/tdm",
    "http://www.acm.org/publications/policies/copyright_policy#Background",
]

BROKEN = [
    b'{"DOI": "10.5555/truncated", "license": [',
    b'{"title": ["no identifier here"], "license": []}',
    b'[1, 2, 3]',
    b'{"DOI": "not-a-doi"}',
    b'{"DOI": "10.5555/bad-\xff\xfe-utf8", "license": [',
]


def record(rnd: random.Random, n: int) -> dict:
    year = rnd.randint(2000, 2018)
    licences = []
    for _ in range(rnd.choice((0, 0, 1, 1, 1, 2, 3))):
        entry = {"URL": rnd.choice(LICENCES), "content-version": rnd.choice(("vor", "am", "tdm"))}
        if rnd.random() < 0.5:
            entry["delay-in-days"] = rnd.choice((0, 0, 0, 365))
        else:
            entry["start"] = {"date-parts": [[year, rnd.randint(1, 12), rnd.randint(1, 28)]]}
        licences.append(entry)
    issn = f"{rnd.randint(1000, 9999)}-{rnd.randint(100, 999)}X"
    return {
        "DOI": f"10.{1000 + n % 9000}/synthetic.{n}",
        "type": "journal-article",
        "title": [f"Synthetic work {n}"],
        "container-title": [f"Journal {n % 5000}"],
        "ISSN": [issn],
        "issued": {"date-parts": [[year, rnd.randint(1, 12)]]},
        "volume": str(rnd.randint(1, 60)),
        "issue": str(rnd.randint(1, 12)),
        "license": licences,
    }


def generate(out_dir: Path, records: int, files: int, malformed: float, duplicates: float, seed: int) -> dict:
    """Return counts of what was written: total lines, malformed lines, repeated DOIs."""
    rnd = random.Random(seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    handles = [open(out_dir / f"part-{i:03d}.jsonl", "wb") for i in range(files)]
    counts = {"lines": 0, "malformed": 0, "repeats": 0}
    try:
        for n in range(records):
            fh = handles[n * files // records]
            if rnd.random() < malformed:
                line = rnd.choice(BROKEN)
                counts["malformed"] += 1
            else:
                ident = n
                if n > 0 and rnd.random() < duplicates:
                    ident = rnd.randrange(n)
                    counts["repeats"] += 1
                line = json.dumps(record(rnd, ident), separators=(",", ":")).encode()
            fh.write(line + b"\n")
            counts["lines"] += 1
    finally:
        for fh in handles:
            fh.close()
    return counts


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--records", type=int, default=1_000_000)
    ap.add_argument("--files", type=int, default=8)
    ap.add_argument("--malformed", type=float, default=0.01)
    ap.add_argument("--duplicates", type=float, default=0.005)
    ap.add_argument("--seed", type=int, default=20180611)
    args = ap.parse_args(argv)
    counts = generate(args.out_dir, args.records, args.files, args.malformed, args.duplicates, args.seed)
    print(json.dumps(counts))


if __name__ == "__main__":
    main()
