"""How much the ProbableHybrid share moves when unlicensed issue members join it.

Classifies seeded synthetic corpora twice, with the switch off (default) and
on, and prints category totals side by side.

    python scripts/probable_hybrid_sensitivity.py --corpora 200
"""

import argparse
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import random_corpus  # noqa: E402
from oastatus.classify import ClassifyConfig, Kind, classify_corpus  # noqa: E402
from oastatus.licence import LicencePolicy  # noqa: E402

FIXTURE_POLICY = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "policy.txt"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpora", type=int, default=200)
    ap.add_argument("--policy", type=Path, default=FIXTURE_POLICY)
    args = ap.parse_args(argv)
    policy = LicencePolicy.load(args.policy)
    totals = {False: Counter(), True: Counter()}
    for seed in range(args.corpora):
        pubs, works, directory = random_corpus(seed)
        for switch in totals:
            config = ClassifyConfig(probable_hybrid_includes_unlicensed=switch)
            totals[switch].update(c.category.kind for c in classify_corpus(pubs, works, directory, policy, config))
    n = sum(totals[False].values())
    print(f"{'category':<16}{'default':>10}{'switch on':>12}")
    for kind in Kind:
        off, on = totals[False][kind], totals[True][kind]
        print(f"{kind.value:<16}{100 * off / n:>9.2f}%{100 * on / n:>11.2f}%")
    print(f"publications={n}")


if __name__ == "__main__":
    main()
