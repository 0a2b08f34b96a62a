"""Recompute the published cross-tab and audit percentages from their frequencies.

    python scripts/replay_published_tables.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from published_tables import (  # noqa: E402
    AUDIT_SCOPUS,
    AUDIT_WOS,
    CONTRADICTION_RATE,
    CROSSTAB_SCOPUS,
    CROSSTAB_WOS,
    HEADLINES,
    expand_checks,
)
from oastatus.reconcile import CrossTab, contradiction_rate, summarize_manual_checks  # noqa: E402


def main():
    for name, table in (("wos", CROSSTAB_WOS), ("scopus", CROSSTAB_SCOPUS)):
        tab = CrossTab.from_counts({(c, u): f for c, u, f, _ in table})
        mismatches = sum(str(r.percent) != p for r, (*_, p) in zip(tab.rows, table))
        print(f"{name} crosstab: contradiction_rate={contradiction_rate(tab):.2f} "
              f"published={CONTRADICTION_RATE[name]:.2f} percent_mismatches={mismatches}")
    for name, table in (("wos", AUDIT_WOS), ("scopus", AUDIT_SCOPUS)):
        s = summarize_manual_checks(expand_checks(table))
        for metric, published in HEADLINES[name].items():
            print(f"{name} audit: {metric}={getattr(s, metric):.2f} published={published:.2f}")


if __name__ == "__main__":
    main()
