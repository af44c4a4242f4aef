#!/usr/bin/env python3
"""Rebuild every headline result in one go and print the reports.

Runs the three escalation trees, the eight triangular/quadratic equivalence
checks, the eight exception scans, and the exclusion-rule verifications at
their full bounds.  Expect a few minutes of CPU.
"""

import argparse
import sys
import time
import warnings

from trirep.cli import parse_set, tree_report
from trirep.escalation import TreeConfig, build_tree
from trirep.forms import TriangularForm
from trirep.quadratic import TABLE1_ROWS, table1_check
from trirep.rules import builtin_catalog, table3_scan, verify_rule

SCAN_FORMS = (
    (1, 2, 6), (1, 2, 8), (1, 2, 9), (1, 2, 11),
    (1, 4, 5), (1, 4, 8), (1, 4, 9), (1, 5, 6),
)


def timed(label, fn):
    start = time.perf_counter()
    result = fn()
    print(f"# {label}: {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true",
                        help="smaller bounds: trees to 2e4, scans to 1e5")
    args = parser.parse_args()

    tree_cfg = TreeConfig(10**4, 2 * 10**4) if args.quick else TreeConfig(10**5, 2 * 10**5)
    nat_cfg = TreeConfig(10**4, 2 * 10**4) if args.quick else TreeConfig(10**4, 10**5)
    scan_bound = 10**5 if args.quick else 10**6

    warnings.simplefilter("ignore")
    for set_text, cfg in (("nat", nat_cfg), ("odd", tree_cfg), ("form:2,3,4", tree_cfg)):
        tree = timed(f"tree {set_text}", lambda: build_tree(parse_set(set_text), cfg))
        for line in tree_report(tree, set_text).splitlines():
            if not line.startswith("NODE\t") and not line.startswith("STUCK\t"):
                print(line)
        print(f"NODES\t{sum(1 for _ in tree.nodes())}")
        print()

    for i, row in enumerate(TABLE1_ROWS, 1):
        violations = timed(f"equiv row {i}", lambda: table1_check(row, 5000))
        print(f"EQUIV\t{row.triangular}\t{'ok' if not violations else violations[:5]}")
    print()

    for coeffs in SCAN_FORMS:
        form = TriangularForm(coeffs)
        report = timed(f"scan {form}", lambda: table3_scan(form, scan_bound))
        classes = " ".join(f"{r}mod{m}" for m, r in report.classes) or "-"
        sporadics = ",".join(map(str, report.sporadics)) or "-"
        print(f"SCAN\t{form}\tclasses={classes}\tsporadics={sporadics}")
    print()

    for entry in builtin_catalog():
        outcome = verify_rule(entry.form, entry.rule, 10**5)
        print(f"RULE\t{entry.form}\t{entry.rule.claim}\t{'pass' if outcome.passed else 'fail'}")


if __name__ == "__main__":
    main()
