#!/usr/bin/env python3
"""Throughput of the layered representability sieve at increasing bounds."""

import argparse
import time

from trirep.forms import TriangularForm, represented_up_to

FORMS = ((1,), (1, 1, 1), (1, 1, 3), (2, 3, 4), (1, 2, 5, 10), (1, 1, 3, 12, 81))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-exp", type=int, default=7,
                        help="largest bound 10^k to time (default 7)")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"{'form':>18} {'bound':>12} {'best (s)':>10} {'Mbits/s':>10}")
    for coeffs in FORMS:
        form = TriangularForm(coeffs)
        for exp in range(4, args.max_exp + 1):
            bound = 10**exp
            best = min(
                _time_one(form, bound) for _ in range(args.repeats)
            )
            rate = bound / best / 1e6
            print(f"{str(form):>18} {bound:>12} {best:>10.4f} {rate:>10.1f}")


def _time_one(form, bound):
    start = time.perf_counter()
    represented_up_to(form, bound)
    return time.perf_counter() - start


if __name__ == "__main__":
    main()
