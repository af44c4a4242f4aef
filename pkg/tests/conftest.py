"""Shared brute-force oracles, deliberately independent of the library paths.

The set-based image oracle and the recursive tuple counter never touch the
bitmap sieve or the numpy convolution tables they are used to check.
"""

import itertools

import pytest


def tri(x):
    return x * (x + 1) // 2


def naive_image(coeffs, bound):
    """Attainable values <= bound, built by set accumulation."""
    sums = {0}
    for b in coeffs:
        layer = set()
        for s in sums:
            x = 0
            while s + b * tri(x) <= bound:
                layer.add(s + b * tri(x))
                x += 1
        sums = layer
    return sums


def naive_count(coeffs, n):
    """Ordered tuples attaining n, by full recursion."""
    if not coeffs:
        return 1 if n == 0 else 0
    total = 0
    x = 0
    while coeffs[0] * tri(x) <= n:
        total += naive_count(coeffs[1:], n - coeffs[0] * tri(x))
        x += 1
    return total


def naive_ternary_count(q, m):
    """Triple loop over the exact variable box."""
    bx, by, bz = q.variable_bounds(m)
    return sum(
        1
        for x in range(-bx, bx + 1)
        for y in range(-by, by + 1)
        for z in range(-bz, bz + 1)
        if q.value(x, y, z) == m
    )


def naive_odd_diagonal_count(coeffs, m):
    """All-odd tuples of a diagonal form attaining m."""
    ranges = []
    for c in coeffs:
        top = 1
        while c * top * top <= m:
            top += 2
        ranges.append([v for v in range(-top, top + 1) if v % 2])
    return sum(
        1
        for xs in itertools.product(*ranges)
        if sum(c * x * x for c, x in zip(coeffs, xs)) == m
    )


@pytest.fixture(scope="session")
def odd_set():
    from trirep.targets import odd_integers

    return odd_integers()


@pytest.fixture(scope="session")
def nat_set():
    from trirep.targets import all_positive_integers

    return all_positive_integers()
