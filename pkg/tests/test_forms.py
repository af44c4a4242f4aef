import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trirep.errors import SieveMemoryError
from trirep.forms import (
    TriangularForm,
    count_reps,
    count_reps_table,
    find_representation,
    is_triangular,
    represented_up_to,
    represents,
    triangular,
    triangular_index,
)
from conftest import naive_count, naive_image

forms = st.lists(st.integers(1, 12), min_size=1, max_size=5).map(
    lambda cs: TriangularForm(tuple(sorted(cs)))
)


def test_triangular_values():
    assert triangular(0) == 0
    assert triangular(1) == 1
    assert triangular(12) == 78
    with pytest.raises(ValueError):
        triangular(-1)


def test_triangular_index_roundtrip():
    for x in range(200):
        assert is_triangular(triangular(x))
        assert triangular_index(triangular(x)) == x
    assert triangular_index(2) is None
    assert not is_triangular(-3)


def test_form_construction():
    f = TriangularForm((1, 1, 3))
    assert f.dimension == 3 and f.coeff_sum == 5 and f.last == 3
    assert f == TriangularForm((1, 1, 3))
    assert f != TriangularForm((1, 3, 3))
    assert TriangularForm().is_empty
    with pytest.raises(ValueError):
        TriangularForm((2, 1))  # unsorted input is rejected, never reordered
    with pytest.raises(ValueError):
        TriangularForm((0, 1))


def test_count_reps_examples():
    assert count_reps(TriangularForm((1, 1, 1)), 6) == 6
    assert count_reps(TriangularForm((2,)), 3) == 0
    assert count_reps(TriangularForm((1,)), 6) == 1


def test_represents_examples():
    assert represents(TriangularForm((1, 1, 3)), 8) is False
    assert represents(TriangularForm((1, 1, 1)), 7) is True
    assert represents(TriangularForm((1,)), 0) is True
    with pytest.raises(ValueError):
        represents(TriangularForm(), 3)


def test_represented_up_to_examples():
    assert represented_up_to(TriangularForm((1, 1, 1)), 20).missing().size == 0
    assert list(represented_up_to(TriangularForm((1, 1, 3)), 20).missing()) == [8, 17]
    assert list(represented_up_to(TriangularForm((2, 3, 4)), 89).missing()) == [1, 8, 31]


def test_find_representation():
    assert find_representation(TriangularForm((1,)), 6) == (3,)
    assert find_representation(TriangularForm((1, 1, 3)), 8) is None
    assert find_representation(TriangularForm((1, 1, 3)), 17) is None
    b = TriangularForm((1, 2, 6))
    tup = find_representation(b, 9)
    assert tup is not None
    assert sum(c * triangular(x) for c, x in zip(b.coeffs, tup)) == 9


@settings(deadline=None, max_examples=60)
@given(forms, st.integers(0, 300))
def test_sieve_matches_naive_oracle(form, bound):
    table = represented_up_to(form, bound)
    expected = naive_image(form.coeffs, bound)
    assert {int(n) for n in np.flatnonzero(table.bits)} == expected


def test_sieve_matches_naive_oracle_large():
    rng = random.Random(607801)
    for _ in range(12):
        k = rng.randint(1, 5)
        form = TriangularForm(tuple(sorted(rng.randint(1, 12) for _ in range(k))))
        table = represented_up_to(form, 2000)
        expected = naive_image(form.coeffs, 2000)
        assert {int(n) for n in np.flatnonzero(table.bits)} == expected, form


@settings(deadline=None, max_examples=40)
@given(forms, st.integers(0, 120))
def test_three_routes_agree(form, n):
    by_count = count_reps(form, n) > 0
    by_search = represents(form, n)
    by_table = bool(represented_up_to(form, n).bits[n])
    assert by_count == by_search == by_table


@settings(deadline=None, max_examples=30)
@given(forms, st.integers(0, 150))
def test_count_matches_recursive_oracle(form, n):
    assert count_reps(form, n) == naive_count(form.coeffs, n)


@settings(deadline=None, max_examples=30)
@given(forms, st.lists(st.integers(1, 12), min_size=1, max_size=2), st.integers(0, 200))
def test_monotone_under_extension(form, extra, bound):
    extended = TriangularForm(tuple(sorted(form.coeffs + tuple(extra))))
    small = represented_up_to(form, bound).bits
    large = represented_up_to(extended, bound).bits
    assert not np.any(small & ~large)


@settings(deadline=None, max_examples=30)
@given(forms, st.integers(1, 5), st.integers(0, 120))
def test_scaling(form, c, n):
    scaled = TriangularForm(tuple(c * b for b in form.coeffs))
    assert represents(scaled, c * n) == represents(form, n)


def test_count_table_consistent_with_single():
    form = TriangularForm((1, 2, 5))
    table = count_reps_table(form, 60)
    for n in range(61):
        assert int(table[n]) == count_reps(form, n)


def test_memory_guard():
    with pytest.raises(SieveMemoryError):
        represented_up_to(TriangularForm((1,)), 1 << 29)


def test_rep_table_prefix():
    table = represented_up_to(TriangularForm((1, 1, 3)), 1000)
    pref = table.prefix(20)
    assert list(pref.missing()) == [8, 17]
    with pytest.raises(ValueError):
        table.prefix(2000)
