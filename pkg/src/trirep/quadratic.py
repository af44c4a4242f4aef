"""Exact solution counts for positive definite quadratic forms.

Covers general ternary forms a*x^2 + b*y^2 + c*z^2 + d*xy + e*xz + f*yz,
diagonal forms in any dimension, the all-variables-odd restriction, and the
2^k-term alternating sum over even-coordinate constraints that isolates the
all-odd solutions.

The bridge to triangular forms: 8*T(x) + 1 = (2x+1)^2, so tuples attaining n
under coefficients b correspond to all-odd solutions of the diagonal form at
8n + sum(b), up to the 2^k sign choices:

    odd_count(b, 8n + sum(b)) == 2^k * count_reps(b, n)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .forms import TriangularForm, count_reps, count_reps_table, represented_up_to


@dataclass(frozen=True)
class TernaryQuadraticForm:
    """Q(x,y,z) = a x^2 + b y^2 + c z^2 + d xy + e xz + f yz, positive definite."""

    a: int
    b: int
    c: int
    d: int = 0
    e: int = 0
    f: int = 0

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError("diagonal coefficients must be >= 1")
        minors = (2 * self.a, 4 * self.a * self.b - self.d**2, self.gram_det())
        if any(m <= 0 for m in minors):
            raise ValueError(f"form {self.coefficients()} is not positive definite")

    def coefficients(self) -> tuple[int, int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def gram_det(self) -> int:
        """Determinant of [[2a,d,e],[d,2b,f],[e,f,2c]]."""
        a, b, c, d, e, f = self.coefficients()
        return (
            2 * a * (4 * b * c - f * f)
            - d * (2 * c * d - e * f)
            + e * (d * f - 2 * b * e)
        )

    def value(self, x: int, y: int, z: int) -> int:
        a, b, c, d, e, f = self.coefficients()
        return a * x * x + b * y * y + c * z * z + d * x * y + e * x * z + f * y * z

    def variable_bounds(self, m: int) -> tuple[int, int, int]:
        """Largest |x|, |y|, |z| possible when Q = m.

        From Cauchy-Schwarz in the Gram inner product: v_i^2 <= 2m * cof_ii / det,
        with integer cofactors, so the bound is exact.
        """
        a, b, c, d, e, f = self.coefficients()
        det = self.gram_det()
        cofs = (4 * b * c - f * f, 4 * a * c - e * e, 4 * a * b - d * d)
        return tuple(math.isqrt(2 * m * cof // det) for cof in cofs)


@dataclass(frozen=True)
class DiagonalForm:
    """sum(b_i * x_i^2) with positive integer coefficients, any dimension."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs or min(self.coeffs) < 1:
            raise ValueError("need at least one coefficient, all >= 1")

    @property
    def dimension(self) -> int:
        return len(self.coeffs)


def solution_counts_up_to(q: TernaryQuadraticForm, bound: int) -> np.ndarray:
    """counts[m] = number of integer (x,y,z) with Q(x,y,z) = m, for m <= bound."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    counts = np.zeros(bound + 1, dtype=np.int64)
    bx, by, bz = q.variable_bounds(bound)
    ys = np.arange(-by, by + 1, dtype=np.int64)[:, None]
    zs = np.arange(-bz, bz + 1, dtype=np.int64)[None, :]
    plane = q.b * ys * ys + q.c * zs * zs + q.f * ys * zs
    cross = q.d * ys + q.e * zs
    for x in range(-bx, bx + 1):
        vals = plane + x * cross + q.a * x * x
        hits = vals[vals <= bound]
        counts += np.bincount(hits, minlength=bound + 1)
    return counts


def count_solutions(q: TernaryQuadraticForm, m: int) -> int:
    """Exact number of integer triples with Q(x,y,z) = m."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return int(solution_counts_up_to(q, m)[m])


def _diagonal_counts(coeffs, bound: int, step: int, start: int) -> np.ndarray:
    """Count tuples per value, with each |x_i| running over start, start+step, ...

    start=0, step=1 counts unrestricted tuples; start=1, step=2 counts all-odd
    tuples.  Nonzero |x| contributes both signs.
    """
    counts = np.zeros(bound + 1, dtype=np.int64)
    counts[0] = 1
    for c in coeffs:
        layered = np.zeros_like(counts)
        if start == 0:
            layered += counts
            x = step
        else:
            x = start
        while c * x * x <= bound:
            t = c * x * x
            layered[t:] += 2 * counts[: bound + 1 - t]
            x += step
        counts = layered
    return counts


def diagonal_solution_counts_up_to(coeffs, bound: int) -> np.ndarray:
    """counts[m] = integer tuples with sum(c_i x_i^2) = m."""
    return _diagonal_counts(tuple(coeffs), bound, step=1, start=0)


def odd_solution_counts_up_to(form: DiagonalForm, bound: int) -> np.ndarray:
    """counts[m] = integer tuples with every x_i odd and sum(c_i x_i^2) = m."""
    return _diagonal_counts(form.coeffs, bound, step=2, start=1)


def count_odd_solutions(form: DiagonalForm, m: int) -> int:
    if m < 0:
        raise ValueError("m must be non-negative")
    return int(odd_solution_counts_up_to(form, m)[m])


def inclusion_exclusion_odd_table(form: DiagonalForm, bound: int) -> np.ndarray:
    """The alternating sum over even-coordinate constraints, per value.

    For every subset E of coordinates, constraining x_i even for i in E turns
    c_i into 4*c_i; summing (-1)^|E| of those counts cancels every tuple with
    at least one even coordinate, leaving exactly the all-odd count.
    """
    k = form.dimension
    total = np.zeros(bound + 1, dtype=np.int64)
    for r in range(k + 1):
        sign = -1 if r % 2 else 1
        for even_set in combinations(range(k), r):
            scaled = tuple(
                4 * c if i in even_set else c for i, c in enumerate(form.coeffs)
            )
            total += sign * diagonal_solution_counts_up_to(scaled, bound)
    return total


def inclusion_exclusion_odd(form: DiagonalForm, m: int) -> int:
    if m < 0:
        raise ValueError("m must be non-negative")
    return int(inclusion_exclusion_odd_table(form, m)[m])


def shift_identity_check(form: TriangularForm, n: int) -> bool:
    """odd_count(b, 8n + sum(b)) == 2^k * count_reps(b, n), checked exactly."""
    if form.is_empty:
        raise ValueError("shift identity needs a non-empty form")
    lhs = count_odd_solutions(DiagonalForm(form.coeffs), 8 * n + form.coeff_sum)
    return lhs == 2**form.dimension * count_reps(form, n)


def shift_identity_violations(form: TriangularForm, n_max: int) -> list[int]:
    """All n <= n_max where the shift identity fails (expected: none)."""
    if form.is_empty:
        raise ValueError("shift identity needs a non-empty form")
    s = form.coeff_sum
    odd = odd_solution_counts_up_to(DiagonalForm(form.coeffs), 8 * n_max + s)
    lhs = odd[s :: 8][: n_max + 1]
    rhs = (2**form.dimension) * count_reps_table(form, n_max)
    return [int(n) for n in np.flatnonzero(lhs != rhs)]


# -- built-in equivalences ---------------------------------------------------

@dataclass(frozen=True)
class EquivalenceRow:
    """Claim: the triangular form attains n iff the (unrestricted) quadratic
    form attains multiplier*n + offset."""

    triangular: TriangularForm
    quadratic: TernaryQuadraticForm
    multiplier: int
    offset: int

    def __post_init__(self):
        if self.triangular.dimension != 3:
            raise ValueError("equivalence rows pair ternary forms")
        if self.multiplier not in (2, 4, 8):
            raise ValueError("shift multiplier must be 2, 4 or 8")
        if self.offset < 0:
            raise ValueError("shift offset must be non-negative")

    def shifted(self, n: int) -> int:
        return self.multiplier * n + self.offset


def _row(tri, quad, multiplier, offset):
    return EquivalenceRow(
        TriangularForm(tri), TernaryQuadraticForm(*quad), multiplier, offset
    )


TABLE1_ROWS: tuple[EquivalenceRow, ...] = (
    _row((1, 2, 6), (2, 4, 7, 0, 0, 4), 8, 9),
    _row((1, 2, 8), (2, 4, 9, 0, 0, 4), 8, 11),
    _row((1, 2, 9), (2, 3, 4, 2, 0, 2), 2, 3),
    _row((1, 2, 11), (1, 6, 8, 0, 0, 4), 4, 7),
    _row((1, 4, 5), (1, 4, 5, 0, 0, 0), 8, 10),
    _row((1, 4, 8), (4, 4, 9, 0, 4, 0), 8, 13),
    _row((1, 4, 9), (1, 4, 9, 0, 0, 0), 8, 14),
    _row((1, 5, 6), (3, 3, 4, 0, 2, 2), 2, 3),
)


def table1_check(row: EquivalenceRow, bound: int) -> list[int]:
    """All n <= bound where the two representability predicates disagree."""
    tri = represented_up_to(row.triangular, bound)
    quad = solution_counts_up_to(row.quadratic, row.shifted(bound))
    shifted = row.multiplier * np.arange(bound + 1, dtype=np.int64) + row.offset
    mismatch = tri.bits != (quad[shifted] > 0)
    return [int(n) for n in np.flatnonzero(mismatch)]


def density_check_125(n_max: int) -> list[int]:
    """Violations of the x^2+2y^2+5z^2 scaling identities, n <= n_max.

    Checks the doubling claim count(8n+8) == 2*count(2n+2) together with the
    exact companion 8*count_reps([1,2,5], n) == count(8n+8) - count(2n+2).
    The companion is forced: solutions of x^2+2y^2+5z^2 = 8n+8 are all-even
    or all-odd (mod 8), the all-even ones scale down to 2n+2, and the all-odd
    count is 2^3 times the triangular count by the shift identity.
    """
    q = TernaryQuadraticForm(1, 2, 5)
    counts = solution_counts_up_to(q, 8 * n_max + 8)
    n = np.arange(n_max + 1, dtype=np.int64)
    big = counts[8 * n + 8]
    small = counts[2 * n + 2]
    tri = 8 * count_reps_table(TriangularForm((1, 2, 5)), n_max)
    bad = (big != 2 * small) | (big - small != tri)
    return [int(v) for v in np.flatnonzero(bad)]
