"""Triangular numbers, coefficient forms, and representability sieves.

A form with coefficients ``b = (b_1 <= ... <= b_k)`` sends a tuple of
non-negative integers ``x`` to ``sum(b_i * T(x_i))``, where ``T(x) = x(x+1)/2``
is the x-th triangular number.  ``n`` is *represented* when some tuple attains
it.  The workhorse here is :func:`represented_up_to`, a layered sieve that
materializes the attained values up to a bound as a bitmap: starting from the
single bit ``{0}``, each coefficient ``b`` folds in the translates ``+ b*T(x)``,
costing ``O(k * N * sqrt(2N/b))`` word operations in the worst case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SieveMemoryError

# A bool table with this many entries costs ~256 MiB; refuse anything larger.
MAX_TABLE_ENTRIES = 1 << 28


def triangular(x: int) -> int:
    """x-th triangular number x(x+1)/2.  Raises for negative x."""
    if x < 0:
        raise ValueError(f"triangular index must be non-negative, got {x}")
    return x * (x + 1) // 2


def is_triangular(m: int) -> bool:
    """True when m = x(x+1)/2 for some x >= 0 (8m+1 is an odd square)."""
    if m < 0:
        return False
    r = math.isqrt(8 * m + 1)
    return r * r == 8 * m + 1


def triangular_index(m: int):
    """The x with T(x) == m, or None when m is not triangular."""
    if m < 0:
        return None
    r = math.isqrt(8 * m + 1)
    if r * r != 8 * m + 1:
        return None
    return (r - 1) // 2


@dataclass(frozen=True)
class TriangularForm:
    """Non-decreasing positive coefficients; may be empty (escalation root).

    Equality is structural: two forms are equal exactly when their
    coefficient tuples are.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if self.coeffs and self.coeffs[0] < 1:
            raise ValueError(f"coefficients must be >= 1: {self.coeffs}")
        for a, b in zip(self.coeffs, self.coeffs[1:]):
            if a > b:
                raise ValueError(f"coefficients must be non-decreasing: {self.coeffs}")

    @property
    def is_empty(self) -> bool:
        return not self.coeffs

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    @property
    def coeff_sum(self) -> int:
        return sum(self.coeffs)

    @property
    def last(self):
        return self.coeffs[-1] if self.coeffs else None

    def multiplicity(self, c: int) -> int:
        return self.coeffs.count(c)

    def extended(self, c: int) -> "TriangularForm":
        """New form with one appended coefficient c >= last."""
        if self.coeffs and c < self.coeffs[-1]:
            raise ValueError(f"appended coefficient {c} below last of {self.coeffs}")
        return TriangularForm(self.coeffs + (int(c),))

    def contains_pattern(self, pattern) -> bool:
        """Multiset containment: every value of ``pattern`` occurs at least
        as often here."""
        return all(self.multiplicity(c) >= list(pattern).count(c) for c in set(pattern))

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)


@dataclass(frozen=True, eq=False)
class RepTable:
    """Bitmap of represented values: bits[n] is True iff the form attains n.

    bits[0] is always True (the all-zero tuple).
    """

    form: TriangularForm
    bound: int
    bits: np.ndarray

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be non-negative")
        if self.bits.dtype != np.bool_ or self.bits.shape != (self.bound + 1,):
            raise ValueError("bits must be a bool array of length bound+1")
        if not self.bits[0]:
            raise ValueError("bits[0] must be set: every form attains 0")
        self.bits.setflags(write=False)

    def missing(self) -> np.ndarray:
        """All n <= bound the form does not attain, ascending."""
        return np.flatnonzero(~self.bits)

    def prefix(self, bound: int) -> "RepTable":
        """The same table truncated to a smaller bound."""
        if bound > self.bound:
            raise ValueError(f"cannot extend a table for {self.bound} to {bound}")
        return RepTable(self.form, bound, self.bits[: bound + 1].copy())


def _attainable_bits(coeffs, bound: int) -> int:
    """Big-integer bitmap of sum(b_i * T(x_i)) values <= bound.

    Folds coefficients largest-first so the early layers stay sparse; the
    result does not depend on the order.
    """
    mask = (1 << (bound + 1)) - 1
    acc = 1  # bit 0: the empty sum
    for b in sorted(coeffs, reverse=True):
        if b > bound:
            continue  # only the x = 0 translate fits; the layer is an identity
        layer = 0
        x = 0
        while (t := b * x * (x + 1) // 2) <= bound:
            layer |= acc << t
            x += 1
        acc = layer & mask
    return acc


def _bits_to_array(acc: int, bound: int) -> np.ndarray:
    raw = acc.to_bytes((bound + 8) // 8, "little")
    return np.unpackbits(
        np.frombuffer(raw, dtype=np.uint8), count=bound + 1, bitorder="little"
    ).astype(bool)


def represented_up_to(form: TriangularForm, bound: int) -> RepTable:
    """Sieve all values 0..bound, returning a RepTable.

    Rejects empty forms; callers that need the escalation root handle the
    "attains only 0" case themselves.
    """
    if form.is_empty:
        raise ValueError("cannot sieve an empty form")
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if bound + 1 > MAX_TABLE_ENTRIES:
        raise SieveMemoryError(
            f"sieve to {bound} needs {bound + 1} entries (budget {MAX_TABLE_ENTRIES})"
        )
    return RepTable(form, bound, _bits_to_array(_attainable_bits(form.coeffs, bound), bound))


def count_reps_table(form: TriangularForm, bound: int) -> np.ndarray:
    """Exact ordered-tuple representation counts for every n <= bound."""
    if form.is_empty:
        raise ValueError("cannot count representations by an empty form")
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if bound + 1 > MAX_TABLE_ENTRIES // 8:
        raise SieveMemoryError(f"count table to {bound} exceeds the memory budget")
    counts = np.zeros(bound + 1, dtype=np.int64)
    counts[0] = 1
    for b in sorted(form.coeffs, reverse=True):
        layered = np.zeros_like(counts)
        x = 0
        while (t := b * x * (x + 1) // 2) <= bound:
            if t == 0:
                layered += counts
            else:
                layered[t:] += counts[:-t]
            x += 1
        counts = layered
    return counts


def count_reps(form: TriangularForm, n: int) -> int:
    """Number of ordered tuples x of non-negative integers attaining n."""
    return int(count_reps_table(form, n)[n])


def represents(form: TriangularForm, n: int) -> bool:
    """True iff some tuple attains n.  Early-exit search, no full counting."""
    if form.is_empty:
        raise ValueError("representability of an empty form is undefined")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return True
    # Coefficients above n only ever contribute x = 0.
    coeffs = sorted((b for b in form.coeffs if b <= n), reverse=True)
    if not coeffs:
        return False
    k = len(coeffs)
    if k == 1:
        q, r = divmod(n, coeffs[0])
        return r == 0 and is_triangular(q)
    xs = [0] * k
    rem = [0] * (k + 1)
    rem[0] = n
    i = 0
    while i >= 0:
        b = coeffs[i]
        t = b * xs[i] * (xs[i] + 1) // 2
        if t > rem[i]:
            xs[i] = 0
            i -= 1
            if i >= 0:
                xs[i] += 1
            continue
        left = rem[i] - t
        if left == 0:
            return True
        if i == k - 2:
            # Solve the last level directly: left must be b_last * T(x).
            q, r = divmod(left, coeffs[k - 1])
            if r == 0 and is_triangular(q):
                return True
            xs[i] += 1
            continue
        rem[i + 1] = left
        i += 1
    return False


def find_representation(form: TriangularForm, n: int):
    """Lexicographically smallest witness tuple for n, or None.

    Tuple positions follow the form's stored coefficient order.
    """
    if form.is_empty:
        raise ValueError("representability of an empty form is undefined")
    if n < 0:
        raise ValueError("n must be non-negative")
    coeffs = form.coeffs
    k = len(coeffs)
    if k == 1:
        q, r = divmod(n, coeffs[0])
        x = triangular_index(q) if r == 0 else None
        return None if x is None else (x,)
    xs = [0] * k
    rem = [0] * (k + 1)
    rem[0] = n
    i = 0
    while i >= 0:
        b = coeffs[i]
        t = b * xs[i] * (xs[i] + 1) // 2
        if t > rem[i]:
            xs[i] = 0
            i -= 1
            if i >= 0:
                xs[i] += 1
            continue
        left = rem[i] - t
        if i == k - 2:
            q, r = divmod(left, coeffs[k - 1])
            x_last = triangular_index(q) if r == 0 else None
            if x_last is not None:
                xs[k - 1] = x_last
                return tuple(xs)
            xs[i] += 1
            continue
        rem[i + 1] = left
        i += 1
    return None
