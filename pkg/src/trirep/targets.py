"""Target sets of positive integers with decidable membership.

Three base kinds are supported: a union of residue classes, an explicit
finite list, and the image of a triangular-number form.  Finite include and
exclude overlays are applied on top of the base set, in that order, so an
excluded value stays out even when it is also listed as an include.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .forms import TriangularForm, represented_up_to, represents


@dataclass(frozen=True)
class ResidueUnion:
    """All n >= 1 with n mod modulus in residues."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "residues", frozenset(int(r) for r in self.residues))
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if any(r < 0 or r >= self.modulus for r in self.residues):
            raise ValueError(f"residues must lie in 0..{self.modulus - 1}")


@dataclass(frozen=True)
class ExplicitList:
    """A finite, explicitly listed set."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(sorted({int(v) for v in self.values}))
        if vals and vals[0] < 1:
            raise ValueError("listed values must be positive")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class FormImage:
    """All positive n attained by a fixed triangular-number form."""

    form: TriangularForm

    def __post_init__(self):
        if self.form.is_empty:
            raise ValueError("image of an empty form is just {0}")


NATURALS = ResidueUnion(1, frozenset({0}))
ODDS = ResidueUnion(2, frozenset({1}))


@dataclass(eq=True)
class TargetSet:
    kind: ResidueUnion | ExplicitList | FormImage
    include: tuple[int, ...] = ()
    exclude: tuple[int, ...] = ()
    _image_tables: dict = field(default_factory=dict, compare=False, repr=False)
    _member_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self.include = tuple(sorted({int(v) for v in self.include}))
        self.exclude = tuple(sorted({int(v) for v in self.exclude}))
        if self.include and self.include[0] < 1:
            raise ValueError("include overlay values must be positive")
        if self.exclude and self.exclude[0] < 1:
            raise ValueError("exclude overlay values must be positive")

    # -- membership ---------------------------------------------------------

    def contains(self, n: int) -> bool:
        if n < 1:
            return False
        if n in self.exclude:
            return False
        if n in self.include:
            return True
        return self._base_contains(n)

    def _base_contains(self, n: int) -> bool:
        kind = self.kind
        if isinstance(kind, ResidueUnion):
            return n % kind.modulus in kind.residues
        if isinstance(kind, ExplicitList):
            return n in kind.values
        table = max(self._image_tables, default=-1)
        if n <= table:
            return bool(self._image_tables[table].bits[n])
        return represents(kind.form, n)

    # -- ordered traversal --------------------------------------------------

    def elements_up_to(self, bound: int) -> np.ndarray:
        """Sorted int64 array of all members <= bound."""
        if bound in self._member_cache:
            return self._member_cache[bound]
        kind = self.kind
        if isinstance(kind, ResidueUnion):
            n = np.arange(1, bound + 1, dtype=np.int64)
            base = n[np.isin(n % kind.modulus, sorted(kind.residues))]
        elif isinstance(kind, ExplicitList):
            base = np.array([v for v in kind.values if v <= bound], dtype=np.int64)
        else:
            bits = self._image_table(bound).bits
            hit = np.flatnonzero(bits).astype(np.int64)
            base = hit[hit >= 1]
        inc = np.array([v for v in self.include if v <= bound], dtype=np.int64)
        members = np.union1d(base, inc)
        if self.exclude:
            members = np.setdiff1d(members, np.array(self.exclude, dtype=np.int64))
        members = members.astype(np.int64)
        members.setflags(write=False)
        self._member_cache[bound] = members
        return members

    def next_element(self, n: int):
        """Least member >= n, or None when the set is exhausted."""
        m = max(1, n)
        limit = self._scan_limit(m)
        while limit is None or m <= limit:
            if self.contains(m):
                return m
            m += 1
        return None

    def _scan_limit(self, start: int):
        # Finite kinds exhaust; unbounded kinds always have a next member.
        kind = self.kind
        if isinstance(kind, ExplicitList):
            tops = kind.values + self.include
            return max(tops, default=0)
        if isinstance(kind, ResidueUnion) and not kind.residues:
            return max(self.include, default=0)
        return None

    def _image_table(self, bound: int):
        table = self._image_tables.get(bound)
        if table is None:
            table = represented_up_to(self.kind.form, bound)
            self._image_tables[bound] = table
        return table

    # -- reporting ----------------------------------------------------------

    def describe(self) -> str:
        kind = self.kind
        if kind == NATURALS:
            text = "nat"
        elif kind == ODDS:
            text = "odd"
        elif isinstance(kind, ResidueUnion):
            text = f"mod:{kind.modulus}:" + ",".join(str(r) for r in sorted(kind.residues))
        elif isinstance(kind, ExplicitList):
            text = "list:" + ",".join(str(v) for v in kind.values)
        else:
            text = f"form:{kind.form}"
        if self.include:
            text += "+include:" + ",".join(str(v) for v in self.include)
        if self.exclude:
            text += "+exclude:" + ",".join(str(v) for v in self.exclude)
        return text


def all_positive_integers() -> TargetSet:
    return TargetSet(NATURALS)


def odd_integers() -> TargetSet:
    return TargetSet(ODDS)


def is_all_positive_integers(target: TargetSet) -> bool:
    """True when the set is exactly every positive integer."""
    return target.kind == NATURALS and not target.exclude


def subset_of_multiples(target: TargetSet, c: int) -> bool:
    """True when every member is provably divisible by c.

    Sufficient, not necessary: a form image is accepted only when all its
    coefficients are multiples of c.
    """
    if c == 1:
        return True
    if any(v % c for v in target.include):
        return False
    kind = target.kind
    if isinstance(kind, ResidueUnion):
        return kind.modulus % c == 0 and all(r % c == 0 for r in kind.residues)
    if isinstance(kind, ExplicitList):
        return all(v % c == 0 for v in kind.values)
    return all(b % c == 0 for b in kind.form.coeffs)
