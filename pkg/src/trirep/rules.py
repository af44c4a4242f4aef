"""Exclusion rules and known-leaf certificates.

An exclusion rule predicts non-representability from the arithmetic of a
shifted value N = multiplier*n + offset: an odd p-power factorization class,
a perfect-square requirement, or plain residue classes.  Rules are shipped as
a reviewable text catalog (see data/exclusion_rules.txt) and are never
trusted: :func:`verify_rule` replays each claim against a brute-force sieve.

Known-leaf rules certify, by citable classical theorems, that a form attains
an entire target set; they let the escalation tree mark a leaf without a
deep sieve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .forms import TriangularForm, represented_up_to
from .targets import TargetSet, is_all_positive_integers, subset_of_multiples

DEFAULT_CLASS_MODULI = (3, 5, 8, 9, 25, 27, 81)

LIOUVILLE_TRIPLES = (
    (1, 1, 1),
    (1, 1, 2),
    (1, 1, 4),
    (1, 1, 5),
    (1, 2, 2),
    (1, 2, 3),
    (1, 2, 4),
)

# A form attaining these five values attains every positive integer.
UNIVERSALITY_WITNESS = (1, 2, 4, 5, 8)


# -- exclusion rules ---------------------------------------------------------

@dataclass(frozen=True)
class Shift:
    multiplier: int
    offset: int

    def __post_init__(self):
        if self.multiplier < 1 or self.offset < 0:
            raise ValueError("shift must have multiplier >= 1 and offset >= 0")

    def apply(self, n: int) -> int:
        return self.multiplier * n + self.offset

    def __str__(self):
        return f"{self.multiplier}n+{self.offset}"


@dataclass(frozen=True)
class OddPowerClass:
    """Matches N = p^v * u (p not dividing u) with v odd and u mod p in residues."""

    prime: int
    residues: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "residues", frozenset(int(r) for r in self.residues))
        if self.prime < 2:
            raise ValueError("prime must be >= 2")
        if any(r < 1 or r >= self.prime for r in self.residues):
            raise ValueError("residues must be nonzero mod p")

    def __str__(self):
        return f"oddpow p={self.prime} r=" + ",".join(map(str, sorted(self.residues)))


@dataclass(frozen=True)
class SquareRequirement:
    """Matches perfect squares."""

    def __str__(self):
        return "square"


@dataclass(frozen=True)
class ResidueClassSet:
    """Matches N with N mod modulus in residues."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "residues", frozenset(int(r) for r in self.residues))
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if any(r < 0 or r >= self.modulus for r in self.residues):
            raise ValueError(f"residues must lie in 0..{self.modulus - 1}")

    def __str__(self):
        return f"residue m={self.modulus} r=" + ",".join(map(str, sorted(self.residues)))


RuleKind = OddPowerClass | SquareRequirement | ResidueClassSet

CLAIM_EXACT = "exact"
CLAIM_NECESSARY = "necessary"


@dataclass(frozen=True)
class ExclusionRule:
    """shift + kind + claim.

    claim "exact": n is missing iff the rule matches.
    claim "necessary": every missing n matches (matches may still be attained).
    """

    shift: Shift
    kind: RuleKind
    claim: str

    def __post_init__(self):
        if self.claim not in (CLAIM_EXACT, CLAIM_NECESSARY):
            raise ValueError(f"unknown claim {self.claim!r}")

    def __str__(self):
        return f"{self.shift};{self.kind};{self.claim}"


def rule_excluded(rule: ExclusionRule, n: int) -> bool:
    """Apply the shift, then the kind predicate."""
    value = rule.shift.apply(n)
    kind = rule.kind
    if isinstance(kind, OddPowerClass):
        if value <= 0:
            return False
        v = 0
        while value % kind.prime == 0:
            value //= kind.prime
            v += 1
        return v % 2 == 1 and value % kind.prime in kind.residues
    if isinstance(kind, SquareRequirement):
        if value < 0:
            return False
        r = math.isqrt(value)
        return r * r == value
    return value % kind.modulus in kind.residues


def excluded_mask(rule: ExclusionRule, bound: int) -> np.ndarray:
    """Vectorized rule_excluded for n = 0..bound."""
    n = np.arange(bound + 1, dtype=np.int64)
    value = rule.shift.multiplier * n + rule.shift.offset
    kind = rule.kind
    if isinstance(kind, OddPowerClass):
        p = kind.prime
        core = value.copy()
        v = np.zeros_like(core)
        active = (core > 0) & (core % p == 0)
        while active.any():
            core[active] //= p
            v[active] += 1
            active &= core % p == 0
        res = np.isin(core % p, sorted(kind.residues))
        return (value > 0) & (v % 2 == 1) & res
    if isinstance(kind, SquareRequirement):
        r = np.sqrt(value.astype(np.float64)).astype(np.int64)
        # float sqrt can land one off near perfect squares
        r = np.where((r + 1) * (r + 1) <= value, r + 1, r)
        r = np.where(r * r > value, r - 1, r)
        return r * r == value
    return np.isin(value % kind.modulus, sorted(kind.residues))


@dataclass(frozen=True)
class RuleVerification:
    claim: str
    exact_violations: tuple[int, ...]
    necessity_violations: tuple[int, ...]

    @property
    def passed(self) -> bool:
        if self.claim == CLAIM_EXACT:
            return not self.exact_violations
        return not self.necessity_violations


def verify_rule(form: TriangularForm, rule: ExclusionRule, bound: int) -> RuleVerification:
    """Replay the rule against a sieve of the form up to bound.

    necessity violations: missing n the rule fails to match.
    exact violations: those plus attained n the rule wrongly matches.
    """
    table = represented_up_to(form, bound)
    matched = excluded_mask(rule, bound)
    necessity = np.flatnonzero(~table.bits & ~matched)
    false_hits = np.flatnonzero(table.bits & matched)
    exact = np.union1d(necessity, false_hits)
    return RuleVerification(
        rule.claim,
        tuple(int(v) for v in exact),
        tuple(int(v) for v in necessity),
    )


# -- catalog -----------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    form: TriangularForm
    rule: ExclusionRule
    note: str


def parse_catalog_line(line: str) -> CatalogEntry:
    """FORM;SHIFT;KIND;PARAMS;CLAIM;NOTE with SHIFT like 8n+5."""
    parts = line.split(";", 5)
    if len(parts) != 6:
        raise ValueError(f"catalog line needs 6 fields: {line!r}")
    form_text, shift_text, kind_text, params, claim, note = (p.strip() for p in parts)
    form = TriangularForm(tuple(int(c) for c in form_text.split(",")))
    mult_text, _, off_text = shift_text.partition("n+")
    shift = Shift(int(mult_text), int(off_text))
    fields = dict(item.split("=", 1) for item in params.split() if item)
    if kind_text == "oddpow":
        kind = OddPowerClass(
            int(fields["p"]), frozenset(int(r) for r in fields["r"].split(","))
        )
    elif kind_text == "square":
        kind = SquareRequirement()
    elif kind_text == "residue":
        kind = ResidueClassSet(
            int(fields["m"]), frozenset(int(r) for r in fields["r"].split(","))
        )
    else:
        raise ValueError(f"unknown rule kind {kind_text!r}")
    return CatalogEntry(form, ExclusionRule(shift, kind, claim), note)


def parse_catalog(text: str) -> tuple[CatalogEntry, ...]:
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(parse_catalog_line(line))
    return tuple(entries)


@lru_cache(maxsize=1)
def builtin_catalog() -> tuple[CatalogEntry, ...]:
    text = resources.files("trirep").joinpath("data/exclusion_rules.txt").read_text()
    return parse_catalog(text)


def rules_for_form(form: TriangularForm) -> tuple[CatalogEntry, ...]:
    return tuple(e for e in builtin_catalog() if e.form == form)


# -- known-leaf certificates --------------------------------------------------

@dataclass(frozen=True)
class KnownLeafRule:
    rule_id: str
    citation: str


GAUSS_MULTIPLES = KnownLeafRule(
    "gauss-triple-multiples",
    "three equal coefficients c,c,c attain every multiple of c "
    "(Gauss, 1796: every n >= 0 is a sum of three triangular numbers)",
)

LIOUVILLE_TRIPLE = KnownLeafRule(
    "liouville-triple",
    "the triples (1,1,1),(1,1,2),(1,1,4),(1,1,5),(1,2,2),(1,2,3),(1,2,4) attain "
    "every positive integer (Liouville, 1862)",
)

UNIVERSALITY_CRITERION = KnownLeafRule(
    "universality-criterion",
    "a triangular-number form attaining 1, 2, 4, 5 and 8 attains every "
    "positive integer",
)

KNOWN_LEAF_RULES = (GAUSS_MULTIPLES, LIOUVILLE_TRIPLE, UNIVERSALITY_CRITERION)


def known_leaf(form: TriangularForm, target: TargetSet):
    """A citable certificate that the form attains all of the target set,
    or None.  Soundness is cross-checked in the test suite against sieves."""
    if form.is_empty:
        return None
    for c in sorted({b for b in form.coeffs if form.multiplicity(b) >= 3}):
        if subset_of_multiples(target, c):
            return GAUSS_MULTIPLES
    if is_all_positive_integers(target):
        bits = represented_up_to(form, max(UNIVERSALITY_WITNESS)).bits
        if all(bits[v] for v in UNIVERSALITY_WITNESS):
            return UNIVERSALITY_CRITERION
    if any(form.contains_pattern(t) for t in LIOUVILLE_TRIPLES):
        return LIOUVILLE_TRIPLE
    return None


# -- full-table scans ----------------------------------------------------------

@dataclass(frozen=True)
class Table3Report:
    """Missing values split into fully-missing residue classes and leftovers."""

    classes: tuple[tuple[int, int], ...]  # (modulus, residue)
    sporadics: tuple[int, ...]


def table3_scan(
    form: TriangularForm, bound: int, extra_moduli=()
) -> Table3Report:
    """Partition the non-attained n <= bound of a ternary form.

    A residue class (M, r) is reported only when every one of its members
    1..bound is missing; candidate moduli are tried in increasing order and
    classes implied by an already-reported coarser one are skipped.  Whatever
    missing values remain are the sporadics.
    """
    if form.dimension != 3:
        raise ValueError("scan expects a form with exactly 3 coefficients")
    if bound < 10_000:
        raise ValueError("scan bound must be at least 10000")
    table = represented_up_to(form, bound)
    classes = []
    covered = np.zeros(bound + 1, dtype=bool)
    for modulus in sorted(set(DEFAULT_CLASS_MODULI) | set(extra_moduli)):
        for residue in range(modulus):
            if any(modulus % m == 0 and residue % m == r for m, r in classes):
                continue
            members = np.arange(residue if residue else modulus, bound + 1, modulus)
            if members.size and not table.bits[members].any():
                classes.append((modulus, residue))
                covered[members] = True
    sporadics = [int(n) for n in table.missing() if not covered[n]]
    return Table3Report(tuple(classes), tuple(sporadics))
