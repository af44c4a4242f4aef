"""Command-line surface and on-disk sieve cache.

Reports are deterministic line-oriented text: one KEY<TAB>VALUE record per
line, UTF-8, LF terminators.  Wall-clock timings go to stderr so the report
body stays byte-stable across runs.

Exit status: 0 success, 1 verification mismatch, 2 usage or parse error,
3 resource or bound error.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile
import time

import numpy as np

from .errors import CacheFormatError, SetSpecError, SieveMemoryError, TruantBoundError
from .escalation import (
    EscalationTree,
    KnownLeaf,
    ProvisionalLeaf,
    TreeConfig,
    Truant,
    build_tree,
    smallest_missing,
    stuck_report,
    witness_form,
)
from .forms import RepTable, TriangularForm, count_reps, find_representation
from .quadratic import TABLE1_ROWS, table1_check
from .rules import rules_for_form, table3_scan, verify_rule
from .targets import ExplicitList, FormImage, ResidueUnion, TargetSet

CACHE_MAGIC = b"TRIREP1"
_WORD = 1 << 64

# Largest bounds, quoted from the source analysis, to which the eight
# depth-three progressions were checked under GRH.  Reference metadata only:
# this tool re-verifies nothing beyond its configured leaf bound.
GRH_CHECKED_BOUNDS = (
    ("1,2,6", "1.23e9", "1.23e9"),
    ("1,2,8", "6.0e8", "6.0e8"),
    ("1,2,9", "1.68e6", "6.72e6"),
    ("1,2,11", "8.0e4", "1.6e5"),
    ("1,4,5", "2.6e5", "2.6e5"),
    ("1,4,8", "5.7e8", "5.7e8"),
    ("1,4,9", "1.1e12", "1.1e12"),
    ("1,5,6", "4.55e9", "1.82e10"),
)


# -- parsing -------------------------------------------------------------------

def _parse_int(text: str, position: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise SetSpecError(f"expected an integer, got {text!r}", position) from None


def _parse_int_list(text: str, position: int) -> list[int]:
    if not text:
        raise SetSpecError("expected a comma-separated integer list", position)
    values = []
    offset = position
    for item in text.split(","):
        values.append(_parse_int(item, offset))
        offset += len(item) + 1
    return values


def parse_form(text: str) -> TriangularForm:
    """Comma-separated coefficients -> TriangularForm, with positioned errors."""
    values = _parse_int_list(text.strip(), 0)
    try:
        return TriangularForm(tuple(values))
    except ValueError as exc:
        raise SetSpecError(str(exc), 0) from None


def parse_set(text: str) -> TargetSet:
    """Mini-language: nat | odd | mod:M:r1,r2 | list:a,b | form:b1,b2
    with optional +include:... / +exclude:... overlays."""
    segments = text.split("+")
    base = segments[0]
    if base == "nat":
        kind = ResidueUnion(1, frozenset({0}))
    elif base == "odd":
        kind = ResidueUnion(2, frozenset({1}))
    elif base.startswith("mod:"):
        body = base[4:]
        mod_text, sep, res_text = body.partition(":")
        if not sep:
            raise SetSpecError("mod needs a modulus and residues", 4 + len(body))
        modulus = _parse_int(mod_text, 4)
        residues = _parse_int_list(res_text, 5 + len(mod_text))
        try:
            kind = ResidueUnion(modulus, frozenset(residues))
        except ValueError as exc:
            raise SetSpecError(str(exc), 4) from None
    elif base.startswith("list:"):
        values = _parse_int_list(base[5:], 5)
        try:
            kind = ExplicitList(tuple(values))
        except ValueError as exc:
            raise SetSpecError(str(exc), 5) from None
    elif base.startswith("form:"):
        values = _parse_int_list(base[5:], 5)
        try:
            kind = FormImage(TriangularForm(tuple(values)))
        except ValueError as exc:
            raise SetSpecError(str(exc), 5) from None
    else:
        raise SetSpecError(f"unknown target set {base!r}", 0)

    include: list[int] = []
    exclude: list[int] = []
    offset = len(base) + 1
    for segment in segments[1:]:
        if segment.startswith("include:"):
            include += _parse_int_list(segment[8:], offset + 8)
        elif segment.startswith("exclude:"):
            exclude += _parse_int_list(segment[8:], offset + 8)
        else:
            raise SetSpecError(f"unknown overlay {segment!r}", offset)
        offset += len(segment) + 1
    try:
        return TargetSet(kind, tuple(include), tuple(exclude))
    except ValueError as exc:
        raise SetSpecError(str(exc), 0) from None


# -- sieve cache ---------------------------------------------------------------

def _pack_words(table: RepTable) -> bytes:
    packed = np.packbits(table.bits, bitorder="little")
    n_words = (table.bound + 64) // 64
    padded = np.zeros(n_words * 8, dtype=np.uint8)
    padded[: packed.size] = packed
    return padded.tobytes()


def _checksum(words: bytes) -> int:
    arr = np.frombuffer(words, dtype="<u8")
    return int(np.sum(arr, dtype=np.uint64))


def cache_store(path, table: RepTable) -> None:
    """Write a sieve bitmap: magic, coefficient list, bound, little-endian
    64-bit words (bit n at word n//64, bit n%64), then a checksum word
    (sum of the data words mod 2^64).  The write is atomic."""
    words = _pack_words(table)
    blob = bytearray(CACHE_MAGIC)
    blob += len(table.form.coeffs).to_bytes(8, "little")
    for c in table.form.coeffs:
        blob += c.to_bytes(8, "little")
    blob += table.bound.to_bytes(8, "little")
    blob += words
    blob += (_checksum(words) % _WORD).to_bytes(8, "little")
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".trirep-cache-")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(blob)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def cache_load(path) -> RepTable:
    """Read a cached sieve, verifying magic, form, bound and checksum.

    A cache stored for bound N answers any query to N' <= N via
    RepTable.prefix; corruption raises, never returns partial data.
    """
    with open(path, "rb") as handle:
        blob = handle.read()
    if blob[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic")
    view = memoryview(blob)[len(CACHE_MAGIC) :]

    def take(n):
        nonlocal view
        if len(view) < n:
            raise CacheFormatError(f"{path}: truncated")
        chunk, view = view[:n], view[n:]
        return chunk

    k = int.from_bytes(take(8), "little")
    if k > 10**7:
        raise CacheFormatError(f"{path}: implausible coefficient count {k}")
    coeffs = tuple(int.from_bytes(take(8), "little") for _ in range(k))
    bound = int.from_bytes(take(8), "little")
    n_words = (bound + 64) // 64
    words = bytes(take(n_words * 8))
    stored_sum = int.from_bytes(take(8), "little")
    if len(view):
        raise CacheFormatError(f"{path}: trailing data")
    if _checksum(words) % _WORD != stored_sum:
        raise CacheFormatError(f"{path}: checksum mismatch")
    bits = np.unpackbits(
        np.frombuffer(words, dtype=np.uint8), count=bound + 1, bitorder="little"
    ).astype(bool)
    tail = np.unpackbits(np.frombuffer(words, dtype=np.uint8), bitorder="little")[bound + 1 :]
    if tail.any():
        raise CacheFormatError(f"{path}: nonzero padding bits")
    try:
        form = TriangularForm(coeffs)
        return RepTable(form, bound, bits)
    except ValueError as exc:
        raise CacheFormatError(f"{path}: {exc}") from None


# -- reports -------------------------------------------------------------------

def _emit(out, key, *fields):
    out.write(key + "".join("\t" + str(f) for f in fields) + "\n")


def _int_list(values) -> str:
    values = list(values)
    return ",".join(str(int(v)) for v in values) if values else "none"


def _status_fields(status):
    if isinstance(status, Truant):
        return "truant", status.value
    if isinstance(status, ProvisionalLeaf):
        return "leaf-provisional", status.verified_bound
    return "leaf-known", status.rule_id


def tree_report(tree: EscalationTree, set_text: str) -> str:
    out = io.StringIO()
    _emit(out, "SET", set_text)
    _emit(out, "TRUANT_BOUND", tree.config.truant_bound)
    _emit(out, "LEAF_BOUND", tree.config.leaf_bound)
    for node in tree.nodes():
        kind, detail = _status_fields(node.status)
        _emit(out, "NODE", node.form, kind, detail)
    for parent, c in stuck_report(tree):
        _emit(out, "STUCK", parent.form, c)
    _emit(out, "S0", _int_list(tree.s0))
    return out.getvalue()


def _atomic_write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".trirep-report-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


# -- subcommands ---------------------------------------------------------------

def _cmd_truant(args, out):
    form = parse_form(args.form)
    target = parse_set(args.set)
    t = smallest_missing(form, target, args.bound)
    _emit(out, "FORM", form)
    _emit(out, "SET", args.set)
    _emit(out, "BOUND", args.bound)
    _emit(out, "TRUANT", "none" if t is None else t)
    return 0


def _cmd_tree(args, out):
    if args.show_grh_bounds:
        for form_text, quad_bound, odd_bound in GRH_CHECKED_BOUNDS:
            _emit(out, "GRH_BOUND", form_text, quad_bound, odd_bound)
        _emit(
            out,
            "NOTE",
            "quoted GRH-conditional search bounds for reference only; "
            "this run certifies leaves solely up to --leaf-bound",
        )
        return 0
    if args.set is None:
        print("error: --set is required unless --show-grh-bounds is given", file=sys.stderr)
        return 2
    target = parse_set(args.set)
    config = TreeConfig(args.truant_bound, args.leaf_bound, not args.no_known_rules)
    start = time.perf_counter()
    tree = build_tree(target, config)
    report = tree_report(tree, args.set)
    out.write(report)
    if args.out:
        _atomic_write_text(args.out, report)
    print(f"tree built in {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return 0


def _cmd_scan(args, out):
    form = parse_form(args.form)
    report = table3_scan(form, args.bound)
    _emit(out, "FORM", form)
    _emit(out, "BOUND", args.bound)
    for modulus, residue in report.classes:
        _emit(out, "CLASS", f"{residue} mod {modulus}")
    _emit(out, "SPORADICS", _int_list(report.sporadics))
    return 0


def _cmd_equiv(args, out):
    if not 1 <= args.row <= len(TABLE1_ROWS):
        print(f"error: --row must be 1..{len(TABLE1_ROWS)}", file=sys.stderr)
        return 2
    row = TABLE1_ROWS[args.row - 1]
    violations = table1_check(row, args.bound)
    _emit(out, "ROW", args.row)
    _emit(out, "TRIANGULAR", row.triangular)
    _emit(out, "QUADRATIC", ",".join(str(c) for c in row.quadratic.coefficients()))
    _emit(out, "SHIFT", f"{row.multiplier}n+{row.offset}")
    _emit(out, "BOUND", args.bound)
    _emit(out, "VIOLATIONS", _int_list(violations))
    return 1 if violations else 0


def _cmd_verify_rule(args, out):
    form = parse_form(args.form)
    entries = rules_for_form(form)
    if not entries:
        print(f"error: no cataloged rule for form [{form}]", file=sys.stderr)
        return 2
    failed = False
    for entry in entries:
        outcome = verify_rule(form, entry.rule, args.bound)
        _emit(out, "FORM", form)
        _emit(out, "RULE", entry.rule)
        _emit(out, "NOTE", entry.note)
        _emit(out, "BOUND", args.bound)
        _emit(out, "EXACT_VIOLATIONS", _int_list(outcome.exact_violations))
        _emit(out, "NECESSITY_VIOLATIONS", _int_list(outcome.necessity_violations))
        _emit(out, "RESULT", "pass" if outcome.passed else "fail")
        failed |= not outcome.passed
    return 1 if failed else 0


def _cmd_witness(args, out):
    form = parse_form(args.form)
    target = parse_set(args.set)
    witness, violations = witness_form(form, args.truant, target, args.bound)
    _emit(out, "FORM", form)
    _emit(out, "TRUANT", args.truant)
    _emit(out, "SET", args.set)
    _emit(out, "BOUND", args.bound)
    _emit(out, "WITNESS", witness)
    _emit(out, "VIOLATIONS", _int_list(violations))
    return 1 if violations else 0


def _cmd_represent(args, out):
    form = parse_form(args.form)
    count = count_reps(form, args.n)
    tup = find_representation(form, args.n)
    _emit(out, "FORM", form)
    _emit(out, "N", args.n)
    _emit(out, "COUNT", count)
    _emit(out, "TUPLE", "none" if tup is None else ",".join(str(x) for x in tup))
    return 0


# -- driver --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trirep",
        description="decide which integers sums of triangular numbers attain, "
        "and compute minimal witness sets by escalation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("truant", help="smallest target member a form misses")
    p.add_argument("--form", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--bound", type=int, default=100_000)
    p.set_defaults(func=_cmd_truant)

    p = sub.add_parser("tree", help="build the escalation tree and report S0")
    p.add_argument("--set")
    p.add_argument("--truant-bound", type=int, default=100_000)
    p.add_argument("--leaf-bound", type=int, default=200_000)
    p.add_argument("--out", help="also write the report to this path")
    p.add_argument("--no-known-rules", action="store_true")
    p.add_argument("--show-grh-bounds", action="store_true")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("scan", help="classes/sporadics partition of missing values")
    p.add_argument("--form", required=True)
    p.add_argument("--bound", type=int, default=1_000_000)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("equiv", help="check one built-in triangular/quadratic row")
    p.add_argument("--row", type=int, required=True)
    p.add_argument("--bound", type=int, default=5000)
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("verify-rule", help="replay cataloged exclusion rules")
    p.add_argument("--form", required=True)
    p.add_argument("--bound", type=int, default=100_000)
    p.set_defaults(func=_cmd_verify_rule)

    p = sub.add_parser("witness", help="minimality witness for a truant")
    p.add_argument("--form", required=True)
    p.add_argument("--truant", type=int, required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--bound", type=int, default=5000)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("represent", help="count representations of one integer")
    p.add_argument("--form", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_represent)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except SetSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TruantBoundError, SieveMemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CacheFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
