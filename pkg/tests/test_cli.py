import io
import random
from contextlib import redirect_stdout

import pytest

from trirep.cli import (
    cache_load,
    cache_store,
    main,
    parse_form,
    parse_set,
)
from trirep.errors import CacheFormatError, SetSpecError
from trirep.forms import TriangularForm, represented_up_to
from trirep.targets import ExplicitList, FormImage, ResidueUnion


def run_cli(*args):
    buf = io.StringIO()
    with redirect_stdout(buf):
        try:
            code = main(list(args))
        except SystemExit as exc:  # argparse usage failures
            code = exc.code
    return code, buf.getvalue()


# -- mini-language --------------------------------------------------------------

def test_parse_set_examples():
    odd = parse_set("odd")
    assert odd.kind == ResidueUnion(2, frozenset({1}))
    curious = parse_set("form:2,3,4")
    assert curious.kind == FormImage(TriangularForm((2, 3, 4)))
    mods = parse_set("mod:9:2,8")
    assert mods.kind == ResidueUnion(9, frozenset({2, 8}))
    nat = parse_set("nat")
    assert nat.kind == ResidueUnion(1, frozenset({0}))
    listed = parse_set("list:5,2,2")
    assert listed.kind == ExplicitList((2, 5))


def test_parse_set_overlays():
    s = parse_set("odd+include:4+exclude:9")
    assert s.include == (4,) and s.exclude == (9,)
    assert s.contains(4) and not s.contains(9)


def test_parse_set_errors_carry_positions():
    with pytest.raises(SetSpecError) as err:
        parse_set("form:")
    assert err.value.position == 5
    with pytest.raises(SetSpecError) as err:
        parse_set("list:1,x")
    assert err.value.position == 7
    with pytest.raises(SetSpecError):
        parse_set("everything")
    with pytest.raises(SetSpecError):
        parse_set("mod:0:1")


def test_parse_form():
    assert parse_form("1,1,3") == TriangularForm((1, 1, 3))
    with pytest.raises(SetSpecError):
        parse_form("3,1")
    with pytest.raises(SetSpecError):
        parse_form("")


# -- subcommands -----------------------------------------------------------------

def test_truant_command():
    code, out = run_cli("truant", "--form", "1,1,3", "--set", "odd", "--bound", "1000")
    assert code == 0
    assert "TRUANT\t17\n" in out
    code, out = run_cli("truant", "--form", "1,1,1", "--set", "odd", "--bound", "1000")
    assert code == 0 and "TRUANT\tnone\n" in out


def test_tree_command_and_determinism(tmp_path):
    args = ("tree", "--set", "nat", "--truant-bound", "200", "--leaf-bound", "400")
    code, first = run_cli(*args)
    assert code == 0
    assert first.endswith("S0\t1,2,4,5,8\n")
    assert "NODE\t\ttruant\t1\n" in first  # the empty root form
    assert "NODE\t1,1,3\ttruant\t8\n" in first
    code, second = run_cli(*args)
    assert second == first

    out_path = tmp_path / "report.txt"
    code, third = run_cli(*args, "--out", str(out_path))
    assert code == 0
    assert out_path.read_text() == third == first


def test_tree_show_grh_bounds():
    code, out = run_cli("tree", "--show-grh-bounds")
    assert code == 0
    assert "GRH_BOUND\t1,4,9\t1.1e12\t1.1e12\n" in out
    assert "NOTE\t" in out


def test_tree_bound_error_is_exit_3():
    code, _ = run_cli(
        "tree", "--set", "list:50000", "--truant-bound", "1000", "--leaf-bound", "100000"
    )
    assert code == 3


def test_scan_command():
    code, out = run_cli("scan", "--form", "1,2,8", "--bound", "10000")
    assert code == 0
    assert "SPORADICS\t4,19,112\n" in out
    code, out = run_cli("scan", "--form", "1,4,9", "--bound", "10000")
    assert code == 0
    assert "CLASS\t2 mod 9\n" in out and "CLASS\t8 mod 9\n" in out
    assert "SPORADICS\tnone\n" in out


def test_equiv_command():
    code, out = run_cli("equiv", "--row", "5", "--bound", "500")
    assert code == 0
    assert "VIOLATIONS\tnone\n" in out
    code, _ = run_cli("equiv", "--row", "99", "--bound", "10")
    assert code == 2


def test_verify_rule_command():
    code, out = run_cli("verify-rule", "--form", "2,2,3", "--bound", "10000")
    assert code == 0
    assert "RESULT\tpass\n" in out
    code, _ = run_cli("verify-rule", "--form", "9,9", "--bound", "100")
    assert code == 2


def test_witness_command():
    code, out = run_cli(
        "witness", "--form", "1,2", "--truant", "4", "--set", "nat", "--bound", "1000"
    )
    assert code == 0
    assert "VIOLATIONS\tnone\n" in out
    assert "WITNESS\t1,2,5,5,5," in out
    # 3 is not the truant of [1]; the contract check reports it
    code, out = run_cli(
        "witness", "--form", "1", "--truant", "3", "--set", "odd", "--bound", "500"
    )
    assert code == 1
    assert "VIOLATIONS\t" in out


def test_represent_command():
    code, out = run_cli("represent", "--form", "1,1,1", "--n", "6")
    assert code == 0
    assert "COUNT\t6\n" in out
    assert "TUPLE\t0,0,3\n" in out
    code, out = run_cli("represent", "--form", "1,1,3", "--n", "8")
    assert code == 0
    assert "COUNT\t0\n" in out and "TUPLE\tnone\n" in out


def test_usage_errors_are_exit_2():
    code, _ = run_cli("truant", "--form", "3,1", "--set", "odd", "--bound", "10")
    assert code == 2
    code, _ = run_cli("truant", "--form", "1", "--set", "wat", "--bound", "10")
    assert code == 2
    code, _ = run_cli("no-such-command")
    assert code == 2


# -- cache -----------------------------------------------------------------------

def test_cache_roundtrip(tmp_path):
    table = represented_up_to(TriangularForm((1, 1, 3)), 10**4)
    path = tmp_path / "sieve.bin"
    cache_store(path, table)
    loaded = cache_load(path)
    assert loaded.form == table.form
    assert loaded.bound == table.bound
    assert (loaded.bits == table.bits).all()


def test_cache_detects_corruption(tmp_path):
    table = represented_up_to(TriangularForm((1, 2)), 3000)
    path = tmp_path / "sieve.bin"
    cache_store(path, table)
    blob = bytearray(path.read_bytes())
    blob[60] ^= 0x10  # flip one stored bit
    path.write_bytes(bytes(blob))
    with pytest.raises(CacheFormatError):
        cache_load(path)


def test_cache_detects_bad_magic_and_truncation(tmp_path):
    table = represented_up_to(TriangularForm((2,)), 100)
    path = tmp_path / "sieve.bin"
    cache_store(path, table)
    blob = path.read_bytes()
    path.write_bytes(b"X" + blob[1:])
    with pytest.raises(CacheFormatError):
        cache_load(path)
    path.write_bytes(blob[:-4])
    with pytest.raises(CacheFormatError):
        cache_load(path)
    path.write_bytes(blob + b"\0")
    with pytest.raises(CacheFormatError):
        cache_load(path)


def test_cache_prefix_serves_smaller_queries(tmp_path):
    rng = random.Random(777)
    form = TriangularForm((1, 1, 3))
    table = represented_up_to(form, 10**4)
    path = tmp_path / "sieve.bin"
    cache_store(path, table)
    served = cache_load(path).prefix(10**3)
    fresh = represented_up_to(form, 10**3)
    assert (served.bits == fresh.bits).all()
    # random probes against fresh computation
    cached = cache_load(path)
    for _ in range(100):
        k = rng.randint(1, 3)
        probe_form = TriangularForm(tuple(sorted(rng.randint(1, 9) for _ in range(k))))
        probe_table = represented_up_to(probe_form, 500)
        probe_path = tmp_path / "probe.bin"
        cache_store(probe_path, probe_table)
        n = rng.randint(0, 500)
        assert bool(cache_load(probe_path).bits[n]) == bool(
            represented_up_to(probe_form, 500).bits[n]
        )
    assert (cached.bits == table.bits).all()
