from __future__ import annotations

import filecmp

import pytest

from dualarc.cli import main
from dualarc.veronese import read_family, write_family


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_and_verify(tmp_path, capsys):
    f = tmp_path / "ex1.txt"
    code, out, _ = run(capsys, "construct", "--q", 3, "--n", 2, "--d", 1, "--out", f)
    assert code == 0 and "params=5 2 0 count=13" in out
    assert f.read_text().splitlines()[0] == "q=3 n=2 d=1 count=13 kind=dual params=5,2,0"
    code, out, _ = run(capsys, "verify", f)
    assert code == 0 and "regular=true" in out
    code, out, _ = run(capsys, "verify", f, "--text")
    assert code == 0 and "regular: yes" in out


def test_construct_example2_and_degenerate(tmp_path, capsys):
    code, out, _ = run(capsys, "construct", "--q", 2, "--n", 2, "--d", 2, "--out", tmp_path / "e2.txt")
    assert code == 0 and "params=9 5 2 0 count=7" in out
    code, out, err = run(capsys, "construct", "--q", 2, "--n", 0, "--d", 1, "--out", tmp_path / "pt.txt")
    assert code == 0 and "count=1" in out and "warning" in err


def test_usage_errors(tmp_path, capsys):
    code, _, err = run(capsys, "construct", "--q", 6, "--n", 2, "--d", 1)
    assert code == 2 and "prime power" in err
    code, _, _ = run(capsys, "verify", tmp_path / "missing.txt")
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["deal", "--arc", "x"])
    assert info.value.code == 2


def test_verify_failure_exit(tmp_path, capsys, ex1):
    bad = ex1.subset([0, 1, 2]).extended([ex1[0]])
    write_family(bad, tmp_path / "bad.txt")
    code, out, _ = run(capsys, "verify", tmp_path / "bad.txt")
    assert code == 1 and "axioms_hold=false" in out


def test_dualize_round_trip(tmp_path, capsys):
    f = tmp_path / "e2.txt"
    run(capsys, "construct", "--q", 2, "--n", 2, "--d", 2, "--out", f)
    run(capsys, "dualize", f, "--out", tmp_path / "a.txt")
    run(capsys, "dualize", tmp_path / "a.txt", "--out", tmp_path / "b.txt")
    assert read_family(tmp_path / "a.txt").params == (9, 3, 6, 8)
    assert filecmp.cmp(f, tmp_path / "b.txt", shallow=False)


def test_extend_round_trip_bytes(tmp_path, capsys):
    f = tmp_path / "q9.txt"
    run(capsys, "construct", "--q", 9, "--n", 2, "--d", 1, "--out", f)
    write_family(read_family(f).without([44]), tmp_path / "m.txt")
    code, _, _ = run(capsys, "extend", tmp_path / "m.txt", "--delta", 1, "--out", tmp_path / "r.txt")
    assert code == 0
    assert filecmp.cmp(f, tmp_path / "r.txt", shallow=False)


def test_nucleus_exit_codes(tmp_path, capsys):
    run(capsys, "construct", "--q", 3, "--n", 2, "--d", 1, "--out", tmp_path / "q3.txt")
    code, out, _ = run(capsys, "nucleus", tmp_path / "q3.txt")
    assert code == 1 and "not extendable" in out
    run(capsys, "construct", "--q", 4, "--n", 2, "--d", 1, "--out", tmp_path / "q4.txt")
    code, out, _ = run(capsys, "nucleus", tmp_path / "q4.txt", "--out", tmp_path / "h.txt")
    assert code == 0 and "size=22 dual_hyperoval=true" in out
    assert len(read_family(tmp_path / "h.txt")) == 22


def test_deal_reconstruct_flow(tmp_path, capsys):
    arc = tmp_path / "e2.txt"
    run(capsys, "construct", "--q", 2, "--n", 2, "--d", 2, "--arc", "--out", arc)
    d = tmp_path / "bundle"
    code, _, _ = run(capsys, "deal", "--arc", arc, "--scheme", 1, "--seed", 3, "--out-dir", d, "--emit-secret")
    assert code == 0 and (d / "secret.txt").exists() and (d / "share_7.txt").exists()
    shares = [d / f"share_{i}.txt" for i in (1, 3, 5, 6)]
    code, out, _ = run(capsys, "reconstruct", *shares)
    assert code == 0
    assert out == (d / "secret.txt").read_text()
    code, _, err = run(capsys, "reconstruct", *shares[:3])
    assert code == 1 and "span dimension 8" in err
    # without --emit-secret nothing secret is written
    d2 = tmp_path / "b2"
    run(capsys, "deal", "--arc", arc, "--scheme", 2, "--seed", 3, "--out-dir", d2)
    assert not (d2 / "secret.txt").exists()
    code, out, _ = run(capsys, "reconstruct", "--public", d2 / "public.txt", *[d2 / f"share_{i}.txt" for i in (2, 3, 4, 5)])
    assert code == 0 and out.splitlines()[1].startswith("q=2^1 N=10 r=4")


def test_deal_is_byte_reproducible(tmp_path, capsys):
    arc = tmp_path / "e2.txt"
    run(capsys, "construct", "--q", 2, "--n", 2, "--d", 2, "--out", arc)
    for name in ("x", "y"):
        run(capsys, "deal", "--arc", arc, "--scheme", 2, "--seed", 9, "--out-dir", tmp_path / name)
    for f in (tmp_path / "x").iterdir():
        assert filecmp.cmp(f, tmp_path / "y" / f.name, shallow=False)


def test_simulate_and_cubic_demo(tmp_path, capsys):
    arc = tmp_path / "e2.txt"
    run(capsys, "construct", "--q", 2, "--n", 2, "--d", 2, "--out", arc)
    code, out, _ = run(capsys, "simulate", "--arc", arc, "--seed", 1, "--trials", 4000)
    assert code == 0
    assert "1/2047" in out and "1/127" in out and "1/15" in out and "1/3" in out
    code, out, _ = run(capsys, "cubic-demo", "--seed", 2)
    assert code == 0 and "twisted_cubic=true" in out and "p0=1/15, p1=1/15, p2=1/7, p3=1/3" in out
