import os

import pytest

from conftest import B4, matrices, paley
from skewhad.cli import run_command
from skewhad.io import ParseError, format_matrices, format_matrix, parse_matrices, parse_matrix, read_config
from skewhad.matrix import validate

B4_TEXT = "order 4\n++++\n-++-\n--++\n-+-+\n"


def test_parse_B4():
    m = parse_matrix(B4_TEXT.encode())
    assert m == B4 and validate(m)["skew"]


@pytest.mark.parametrize("text,line,col", [
    ("order 4\n++++\n-+x-\n--++\n-+-+\n", 3, 3),
    ("order 4\n++++\n-++\n--++\n-+-+\n", 3, 4),
    ("order 4\n++++\n-++-\n--++\n", 5, None),
    ("++++\n", 1, None),
    ("order x\n", 1, None),
    ("order 2\n++\n-+\n+-\n", 4, None),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_matrices(text)
    assert err.value.line == line
    assert err.value.col == col


def test_round_trip():
    mats = list(matrices(20)) + [paley(11)]
    text = format_matrices(mats, ["first", None, "third"])
    assert parse_matrices(text) == mats
    assert format_matrices(parse_matrices(text), ["first", None, "third"]) == text


def test_comments_and_batches():
    text = "# hello\n" + B4_TEXT + "\n\n# second\n" + format_matrix(paley(7))
    assert len(parse_matrices(text)) == 2


def test_read_config(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("# comment\norder = 12\ndedup-depths=6,8\n")
    assert read_config(p) == {"order": "12", "dedup_depths": "6,8"}
    p.write_text("order 12\n")
    with pytest.raises(ParseError):
        read_config(p)


# ------------------------------------------------------------------- cli

def test_classify_order24(capsys):
    assert run_command(["classify", "--order", "24"]) == 0
    out = capsys.readouterr().out
    assert "16 classes" in out.splitlines()[-1]


def test_bound_k(capsys):
    assert run_command(["bound-k", "--order", "36"]) == 0
    assert capsys.readouterr().out.strip() == "9"


def test_usage_errors(capsys):
    assert run_command(["nonsense"]) == 1
    assert run_command(["classify"]) == 1
    assert run_command(["classify", "--order", "x"]) == 1
    assert run_command(["search", "--order", "24", "--skew-type", "2"]) == 1


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("order 4\n++x+\n")
    assert run_command(["analyze", "--in", str(bad)]) == 1
    assert "line 2, column 3" in capsys.readouterr().err
    assert run_command(["canon", "--in", str(tmp_path / "missing.txt")]) == 1


def test_verification_failure(tmp_path):
    f = tmp_path / "j.txt"
    f.write_text("order 4\n++++\n++++\n++++\n++++\n")
    assert run_command(["analyze", "--in", str(f)]) == 2


def test_budget_exit(tmp_path, capsys):
    assert run_command(["classify", "--order", "24", "--node-budget", "5"]) == 3
    assert run_command(["search", "--order", "36", "--skew-type", "2,1", "--limit", "1",
                        "--node-budget", "50", "--out", str(tmp_path / "o.txt")]) == 3


def test_classify_out_and_reread(tmp_path, capsys):
    out = tmp_path / "o"
    assert run_command(["classify", "--order", "20", "--out", str(out)]) == 0
    lines = (out / "census.tsv").read_text().splitlines()
    assert lines[0].split("\t") == ["id", "order", "skew_type", "profile_hash", "canonical"]
    assert len(lines) == 3
    mats = parse_matrices((out / "matrices.txt").read_text())
    assert len(mats) == 2 and all(validate(m)["skew"] for m in mats)
    capsys.readouterr()
    assert run_command(["analyze", "--in", str(out / "matrices.txt")]) == 0
    text = capsys.readouterr().out
    assert "skew type (1, 1)" in text and "kappa identity holds" in text
    assert run_command(["canon", "--in", str(out / "matrices.txt")]) == 0
    assert run_command(["scheme", "--in", str(out / "matrices.txt"), "--all-rows"]) == 0
    # order-20 codes have dimension 20, over the enumeration budget
    assert run_command(["code", "--in", str(out / "matrices.txt")]) == 3
    assert "not enumerated" in capsys.readouterr().out


def test_workers_env_and_config(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("order=20\nout=%s\n" % (tmp_path / "a"))
    assert run_command(["--config", str(cfg), "classify"]) == 0
    monkeypatch.setenv("SKEWHAD_WORKERS", "3")
    assert run_command(["classify", "--config", str(cfg), "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "census.tsv").read_bytes()
    b = (tmp_path / "b" / "census.tsv").read_bytes()
    assert a == b
    cfg.write_text("bogus-flag=1\n")
    assert run_command(["--config", str(cfg), "bound-k", "--order", "4"]) == 1


def test_search_resume(tmp_path, capsys):
    cp = str(tmp_path / "cp")
    assert run_command(["search", "--order", "24", "--skew-type", "2,1", "--resume", cp, "--stop-after", "3"]) == 3
    assert run_command(["search", "--order", "24", "--skew-type", "2,1", "--resume", cp,
                        "--out", str(tmp_path / "m.txt")]) == 0
    assert len(parse_matrices((tmp_path / "m.txt").read_text())) == 1
    # a changed order must not reuse the checkpoint
    assert run_command(["search", "--order", "20", "--skew-type", "2,1", "--resume", cp]) == 1


def test_orderly_cli(capsys):
    assert run_command(["orderly", "--order", "12", "--depth", "5"]) == 0
    assert "k=5: 1" in capsys.readouterr().out


def test_verify_small(capsys):
    assert run_command(["verify", "--suite", "all", "--orders", "4..20"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 5
