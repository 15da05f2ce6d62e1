import subprocess
import sys

import pytest

from colorminer.cli import main
from conftest import DATA

RUNNING = str(DATA / "running_example.txt")


def _mine(capsys, *extra):
    code = main(["mine", "--input", RUNNING, "--color", "y", *extra])
    return code, capsys.readouterr().out


def test_mine_full_contains_ca(capsys):
    code, out = _mine(capsys, "--engine", "base")
    assert code == 0
    assert "3\tca" in out.splitlines()


def test_mine_real_block(capsys):
    code, out = _mine(capsys, "--engine", "fast", "--filter", "real")
    assert code == 0
    assert [l for l in out.splitlines() if l.startswith("3\t")] == ["3\tca"]


@pytest.mark.parametrize("flt, engines", [("full", ["base", "skip"]), ("real", ["base", "skip", "fast"])])
def test_mine_engines_byte_identical(capsys, flt, engines):
    outs = {_mine(capsys, "--engine", e, "--filter", flt)[1] for e in engines}
    assert len(outs) == 1


def test_mine_sorted_by_delay_then_tokens(capsys):
    _, out = _mine(capsys)
    rows = [l.split("\t") for l in out.splitlines()]
    assert rows == sorted(rows, key=lambda r: (-int(r[0]), list(r[1])))
    assert rows[:3] == [["11", "a"], ["11", "b"], ["11", "c"]]


def test_mine_counts_and_max_delay(capsys, tmp_path):
    target = tmp_path / "out.tsv"
    code = main(["mine", "--input", RUNNING, "--color", "y", "--counts", "--max-delay", "3", "--output", str(target)])
    assert code == 0
    lines = target.read_text().splitlines()
    assert "3\tca\t3" in lines
    assert all(int(l.split("\t")[0]) <= 3 for l in lines)


def test_mine_debug_trace(capsys):
    code = main(["mine", "--input", RUNNING, "--color", "y", "--debug-trace"])
    err = capsys.readouterr().err
    assert code == 0
    assert "10\t3\tyes\t-1" in err.splitlines()


def test_mine_tokenized(capsys, tmp_path):
    src = tmp_path / "tok.txt"
    src.write_text("ab cd ab cd\nhi lo hi lo\n")
    code = main(["mine", "--input", str(src), "--color", "lo", "--tokens", "--engine", "base"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert "0\tcd" in lines and "1\tab" in lines
    assert "0\tab" not in lines


def _exit_code(argv):
    # argparse rejections surface as SystemExit, everything else as a return value
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


@pytest.mark.parametrize(
    "argv, code",
    [
        (["mine", "--input", RUNNING, "--color", "q"], 3),
        (["mine", "--input", RUNNING, "--color", "y", "--engine", "fast"], 3),
        (["mine", "--input", RUNNING, "--color", "y", "--engine", "turbo"], 3),
        (["mine", "--input", "/nonexistent/file", "--color", "y"], 2),
        (["gen", "--n", "0"], 3),
        (["frobnicate"], 3),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert _exit_code(argv) == code


def test_malformed_input_names_line(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("abc\nxy\n")
    assert main(["mine", "--input", str(bad), "--color", "x"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_gen_prefix_and_determinism(tmp_path):
    small, big, again = tmp_path / "s.txt", tmp_path / "b.txt", tmp_path / "a.txt"
    assert main(["gen", "--n", "1000", "--sigma", "2", "--gamma", "2", "--seed", "0", "--output", str(small)]) == 0
    assert main(["gen", "--n", "10000", "--sigma", "2", "--gamma", "2", "--seed", "0", "--output", str(big)]) == 0
    assert main(["gen", "--n", "1000", "--sigma", "2", "--gamma", "2", "--seed", "0", "--output", str(again)]) == 0
    s, b = small.read_text().splitlines(), big.read_text().splitlines()
    assert all(b[i].startswith(s[i]) for i in range(2))
    assert small.read_bytes() == again.read_bytes()


def test_gen_large_alphabet_is_tokenized(capsys):
    assert main(["gen", "--n", "30", "--sigma", "27", "--gamma", "2", "--seed", "1"]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert len(first.split(" ")) == 30


def test_gen_unwritable(capsys):
    assert main(["gen", "--n", "5", "--output", "/nonexistent/dir/out.txt"]) == 2


def test_convert_running_trace(tmp_path, capsys):
    out, mapping = tmp_path / "s.txt", tmp_path / "m.tsv"
    args = ["convert", "--input", str(DATA / "running_trace.csv"), "--output", str(out), "--mapping", str(mapping)]
    assert main(args) == 0
    assert out.read_text() == "acacacbacab\nxyxzxyzyxxz\n"
    assert mapping.read_text().splitlines()[2:5] == ["0\t1\t0\ta", "1\t0\t1\tb", "1\t1\t0\tc"]


def test_convert_default_mapping_path(tmp_path):
    out = tmp_path / "s.txt"
    assert main(["convert", "--input", str(DATA / "running_trace.csv"), "--output", str(out)]) == 0
    assert (tmp_path / "s.txt.map.tsv").exists()


def test_convert_one_row_and_ragged(tmp_path, capsys):
    one, ragged = tmp_path / "one.csv", tmp_path / "bad.csv"
    one.write_text("i1,o1\n1,1\n")
    ragged.write_text("i1,o1\n1,1\n0\n")
    assert main(["convert", "--input", str(one)]) == 0
    assert capsys.readouterr().out == "a\nx\n"
    assert main(["convert", "--input", str(ragged)]) == 2


def test_check_small_corpus(capsys):
    assert main(["check", "--count", "15"]) == 0
    assert capsys.readouterr().out.startswith("ok: 15 instances")


def test_check_length_one_corpus():
    assert main(["check", "--count", "20", "--max-n", "1"]) == 0


def test_check_sabotage(capsys):
    assert main(["check", "--count", "15", "--sabotage"]) == 1
    out = capsys.readouterr().out
    assert "skip+full vs oracle" in out
    assert "only in oracle" in out
    assert "seed=" in out


def test_bench_single_cell(capsys):
    code = main(["bench", "--n", "200", "--sigma", "2", "--gamma", "2", "--reps", "1"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0].split("\t")[4:10] == ["base", "skip", "fast", "base/skip", "skip/fast", "base/fast"]
    assert len(lines) == 2
    cells = lines[1].split("\t")
    base, skip, ratio = float(cells[4]), float(cells[5]), float(cells[7])
    assert ratio == pytest.approx(base / skip, rel=0.05, abs=0.01)
    assert cells[-1] == "yes"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "colorminer", "mine", "--input", RUNNING, "--color", "y", "--filter", "real", "--engine", "skip"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "3\tca\n"
