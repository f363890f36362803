import io
import json
import sys

import pytest

from conftest import EXAMPLE_AXIOM, EXAMPLE_PAIRS
from zslp.cli import run_cli
from zslp.oracle import oracle_count
from zslp.slp import Slp, decode_slp, encode_slp


@pytest.fixture
def example_file(tmp_path):
    slp = Slp.from_pairs(EXAMPLE_PAIRS, EXAMPLE_AXIOM)
    path = tmp_path / "example1.zslp"
    path.write_bytes(encode_slp(slp))
    return str(path)


def test_count_match(example_file, capsys):
    code = run_cli(["count", "-e", "ab|ba", example_file])
    assert capsys.readouterr().out == "3\n"
    assert code == 0


def test_count_no_match(example_file, capsys):
    code = run_cli(["count", "-e", "zz", example_file])
    assert capsys.readouterr().out == "0\n"
    assert code == 1


def test_count_pattern_error(example_file, capsys):
    code = run_cli(["count", "-e", "ab(", example_file])
    captured = capsys.readouterr()
    assert code == 2
    assert "syntax error" in captured.err
    assert captured.out == ""


def test_bad_magic_reports_format_error(tmp_path, capsys):
    path = tmp_path / "bad.zslp"
    path.write_bytes(b"XXXXjunk")
    code = run_cli(["count", "-e", "a", str(path)])
    assert code == 2
    assert "bad magic" in capsys.readouterr().err


def test_missing_file_reports_io_error(capsys):
    code = run_cli(["count", "-e", "a", "/nonexistent/nowhere.zslp"])
    assert code == 2
    assert "io error" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    assert run_cli(["count"]) == 2  # missing -e
    assert run_cli(["frobnicate"]) == 2


def test_compress_decompress_roundtrip(tmp_path, capsys):
    data = bytes(range(256)) * 3 + b"\nlines\nof\ntext\n"
    src = tmp_path / "input.bin"
    src.write_bytes(data)
    packed = tmp_path / "packed.zslp"
    out = tmp_path / "restored.bin"
    assert run_cli(["compress", str(src), "-o", str(packed)]) == 0
    err = capsys.readouterr().err
    assert "rules=" in err and "ratio=" in err
    assert run_cli(["decompress", str(packed), "-o", str(out)]) == 0
    assert out.read_bytes() == data


def test_compress_stdin_stdout(tmp_path, monkeypatch, capsysbinary):
    data = b"to be or not to be, that is the question\n" * 4
    monkeypatch.setattr(
        sys, "stdin", io.TextIOWrapper(io.BytesIO(data), encoding="latin-1")
    )
    assert run_cli(["compress"]) == 0
    payload = capsysbinary.readouterr().out
    slp = decode_slp(payload)
    from zslp.slp import expand

    assert expand(slp) == data


def test_search_outputs_matching_lines(example_file, capsysbinary):
    code = run_cli(["search", "-e", "ab|ba", example_file])
    assert capsysbinary.readouterr().out == b"ba\nab\naba\n"
    assert code == 0


def test_search_no_match_exit_one(example_file, capsysbinary):
    code = run_cli(["search", "-e", "zz", example_file])
    assert capsysbinary.readouterr().out == b""
    assert code == 1


def test_search_no_prune_flag(example_file, capsysbinary):
    code = run_cli(["search", "-e", "ab|ba", "--no-prune", example_file])
    assert capsysbinary.readouterr().out == b"ba\nab\naba\n"
    assert code == 0


def test_stats_text_output(example_file, capsys):
    assert run_cli(["stats", "-e", "ab|ba", example_file]) == 0
    out = capsys.readouterr().out
    assert "s=4" in out
    assert "per-rule ops" in out


def test_stats_json_output(example_file, capsys):
    assert run_cli(["stats", "-e", "ab|ba", "--json", example_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["states"] == 4
    assert payload["rules"] == 7
    assert set(payload["rule_percentiles"]) == {"50", "75", "95", "98", "100"}


def test_module_invocation_subprocess(example_file):
    import subprocess

    result = subprocess.run(
        [sys.executable, "-m", "zslp", "count", "-e", "ab|ba", example_file],
        capture_output=True,
    )
    assert result.stdout == b"3\n"
    assert result.returncode == 0
    # compress | decompress is the identity, here over the raw zslp bytes
    piped = subprocess.run(
        f"{sys.executable} -m zslp compress < {example_file} | "
        f"{sys.executable} -m zslp decompress",
        shell=True,
        capture_output=True,
    )
    assert piped.returncode == 0
    assert piped.stdout == open(example_file, "rb").read()


def test_count_equals_decompress_then_oracle(tmp_path, capsys):
    corpus = [
        b"alpha beta\ngamma\n",
        b"no trailing newline",
        b"\n\nempty runs\n\n\n",
        bytes(range(1, 256)),
    ]
    for i, data in enumerate(corpus):
        src = tmp_path / f"c{i}.bin"
        src.write_bytes(data)
        packed = tmp_path / f"c{i}.zslp"
        assert run_cli(["compress", str(src), "-o", str(packed)]) == 0
        capsys.readouterr()
        code = run_cli(["count", "-e", "a", str(packed)])
        out = capsys.readouterr().out
        assert int(out) == oracle_count(data, "a")
        assert code == (0 if int(out) > 0 else 1)
