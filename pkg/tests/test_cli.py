import importlib.resources as ir
import json

import pytest
from click.testing import CliRunner

from donkin.cli import main


@pytest.fixture(autouse=True)
def no_cache(monkeypatch):
    monkeypatch.setenv("DONKIN_NO_CACHE", "1")


@pytest.fixture()
def runner():
    return CliRunner()


def data_path(name):
    return str(ir.files("donkin") / "data" / f"{name}.tbl")


def test_roots(runner):
    result = runner.invoke(main, ["roots", "E8"])
    assert result.exit_code == 0
    assert "positive roots: 120" in result.output
    assert "group dimension: 248" in result.output


def test_roots_bad_type(runner):
    result = runner.invoke(main, ["roots", "E9"])
    assert result.exit_code == 2


def test_unknown_flag_is_an_error(runner):
    result = runner.invoke(main, ["roots", "--bogus", "E8"])
    assert result.exit_code == 2


def test_char(runner):
    result = runner.invoke(main, ["char", "G2", "1,0"])
    assert result.exit_code == 0
    assert "dimension: 7" in result.output


def test_char_wrong_rank(runner):
    result = runner.invoke(main, ["char", "G2", "1,0,0"])
    assert result.exit_code == 2


def test_exterior_pass(runner):
    result = runner.invoke(main, ["exterior", "G2", "1,0", "--p", "5"])
    assert result.exit_code == 0
    assert "PASS" in result.output


def test_exterior_fail_exit_code(runner):
    # at p = 2 the weight (2,0) of the exterior algebra is not restricted
    result = runner.invoke(main, ["exterior", "G2", "1,0", "--p", "2"])
    assert result.exit_code == 1
    assert "FAIL" in result.output


def test_decompose_from_file(runner, tmp_path):
    src = tmp_path / "char.txt"
    src.write_text("# three-dimensional module plus a trivial\n1 2\n2 0\n1 -2\n")
    result = runner.invoke(main, ["decompose", "A1", f"@{src}"])
    assert result.exit_code == 0
    assert "nabla(2): 1" in result.output
    assert "nabla(0): 1" in result.output


def test_restrict(runner):
    result = runner.invoke(main, ["restrict", "B2 -[auto]-> A3", "0,1,0"])
    assert result.exit_code == 0
    assert "exact: yes" in result.output


def test_restrict_max_chain_rejected(runner):
    result = runner.invoke(main, ["restrict", "D8 -[max]-> E8", "1,0,0,0,0,0,0,0"])
    assert result.exit_code == 2


def test_orbit_classical(runner):
    result = runner.invoke(main, ["orbit", "classical", "GL", "3,1"])
    assert result.exit_code == 0
    assert "GL1.GL1" in result.output
    assert "centralizer dimension: 6" in result.output


def test_orbit_invalid_partition(runner):
    result = runner.invoke(main, ["orbit", "classical", "Sp", "3,1"])
    assert result.exit_code == 1
    assert "not a valid" in result.output


def test_verify_tables_all_pass(runner):
    files = [data_path(n) for n in ("e8", "e7", "e6", "f4", "g2")]
    result = runner.invoke(main, ["verify-tables", *files])
    assert result.exit_code == 0
    assert "summary: 126 passed, 0 failed" in result.output


def test_verify_tables_failure_exit(runner, tmp_path):
    bad = tmp_path / "bad.tbl"
    bad.write_text("X\tG2\tG2 -[levi]-> E8\nY\tE7\tE7 -[levi]-> E8\n")
    result = runner.invoke(main, ["verify-tables", str(bad)])
    assert result.exit_code == 1
    assert "FAIL X" in result.output


def test_verify_tables_parse_error_exit(runner, tmp_path):
    bad = tmp_path / "bad.tbl"
    bad.write_text("not a table\n")
    result = runner.invoke(main, ["verify-tables", str(bad)])
    assert result.exit_code == 2


def test_spot_check_cli(runner):
    result = runner.invoke(main, ["spot-check", data_path("f4"), "--lambda", "0,0,0,1"])
    assert result.exit_code == 0
    assert "PASS" in result.output and "SKIPPED" in result.output


def test_jsonl_schema(runner):
    result = runner.invoke(main, ["--format", "jsonl", "verify-tables", data_path("g2")])
    assert result.exit_code == 0
    lines = [json.loads(line) for line in result.output.strip().split("\n")]
    assert all(obj["schema"] == 1 for obj in lines)
    assert lines[-1]["kind"] == "verify-summary"
    assert lines[-1]["passed"] == 2


def test_byte_identical_runs(runner):
    args = ["char", "B2", "1,1"]
    out1 = runner.invoke(main, args).output
    out2 = runner.invoke(main, args).output
    assert out1 == out2


def test_cache_dir_env(runner, tmp_path, monkeypatch):
    monkeypatch.delenv("DONKIN_NO_CACHE", raising=False)
    monkeypatch.setenv("DONKIN_CACHE_DIR", str(tmp_path))
    result = runner.invoke(main, ["char", "A2", "2,2"])
    assert result.exit_code == 0
    assert (tmp_path / "characters.bin").exists()
    # a second run picks the cache up and agrees
    again = runner.invoke(main, ["char", "A2", "2,2"])
    assert again.output == result.output
