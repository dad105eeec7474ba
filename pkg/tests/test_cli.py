import json
import shutil

import jsonschema
import pytest

from idemlab.cli import main
from idemlab.report import corpus_dir, load_schema


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def report(argv, capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, err = run(argv + ["--json", str(path)], capsys)
    data = json.loads(path.read_text()) if path.exists() else None
    if data is not None:
        jsonschema.validate(data, load_schema())
    return code, data, out


@pytest.fixture
def a5_file():
    return str(corpus_dir() / "A5.grp")


@pytest.fixture
def small_corpus(tmp_path):
    d = tmp_path / "corpus"
    d.mkdir()
    for name in ("C2", "C3", "A5"):
        shutil.copy(corpus_dir() / f"{name}.grp", d)
    return d


def test_info(a5_file, capsys, tmp_path):
    code, data, _ = report(["info", a5_file], capsys, tmp_path)
    assert code == 0
    rec = data["record"]
    assert rec["order"] == 60 and rec["h2"]["invariant_factors"] == [2]
    assert rec["simple"] and rec["perfect"] and not rec["solvable"]


def test_info_to_stdout(a5_file, capsys):
    code, out, _ = run(["info", a5_file], capsys)
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, load_schema())


def test_covers(a5_file, capsys, tmp_path):
    code, data, _ = report(["covers", a5_file], capsys, tmp_path)
    assert code == 0
    assert data["sur_gensub_count"] == 2 and data["sur_cov_count"] == 2
    assert sorted(c["domain_order"] for c in data["sur_gensub"]) == [60, 120]


def test_idem_modes(a5_file, capsys, tmp_path):
    code, data, _ = report(["idem", a5_file], capsys, tmp_path)
    assert code == 0 and data["size"] == 3 and data["mode"] == "idem"
    code, data, _ = report(["idem", a5_file, "--inf"], capsys, tmp_path)
    assert data["size"] == 4 and data["depth"] == 2
    code, data, _ = report(["idem", a5_file, "--iterate", "2"], capsys, tmp_path)
    assert data["size"] == 4 and data["mode"] == "iterate"


def test_verify_table_subset(small_corpus, capsys, tmp_path):
    code, data, out = report(["verify-table", str(small_corpus)], capsys, tmp_path)
    assert code == 0
    assert data["summary"] == {"pass": 3, "fail": 0, "skip": 0}
    assert "PASS A5" in out


def test_verify_table_parallel_matches_serial(small_corpus, capsys, tmp_path):
    _, serial, _ = report(["verify-table", str(small_corpus), "--no-cache"], capsys, tmp_path)
    _, par, _ = report(["verify-table", str(small_corpus), "--no-cache", "--jobs", "2"], capsys, tmp_path)
    assert serial == par


def test_corrupted_expected_fails(small_corpus, capsys, tmp_path):
    rows = json.loads((corpus_dir().parent / "table.json").read_text())["rows"]
    rows["A5"]["idem_size"] = 4
    exp = tmp_path / "expected.json"
    exp.write_text(json.dumps({"rows": rows}))
    code, data, out = report(["verify-table", str(small_corpus), "--expected", str(exp)], capsys, tmp_path)
    assert code == 1
    bad = [r for r in data["records"] if r["status"] == "FAIL"]
    assert [r["group"] for r in bad] == ["A5"]
    assert "idem_size: expected 4, computed 3" in bad[0]["diff"]


def test_empty_corpus_warns(tmp_path, capsys):
    d = tmp_path / "empty"
    d.mkdir()
    code, data, out = report(["verify-table", str(d)], capsys, tmp_path)
    assert code == 0
    assert data["records"] == [] and data["warnings"]


def test_cap_gives_skip(small_corpus, capsys, tmp_path):
    code, data, out = report(["verify-table", str(small_corpus), "--cap-order", "10"], capsys, tmp_path)
    assert code == 0
    assert data["summary"]["skip"] == 1
    assert "SKIP A5" in out


def test_missing_row_warns(small_corpus, capsys, tmp_path):
    exp = tmp_path / "expected.json"
    exp.write_text(json.dumps({"rows": {}}))
    code, data, _ = report(["verify-table", str(small_corpus), "--expected", str(exp)], capsys, tmp_path)
    assert code == 0 and len(data["warnings"]) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["info", "/nonexistent/file.grp"],
        ["verify-table", "/nonexistent/dir"],
        ["oracle", "nosuchsuite"],
        ["info", "A5", "--jobs", "0"],
        ["idem", "A5", "--iterate", "0"],
        ["info", "A5", "--cap-order", "10"],
        ["verify-table", "CORPUS", "--expected", "/nonexistent.json"],
    ],
)
def test_usage_errors_exit_2(argv, capsys, a5_file, small_corpus):
    argv = [a5_file if a == "A5" else str(small_corpus) if a == "CORPUS" else a for a in argv]
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err.startswith("idemlab:")


def test_malformed_group_file_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.grp"
    p.write_text("group X\ndegree 3\ngen (0 7)\n")
    code, _, err = run(["info", str(p)], capsys)
    assert code == 2 and "bad.grp:3:" in err
    d = tmp_path / "c"
    d.mkdir()
    shutil.copy(p, d)
    assert run(["verify-table", str(d)], capsys)[0] == 2


def test_argparse_errors(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["frobnicate"])
    assert ei.value.code == 2


def test_oracle_command(capsys, tmp_path):
    code, data, out = report(["oracle", "invsub"], capsys, tmp_path)
    assert code == 0 and data["status"] == "PASS" and data["failures"] == []
    assert out.startswith("PASS invsub")
