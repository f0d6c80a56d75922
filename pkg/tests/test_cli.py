import csv
import io
import json
import logging

import pytest

from realwdvv.archive import InvariantArchive
from realwdvv.cli import EXIT_FAILED, EXIT_FATAL, EXIT_OK, EXIT_USAGE, main


@pytest.fixture(scope="module")
def cache(tmp_path_factory, complex_store, real_store):
    path = tmp_path_factory.mktemp("cache") / "invariants.json"
    InvariantArchive.from_stores(complex_store, real_store).save(path)
    return str(path)


@pytest.fixture(autouse=True)
def detach_log_handlers():
    yield
    logger = logging.getLogger("realwdvv")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)


def _passing(indices):
    return {
        "relation": "M12",
        "indices": indices,
        "status": "pass",
        "first_exponent": "",
        "value": "",
    }


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_complex_table_from_cache(cache, capsys):
    assert main(["complex-table", "-d", "3", "--cache", cache]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "d,a,b,value"
    assert len(lines) == 1 + 15
    assert "3,12,0,80160" in lines
    assert "2,0,4,0" in lines


def test_complex_table_degree_one(capsys):
    assert main(["complex-table", "-d", "1"]) == EXIT_OK
    out, err = capsys.readouterr()
    assert out.splitlines()[1:] == ["1,0,2,1", "1,2,1,1", "1,4,0,2"]
    assert "✅" in err


def test_complex_table_json(cache, capsys):
    argv = ["complex-table", "-d", "2", "--format", "json", "--cache", cache]
    assert main(argv) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert {"d": 2, "a": 8, "b": 0, "value": "92"} in rows


def test_real_table(cache, capsys):
    assert main(["real-table", "-d", "3", "--seed", "+1", "--cache", cache]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert {"d": "3", "a": "2", "b": "0", "k": "4", "value": "5"} in rows
    assert {"d": "3", "a": "4", "b": "0", "k": "2", "value": "-13"} in rows


def test_real_table_opposite_seed(capsys):
    assert main(["real-table", "-d", "1", "--seed", "-1"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert {"d": "1", "a": "0", "b": "0", "k": "2", "value": "-1"} in rows


@pytest.mark.parametrize("seed", ["2", "0", "plus"])
def test_bad_seed_is_a_usage_error(seed, capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["real-table", "-d", "1", "--seed", seed])
    assert excinfo.value.code == EXIT_USAGE
    assert "seed" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv", [["-d", "0"], ["-d", "three"], ["--target", "p1xp1xp1"]]
)
def test_bad_arguments_are_usage_errors(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(["complex-table", *argv])
    assert excinfo.value.code == EXIT_USAGE


def test_bad_log_level_is_a_usage_error(capsys):
    assert main(["complex-table", "-d", "1", "--log-level", "chatty"]) == EXIT_USAGE
    assert "log level" in capsys.readouterr().err


def test_output_is_deterministic(cache, tmp_path):
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    argv = ["real-table", "-d", "3", "--cache", cache, "-o", str(first)]
    assert main(argv) == EXIT_OK
    argv = ["real-table", "-d", "3", "--cache", cache, "-o", str(second)]
    assert main(argv) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_fresh_solve_writes_the_cache(tmp_path, capsys):
    path = tmp_path / "fresh.json"
    assert main(["real-table", "-d", "2", "--cache", str(path)]) == EXIT_OK
    fresh = capsys.readouterr().out
    archive = InvariantArchive.load(path)
    assert (archive.real_degree, archive.seed) == (2, 1)

    assert main(["real-table", "-d", "2", "--cache", str(path)]) == EXIT_OK
    assert capsys.readouterr().out == fresh


def test_bounds_table(cache, capsys):
    assert main(["bounds-table", "-d", "3", "--cache", cache]) == EXIT_OK
    out, err = capsys.readouterr()
    rows = {(row["d"], row["a"], row["b"]): row for row in _rows(out)}
    assert len(rows) == 29
    row = rows[("3", "4", "0")]
    assert row["expansion"] == "16,-12,-24,-12,16"
    assert (row["minimum"], row["complex"], row["reference"]) == ("12", "1312", "match")
    assert rows[("3", "1", "2")]["reference"] == "corrected-label"
    assert all(int(row["minimum"]) >= 0 for row in rows.values())
    assert "✅" in err


def test_bounds_table_flags_extrapolated_rows(cache, capsys):
    argv = ["bounds-table", "-d", "4", "--cache", cache, "--format", "json"]
    assert main(argv) == EXIT_OK
    out, err = capsys.readouterr()
    statuses = {row["reference"] for row in json.loads(out) if row["d"] == 4}
    assert statuses == {"extrapolated"}
    assert "⚠️" in err


def test_verify_table_only(cache, capsys):
    assert main(["verify", "-d", "3", "--skip-pde", "--cache", cache]) == EXIT_OK
    err = capsys.readouterr().err
    assert "✅ reference table" in err
    assert "PDE" not in err


def test_verify_full_run(cache, capsys):
    assert main(["verify", "-d", "2", "--cache", cache]) == EXIT_OK
    err = capsys.readouterr().err
    checks = (
        "reference table",
        "real relations",
        "parity vanishing",
        "seed symmetry",
        "PDE residuals",
    )
    for check in checks:
        assert f"✅ {check}" in err


def test_verify_reports_a_corrupted_cache(cache, tmp_path, capsys):
    document = json.loads(open(cache, encoding="utf-8").read())
    for entry in document["real"]:
        if entry[:4] == [3, 2, 0, 4]:
            entry[4] = "6"
    corrupted = tmp_path / "corrupted.json"
    corrupted.write_text(json.dumps(document), encoding="utf-8")

    argv = ["verify", "-d", "3", "--skip-pde", "--cache", str(corrupted)]
    assert main(argv) == EXIT_FAILED
    err = capsys.readouterr().err
    assert "❌ reference table: d,a,b=(3, 2, 0) averaged: expected 5, got 6" in err


def test_verify_pde_json(cache, capsys):
    argv = ["verify-pde", "-d", "2", "--t-cap", "4", "--cache", cache]
    argv += ["--format", "json"]
    assert main(argv) == EXIT_OK
    reports = json.loads(capsys.readouterr().out)
    assert len(reports) == 34
    assert {report["status"] for report in reports} == {"pass"}
    assert _passing("h3,h3") in reports


def test_verify_pde_degree_four(cache, capsys):
    argv = ["verify-pde", "-d", "4", "--t-cap", "8", "--cache", cache]
    assert main(argv) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 34
    for indices in ("1,h3", "h,h2"):
        assert _passing(indices) in rows


def test_unreadable_cache_is_fatal(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    assert main(["real-table", "-d", "1", "--cache", str(broken)]) == EXIT_FATAL
    assert "❌" in capsys.readouterr().err
