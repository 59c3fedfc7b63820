"""Command-line interface: exit codes, flags, output formats."""

import csv
import io
import json

import pytest

from pma.cli import main

PAPER_DATA = {
    "universe": ["a", "b", "c", "d", "e"],
    "parties": [["a", "b", "c", "d", "e"], ["b", "c", "d"]],
}


@pytest.fixture
def datasets_file(tmp_path):
    path = tmp_path / "datasets.json"
    path.write_text(json.dumps(PAPER_DATA))
    return str(path)


def test_run_basic(capsys):
    code = main(["run", "--variant", "pma1", "--m", "2", "--e", "3",
                 "--t", "1", "--theta", "2", "--seed", "7"])
    assert code == 0
    out = capsys.readouterr().out
    assert "variant=pma1" in out
    assert "cost:" in out


def test_run_json_schema(capsys):
    code = main(["run", "--variant", "spma2", "--m", "3", "--e", "2",
                 "--t", "1", "--theta", "1", "--json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["schema"] == "pma-run/1"
    assert report["cost"]["download_symbols"] == 3


def test_run_csv(capsys):
    code = main(["run", "--variant", "pma1", "--m", "2", "--e", "2",
                 "--t", "1", "--csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2  # theta sweep
    assert all(r["match"] == "True" for r in rows)


def test_run_with_datasets_and_element(capsys, datasets_file):
    code = main(["run", "--variant", "pma1", "--t", "1",
                 "--datasets", datasets_file, "--element", "c", "--json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    (entry,) = report["results"]
    assert entry["element"] == "c"
    assert entry["count"] == 2


def test_run_element_without_datasets_is_parameter_error(capsys):
    assert main(["run", "--variant", "pma1", "--m", "2", "--e", "2",
                 "--element", "a"]) == 2


def test_run_unknown_element(capsys, datasets_file):
    assert main(["run", "--variant", "pma1", "--t", "1",
                 "--datasets", datasets_file, "--element", "zz"]) == 2


def test_run_invalid_params_exit_2(capsys):
    code = main(["run", "--variant", "pma1", "--m", "2", "--e", "2",
                 "--t", "1", "--n", "1"])
    assert code == 2
    assert "parameter error" in capsys.readouterr().err


def test_run_config_file_with_overrides(tmp_path, capsys):
    config = {"variant": "pma1", "m": 2, "e": 3, "t": 1, "seed": 1}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    code = main(["run", "--config", str(path), "--theta", "3", "--json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert [r["theta"] for r in report["results"]] == [3]


def test_run_type2_y_list(capsys):
    code = main(["run", "--variant", "spma2", "--m", "3", "--e", "2",
                 "--t", "1", "--y", "0,0,0", "--theta", "1"])
    assert code == 0


def test_audit_named_case(capsys):
    code = main(["audit", "--suite", "storage-security:spma2", "--json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["all_ok"] is True
    assert len(report["cases"]) == 1


def test_audit_empty_suite_exit_0(capsys):
    assert main(["audit", "--suite", "none"]) == 0


def test_audit_infeasible_cap_exit_3(capsys):
    assert main(["audit", "--suite", "lemma5", "--cap", "1"]) == 3


def test_audit_unknown_selector_exit_2(capsys):
    assert main(["audit", "--suite", "lemma99"]) == 2


def test_costs_table(capsys):
    code = main(["costs", "--variant", "pma1", "--sweep-m", "2..4",
                 "--t", "1", "--e", "2"])
    assert code == 0
    out = capsys.readouterr().out
    assert "linear in M: True" in out


def test_costs_csv(capsys):
    code = main(["costs", "--variant", "spma1", "--sweep-m", "2,3",
                 "--t", "1", "--e", "2", "--csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["download"] for r in rows] == ["4", "6"]


def test_costs_bad_sweep_exit_2(capsys):
    assert main(["costs", "--variant", "pma1", "--sweep-m", "a..b"]) == 2
