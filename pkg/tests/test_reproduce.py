import json

import pytest

from cyclelab.cli import main
from cyclelab.reproduce import DISCREPANCY, FAIL, PASS, ROWS, format_table, load_golden, reproduce, run_row, \
    succeeded, summary


@pytest.fixture
def golden_copy(tmp_path):
    def make(**changes):
        gold = load_golden()
        for name, value in changes.items():
            gold[name.replace("_", "-")] = value
        path = tmp_path / "expected.json"
        path.write_text(json.dumps(gold))
        return str(path)
    return make


def test_golden_has_every_row():
    gold = load_golden()
    assert set(gold) == set(ROWS)


@pytest.mark.parametrize("name", ["lyap-deg4", "mel1-deg4", "mel1-odd", "cofactor-deg4", "cofactor-odd",
                                  "kukles"])
def test_exact_rows_pass(name):
    result = run_row(name, load_golden())
    assert result.status == PASS, result.detail


def test_second_order_row():
    result, = reproduce("mel2-deg4")
    assert result.status in (PASS, DISCREPANCY)
    assert result.detail


def test_filter_and_table():
    results = reproduce("cofactor")
    assert [r.name for r in results] == ["cofactor-deg4", "cofactor-odd"]
    assert succeeded(results)
    table = format_table(results)
    assert table.splitlines()[0].split() == ["row", "status", "seconds"]
    assert "cofactor-odd" in table
    counts = summary(results)["counts"]
    assert counts == {PASS: 2, DISCREPANCY: 0, FAIL: 0}
    assert reproduce("no-such-row") == []


def test_parallel_rows():
    results = reproduce("cofactor", jobs=2)
    assert [r.status for r in results] == [PASS, PASS]


def test_fault_injection(golden_copy):
    path = golden_copy(mel1_deg4={"M": ["0", "-2*c", "5*c"], "roots": [["1/2", "1/2", 1]]})
    result, = reproduce("mel1-deg4", golden=path)
    assert result.status == FAIL
    assert not succeeded([result])


def test_malformed_golden_row(golden_copy):
    path = golden_copy(lyap_deg4={"subst": "c=0"})
    result, = reproduce("lyap-deg4", golden=path)
    assert result.status == FAIL
    assert "KeyError" in result.detail["error"]


def test_reproduce_command(capsys, golden_copy):
    assert main(["reproduce", "--filter", "mel1-deg4"]) == 0
    assert "PASS" in capsys.readouterr().out
    path = golden_copy(mel1_deg4={"M": ["0", "-2*c", "5*c"], "roots": [["1/2", "1/2", 1]]})
    assert main(["reproduce", "--filter", "mel1-deg4", "--golden", path, "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["counts"][FAIL] == 1
    assert report["rows"][0]["row"] == "mel1-deg4"


@pytest.mark.slow
def test_full_suite_has_no_failures():
    results = reproduce(jobs=2)
    assert succeeded(results), format_table(results)
