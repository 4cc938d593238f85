from __future__ import annotations

import json
import subprocess
import sys

import pytest

from polypart.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_exit_codes(capsys):
    code, out, _ = run(capsys, "validate", "--poly", "0,0,1", "--format", "json")
    assert code == 0 and json.loads(out)["rows"]
    code, _, _ = run(capsys, "validate", "--poly", "0,1,1")
    assert code == 1


def test_exact_zero(capsys):
    code, out, _ = run(capsys, "exact", "--poly", "0,0,1", "--n", "0")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# config: ")
    assert lines[1] == "n,count" and lines[2] == "0,1" and len(lines) == 3


def test_compare_golden(capsys):
    code, out, _ = run(capsys, "compare", "--poly", "0,0,1", "--n", "100", "--n", "1000", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    cols = doc["columns"]
    rows = {r[cols.index("n")]: r for r in doc["rows"]}
    assert rows[100][cols.index("exact")] == 1116
    assert rows[1000][cols.index("exact")] == 3998468431
    assert "summary" in doc


def test_big_ints_are_strings(capsys):
    code, out, _ = run(capsys, "exact", "--poly", "0,0,1", "--n", "6000", "--format", "json")
    last = json.loads(out)["rows"][-1]
    assert code == 0 and isinstance(last[1], str) and int(last[1]) > 2**53


def test_determinism_and_header_echo(capsys, tmp_path):
    argv = ["compare", "--poly", "0,0,1,2", "--n-range", "200", "400", "100", "--digits", "30"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    header = json.loads(first.splitlines()[0][len("# config: "):])
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps(header))
    _, third, _ = run(capsys, "compare", "--config", str(cfg_file))
    assert third == first


def test_flags_override_config(capsys, tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"poly": [0, 0, 1], "n_list": [10]}))
    _, out, _ = run(capsys, "exact", "--config", str(cfg_file), "--n", "4")
    assert out.splitlines()[-1] == "4,2"


def test_config_round_trip():
    cfg = RunConfig(poly=[3, 0, 5], n_list=[5, 7], J=2, seed=3).validate()
    again = RunConfig.from_dict(json.loads(cfg.to_json()))
    assert again == cfg
    with pytest.raises(ValueError):
        RunConfig.from_dict({"bogus": 1})


@pytest.mark.parametrize(
    "argv",
    [
        ["exact", "--poly", "0,2,4", "--n", "5"],
        ["exact", "--poly", "0,0,1", "--digits", "8", "--n", "5"],
        ["asym", "--poly", "0,0,1", "--R", "1.5", "--n", "100"],
        ["asym", "--poly", "0,0,1"],
    ],
)
def test_errors_exit_nonzero(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in json.loads(err)


def test_other_commands_run(capsys, tmp_path):
    out_file = tmp_path / "zeta.json"
    assert run(capsys, "zeta", "--poly", "0,0,1,2", "--format", "json", "--out", str(out_file))[0] == 0
    keys = {r[0] for r in json.loads(out_file.read_text())["rows"]}
    assert {"c_0", "c_2", "zeta0", "zeta0_prime"} <= keys
    code, out, _ = run(capsys, "asym", "--poly", "0,0,1", "--n", "1000", "--digits", "30")
    assert code == 0 and out.splitlines()[2].startswith("1000,") and "# J: 1" in out
    code, out, _ = run(capsys, "phicheck", "--poly", "0,0,1", "--X", "1000", "--digits", "30")
    assert code == 0 and "abs_err" in out
    code, out, _ = run(capsys, "expsum", "--poly", "0,0,1,2", "--q-max", "20", "--digits", "30")
    assert code == 0 and "# C_f:" in out and "# arcs:" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polypart", "exact", "--poly", "0,0,1", "--n", "4"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[-1] == "4,2"
