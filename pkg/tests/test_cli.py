import csv
import json
import subprocess
import sys

import pytest

from qreading import cli


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_gain_table_check(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code, _, err = run(["gain-table", "--check", "--out", str(out)], capsys)
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 6
    assert list(rows[0]) == ["M", "N_S", "r0", "r1", "N_B", "C", "Q", "J_class", "J_quant", "G"]
    assert float(rows[3]["G"]) == pytest.approx(5.9e-2, abs=5e-4)
    assert "DISCREPANCY" in err and "MISMATCH" not in err
    meta = json.loads((tmp_path / "table.csv.meta.json").read_text())
    assert meta["command"] == "gain-table" and len(meta["checks"]) == 6


def test_gain_table_strict_fails(capsys):
    code, _, err = run(["gain-table", "--check", "--strict"], capsys)
    assert code == 1
    assert "MISMATCH" in err


def test_gain_table_extra_row(capsys):
    code, out, _ = run(["gain-table", "--row", "5,1,0.4,0.4,0.1"], capsys)
    assert code == 0
    last = list(csv.DictReader(out.splitlines()))[-1]
    assert float(last["G"]) == 0.0


def test_gain_table_bad_row(capsys):
    code, _, err = run(["gain-table", "--row", "1,2,3"], capsys)
    assert code == 2 and "bad --row" in err


def test_outputs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(["critical-curve", "--ns", "0.1", "--grid", "0:0.9:4", "--out", str(path)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_critical_curve_columns(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    code, _, _ = run(["critical-curve", "--ns", "3", "--grid", "0,0.6", "--out", str(out)], capsys)
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["N_S", "r0", "M_real", "M_int", "N_B_worst", "status"]
    assert rows[0]["status"] == "no-advantage"
    assert rows[1]["status"] == "bisection"


@pytest.mark.parametrize("grid", ["", "0.5,0.2", "0.5,1.0"])
def test_critical_curve_bad_grid(grid, capsys):
    code, _, err = run(["critical-curve", "--ns", "0.1", "--grid", grid], capsys)
    assert code == 2 and err.startswith("error:")


def test_asymptote_compare(tmp_path, capsys):
    out = tmp_path / "asym.csv"
    code, _, _ = run(["asymptote-compare", "--ns-range", "1,2", "--out", str(out)], capsys)
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["N_S", "M_solver", "M_tilde", "rel_diff"]
    assert float(rows[0]["M_tilde"]) == pytest.approx(1.794, abs=1e-3)


def test_asymptote_compare_rejects_divergent_range(capsys):
    code, _, err = run(["asymptote-compare", "--ns-range", "3"], capsys)
    assert code == 2 and "outside" in err


def test_gain_point(capsys):
    code, out, _ = run(["gain-point", "--m", "1", "--ns", "3.5", "--r0", "0.5", "--r1", "0.95", "--nb", "0.01"], capsys)
    assert code == 0
    row = next(csv.DictReader(out.splitlines()))
    assert float(row["G"]) == pytest.approx(6.2e-3, abs=5e-5)


def test_gain_point_domain_error(capsys):
    code, _, err = run(["gain-point", "--m", "1", "--ns", "1", "--r0", "0.9", "--r1", "0.5"], capsys)
    assert code == 2 and "r1 >= r0" in err


SMALL_SWEEP = "ns=0.1;r=0,1;nb=0;s=0.5"


def test_oracle_check_small(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, err = run(["oracle-check", "--sweep", SMALL_SWEEP, "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] and doc["cells"] == 1
    assert doc["quantities"]["fidelity"]["max_deviation"] < 1e-4
    assert "thermal_power_deviation" in doc
    assert "converged at dim" in err


def test_oracle_check_perturbed_fails(capsys):
    code, _, err = run(["oracle-check", "--sweep", "ns=0.5;r=0,0.7;nb=0.1;s=0.5", "--perturb-lambda", "1e-3"], capsys)
    assert code == 1 and "FAIL chernoff" in err


def test_oracle_check_small_dim(capsys):
    code, _, err = run(["oracle-check", "--sweep", "ns=1;r=0,1;nb=0;s=0.5", "--dim", "5"], capsys)
    assert code == 2 and "increase the cutoff" in err


def test_oracle_check_bad_sweep(capsys):
    code, _, _ = run(["oracle-check", "--sweep", "ns=0.1;bogus=1"], capsys)
    assert code == 2


def test_show_config(tmp_path, capsys):
    code, out, _ = run(["--show-config"], capsys)
    assert code == 0
    for key in cli.DEFAULTS:
        assert key in out
    cfg = tmp_path / "c.ini"
    cfg.write_text("[qreading]\nnb_max = 3\n")
    code, out, _ = run(["--config", str(cfg), "--show-config"], capsys)
    assert "nb_max = 3" in out


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[qreading]\nnot_a_key = 1\n")
    code, _, err = run(["--config", str(cfg), "--show-config"], capsys)
    assert code == 2 and "not_a_key" in err


def test_missing_command(capsys):
    assert run([], capsys)[0] == 2


def test_parse_list():
    assert cli.parse_list("0:1:3") == [0.0, 0.5, 1.0]
    assert cli.parse_list("0.1, 0.2") == [0.1, 0.2]
    assert cli.parse_list("") == []


def test_fmt_round_trips():
    x = 0.1 + 0.2
    assert float(cli.fmt(x)) == x


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qreading", "--show-config"], capture_output=True, text=True)
    assert proc.returncode == 0 and "[qreading]" in proc.stdout
