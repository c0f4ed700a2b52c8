import json
import subprocess
import sys

import pytest

from slowbond import tables
from slowbond.cli import main
from slowbond.output import dump_csv, dump_json, load_csv, load_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_golden_passes(capsys):
    code, out, _ = run(capsys, "golden", "--L", "4", "--order", "4")
    assert code == 0
    assert out.strip().endswith("PASS with 5 coefficients matched (10 density coefficients)")


def test_golden_detects_mismatch(capsys, monkeypatch):
    bad = list(tables.CURRENT_COEFFS)
    bad[3] = "1.18750000000000000099"
    monkeypatch.setattr(tables, "CURRENT_COEFFS", bad)
    code, out, _ = run(capsys, "golden", "--L", "4", "--order", "4", "--format", "json")
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_semi_check(capsys):
    code, out, _ = run(capsys, "semi", "--check-recursion", "--L-max", "60")
    assert code == 0
    assert json.loads(out)["meta"]["command"] == "semi"


def test_expand_json_round_trip(capsys):
    code, out, _ = run(capsys, "expand", "--L", "3", "--order", "4")
    assert code == 0
    meta, doc = load_json(out)
    assert dump_json(meta, doc) == out
    assert [e["exact"] for e in doc["c"][:4]] == ["0/1", "1/1", "-3/2", "19/16"]


def test_exact_csv_round_trip(capsys):
    code, out, _ = run(capsys, "exact", "--L", "3", "--format", "csv")
    assert code == 0
    meta, cols, rows = load_csv(out)
    assert cols == ["re", "im", "L", "in_window"]
    assert len(rows) == 5 and sum(int(r[3]) for r in rows) == 3
    assert dump_csv(meta, cols, rows) == out


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "c.json"
    assert main(["expand", "--L", "2", "--order", "2", "--out", str(dest)]) == 0
    assert load_json(dest.read_text())[1]["order"] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["expand", "--L"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "couple", "--L", "3", "--W", "5", "--r", "0.5", "--t-max", "1")
    assert code == 2 and "W >= 4L" in err
    code, _, _ = run(capsys, "expand", "--L", "2", "--order", "-3")
    assert code == 2


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("SLOWBOND_PRECISION", "128")
    _, out, _ = run(capsys, "exact", "--L", "2")
    assert load_json(out)[0]["precision_bits"] == 128
    _, out, _ = run(capsys, "exact", "--L", "2", "--precision-bits", "200")
    assert load_json(out)[0]["precision_bits"] == 200
    monkeypatch.setenv("SLOWBOND_PRECISION", "lots")
    assert run(capsys, "exact", "--L", "2")[0] == 2


def test_simulate_and_couple(capsys):
    code, out, _ = run(capsys, "simulate", "--L", "2", "--r", "0.5", "--t-max", "3000", "--compare-exact")
    assert code == 0
    doc = load_json(out)[1]
    assert doc["stderr"] > 0 and "prng" in doc
    code, out, _ = run(capsys, "couple", "--L", "2", "--r", "0.5", "--t-max", "20", "--runs", "3")
    assert code == 0


def test_figures_fig1(tmp_path, capsys):
    code, out, _ = run(capsys, "figures", "fig1", "--out-dir", str(tmp_path))
    assert code == 0
    meta, cols, rows = load_csv((tmp_path / "fig1.csv").read_text())
    assert cols == ["k", "value"] and len(rows) == 11
    assert json.loads(out)["figures"]["fig1"]["status"] == "ok"


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "slowbond", "--help"], capture_output=True, text=True)
    assert p.returncode == 0 and "golden" in p.stdout
