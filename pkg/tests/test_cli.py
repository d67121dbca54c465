import csv
import io
import json
from importlib import resources

import pytest

from logcoef import cli
from logcoef.weights import Custom, TwoFactorNum


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("family,N,code", [
    ("twofactornum:alpha=1,beta=1", 5, 0),
    ("ratquadnum:a=0,b=953/800", 3, 0),
    ("ratquadnum:a=0,b=6/5", 2, 1),
])
def test_certify_exit_codes(capsys, family, N, code):
    rc, out, _ = run(capsys, "certify", "--family", family, "--N", str(N), "--no-timestamp")
    assert rc == code
    rep = json.loads(out)
    assert rep["verdict"] == ("CERTIFIED" if code == 0 else "FAILED")
    assert "timestamp" not in rep


def test_certify_indeterminate(capsys, monkeypatch):
    # no built-in descriptor lacks a tail certificate, so substitute one
    monkeypatch.setattr(cli, "parse_family", lambda text: Custom(TwoFactorNum(1, 1).p, name="copy"))
    rc, out, _ = run(capsys, "certify", "--family", "x", "--N", "5", "--no-timestamp")
    assert rc == 2 and json.loads(out)["verdict"] == "INDETERMINATE"


@pytest.mark.parametrize("argv", [
    ["certify", "--family", "nosuch:a=1", "--N", "3"],
    ["certify", "--family", "ratquadnum:a=0", "--N", "3"],
    ["certify", "--family", "ratquadnum:a=0,b=1", "--N", "0"],
    ["certify", "--family", "ratquadnum:a=0,b=1", "--N", "3", "--precision", "64"],
    ["radius", "--b", "3"],
    ["radius", "--b", "x/y"],
    ["figure-data", "fig9"],
    [],
])
def test_usage_errors(capsys, argv):
    rc, _, err = run(capsys, *argv)
    assert rc == 3 and "error" in err


def test_certify_text_format(capsys):
    rc, out, _ = run(capsys, "certify", "--family", "ratquadnum:a=0,b=4/3", "--N", "9", "--format", "text")
    assert rc == 0 and "verdict  CERTIFIED" in out and "(ii) k=9" in out


def test_timestamp_present_by_default(capsys):
    _, out, _ = run(capsys, "certify", "--family", "twofactornum:alpha=1,beta=1", "--N", "5")
    assert "timestamp" in json.loads(out)


def test_appendix_verify(capsys):
    rc, out, _ = run(capsys, "appendix-verify", "--no-timestamp")
    rep = json.loads(out)
    assert rc == 0 and rep["ok"] and rep["matched_total"] == 23


def test_appendix_verify_detects_corruption(capsys, tmp_path):
    data = json.loads(resources.files("logcoef").joinpath("data/q_tables.json").read_text())
    data["tables"]["ratquad_n9"]["Q"]["4"][2] = "1/7"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    rc, out, _ = run(capsys, "appendix-verify", "--tables", str(path), "--format", "text")
    assert rc == 1 and "MISMATCH" in out
    assert "k=4 degree 2: table 1/7" in out


def test_deterministic_output(capsys):
    for argv in (["certify", "--family", "squaredfactor:alpha=1,beta=1/20", "--N", "9"],
                 ["constants"], ["radius"], ["series-check", "--format", "json"]):
        a = run(capsys, *argv, "--no-timestamp")[1]
        b = run(capsys, *argv, "--no-timestamp")[1]
        assert a == b and a


def test_constants(capsys):
    rc, out, _ = run(capsys, "constants", "--format", "csv", "--precision", "256")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rc == 0 and {"name", "value", "error_bound", "definition"} <= set(rows[0])
    vals = {r["name"]: r["value"] for r in rows}
    assert any(v.startswith("0.98727") for v in vals.values())
    assert any(v.startswith("0.62787") for v in vals.values())
    assert all(len(v) > 60 for v in vals.values() if v.startswith("0.98727"))


def test_radius_single_b(capsys):
    rc, out, _ = run(capsys, "radius", "--b", "1/2", "--format", "json", "--no-timestamp")
    row = json.loads(out)
    assert rc == 0 and row["b"] == "1/2" and 0 < float(row["r3"]) < float(row["r4"]) < 1


def test_fig1(capsys):
    rc, out, _ = run(capsys, "figure-data", "fig1")
    rows = list(csv.reader(io.StringIO(out)))
    assert rc == 0 and rows[0] == ["x", "Q1"] and len(rows) == 402
    assert float(rows[1][0]) == -1 and float(rows[-1][0]) == 1
    assert any(float(y) < 0 for _, y in rows[1:])


def test_fig2(capsys):
    rc, out, _ = run(capsys, "figure-data", "fig2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rc == 0 and len(rows) == 21
    r1 = [float(r["r1"]) for r in rows]
    r2 = [float(r["r2"]) for r in rows]
    assert r1 == sorted(r1) and r2 == sorted(r2)
    # the difference column changes sign on the grid
    diffs = [float(r["r2_minus_r1"]) for r in rows]
    assert diffs[0] > 0 > diffs[-1]


def test_fig3(capsys):
    rc, out, _ = run(capsys, "figure-data", "fig3", "--points", "11")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rc == 0 and len(rows) == 11
    r3 = [float(r["r3"]) for r in rows]
    r4 = [float(r["r4"]) for r in rows]
    assert r3 == sorted(r3) and r4 == sorted(r4)
    assert all(b > a for a, b in zip(r3, r4))


def test_series_check(capsys):
    rc, out, _ = run(capsys, "series-check")
    assert rc == 0 and out.count(": ok") == 3


def test_out_file(capsys, tmp_path):
    path = tmp_path / "rep.json"
    rc, out, _ = run(capsys, "certify", "--family", "twofactornum:alpha=1,beta=1", "--N", "5", "--out", str(path))
    assert rc == 0 and out == ""
    assert json.loads(path.read_text())["verdict"] == "CERTIFIED"
