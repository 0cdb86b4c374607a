import csv
import io
import json
from pathlib import Path

import pytest

from h0quartic import cli

ROOT = Path(__file__).resolve().parents[1]
SCHEMAS = ROOT / "src" / "h0quartic" / "schemas"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def validate(obj, name):
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(obj, json.loads((SCHEMAS / f"{name}.schema.json").read_text()))


def test_run_config_validation():
    with pytest.raises(ValueError):
        cli.RunConfig("scan", samples=1)
    with pytest.raises(ValueError):
        cli.RunConfig("h0", cutoff=3.0)
    with pytest.raises(ValueError):
        cli.RunConfig("info", format="xml")
    with pytest.raises(ValueError):
        cli.RunConfig("plot")


def test_info_by_path(capsys, monkeypatch):
    monkeypatch.chdir(ROOT)
    code, out, _ = run(capsys, "info", "--field", "data/fields/f01.json")
    assert code == 0
    [row] = json.loads(out)
    assert round(row["regulator"], 4) == 0.5435
    validate([row], "info")


def test_info_by_file_name(capsys):
    code, out, _ = run(capsys, "info", "--field", "f08.json")
    assert code == 0
    assert json.loads(out)[0]["disc_f"] == 144


def test_info_all(capsys):
    code, out, _ = run(capsys, "info", "--field", "all")
    rows = json.loads(out)
    assert code == 0
    assert sum(1 for r in rows if r["table_row"]) == 19
    assert sum(1 for r in rows if r["table_row"] == 0) == 2
    validate(rows, "info")
    code, out, _ = run(capsys, "info", "--field", "all", "--format", "text")
    assert code == 0 and len(out.strip().splitlines()) == 22


def test_info_rejects_bad_manifest(capsys, tmp_path):
    d = json.loads((ROOT / "data/fields/f02.json").read_text())
    d["disc_f"] += 1
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    code, _, err = run(capsys, "info", "--field", str(p))
    assert code == 1 and "error" in err


def test_h0(capsys):
    code, out, _ = run(capsys, "h0", "--field", "f01", "--s", "1.0")
    assert code == 0
    res = json.loads(out)
    validate(res, "h0")
    assert res["h0"][0] > 0 and res["h0"][1] - res["h0"][0] < 1e-12
    code, out, _ = run(capsys, "h0", "--field", "all")
    assert code == 1


def test_scan_csv_and_metadata(tmp_path, capsys):
    out = tmp_path / "f01.csv"
    code, _, _ = run(capsys, "scan", "--field", "f01", "--samples", "512", "--format", "csv", "-o", str(out))
    assert code == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["s", "h0_mid", "h0_width"]
    body = [[float(c) for c in r] for r in rows[1:]]
    assert len(body) == 512 and all(len(r) == 3 for r in body)
    # two periods starting at s = 1/|eps|: sample 256 is s = 1, sample 0 is its translate
    nearest = min(range(512), key=lambda k: abs(body[k][0] - 1))
    assert nearest == 256 and body[256][0] == pytest.approx(1.0, abs=1e-15)
    width = max(r[2] for r in body)
    assert max(r[1] for r in body) - body[256][1] <= 2 * width
    assert abs(body[0][1] - body[256][1]) <= 2 * width
    assert all(r[1] < body[256][1] - 2 * width for k, r in enumerate(body) if k not in (0, 256))
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["field"] == "f01" and meta["cutoff"] == 40.0
    assert meta["argmax_s"] == body[256][0]
    assert meta["regulator"] == pytest.approx(0.5435, abs=1e-4)
    validate(meta, "scan")
    # 17 significant digits round-trip
    assert all(len(c.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 17 for c in rows[1])


def test_scan_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "scan", "--field", "f05", "--samples", "64", "--format", "csv", "-o", str(p))
    assert a.read_bytes() == b.read_bytes()
    assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()


def test_scan_json_and_range(capsys):
    code, out, _ = run(capsys, "scan", "--field", "f02", "--samples", "5", "--s-lo", "0.9", "--s-hi", "1.1",
                         "--format", "json")
    assert code == 0
    res = json.loads(out)
    validate(res, "scan")
    assert len(res["rows"]) == 5
    assert res["rows"][0][0] == pytest.approx(0.9) and res["rows"][-1][0] == pytest.approx(1.1)
    code, _, _ = run(capsys, "scan", "--field", "f02", "--s-lo", "0.9")
    assert code == 1
    code, _, _ = run(capsys, "scan", "--field", "f02", "--samples", "1")
    assert code == 1


def test_enumerate_torsion_and_empty(capsys):
    code, out, _ = run(capsys, "enumerate", "--field", "f03", "--bound", "4")
    res = json.loads(out)
    validate(res, "enumerate")
    assert res["count_up_to_sign"] == 2  # omega = 4
    assert all(abs(v["norm"]) == 1 and v["length_sq"] == pytest.approx(4) for v in res["vectors"])
    code, out, _ = run(capsys, "enumerate", "--field", "f03", "--radius", "0.5")
    assert json.loads(out)["vectors"] == []


def test_enumerate_norm_two_classes_field_6(capsys):
    code, out, _ = run(capsys, "enumerate", "--field", "f06", "--bound", "11")
    norm2 = [v for v in json.loads(out)["vectors"] if abs(v["norm"]) == 2]
    assert len(norm2) >= 4


def test_verify_tail_claims(capsys):
    code, out, _ = run(capsys, "verify", "--claims", "cor-tail-*")
    reps = json.loads(out)
    validate(reps, "report")
    assert code == 0
    assert [r["verdict"] for r in reps] == ["verified", "verified"]


def test_verify_list_and_formats(capsys):
    code, out, _ = run(capsys, "verify", "--claims", "table1-*", "--list")
    assert code == 0 and len(out.split()) == 76
    code, out, _ = run(capsys, "verify", "--claims", "cor-tail-sqrt2", "--format", "csv")
    assert out.splitlines()[0].startswith("claim_id,verdict")
    code, out, _ = run(capsys, "verify", "--claims", "cor-tail-sqrt2", "--format", "text")
    assert "verified" in out
    code, _, err = run(capsys, "verify", "--claims", "no-such-claim")
    assert code == 1


def test_verify_failed_claim_exits_one(capsys):
    code, out, _ = run(capsys, "verify", "--claims", "table1-row-18-disc_k")
    assert code == 1
    assert json.loads(out)[0]["verdict"] == "failed"


def test_verify_writes_file(tmp_path, capsys):
    p = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--claims", "lem-rsmall-*", "-o", str(p))
    assert code == 0 and out == ""
    assert len(json.loads(p.read_text())) == 2


@pytest.mark.slow
def test_verify_table_cells(capsys):
    code, out, _ = run(capsys, "verify", "--claims", "table1-*")
    reps = json.loads(out)
    assert len(reps) == 76
    assert code == 1  # rows 3, 18 and the small-norm cells listed in the notes do not match


@pytest.mark.slow
def test_table_command(capsys):
    code, out, _ = run(capsys, "table", "--format", "json")
    rows = json.loads(out)
    validate(rows, "table")
    assert len(rows) == 19
    r3 = rows[2]
    assert r3["row"] == 3 and round(r3["regulator"], 4) == 0.7329
    assert rows[12]["b2"] == [4, 4]
    assert code == 1
    code, out, _ = run(capsys, "table")
    assert len(out.strip().splitlines()) == 20


def test_env_override(tmp_path, capsys, monkeypatch):
    import shutil
    shutil.copytree(ROOT / "src/h0quartic/data", tmp_path / "data")
    (tmp_path / "data/fields/f01.json").unlink()
    monkeypatch.setenv("ARAKELOV_DATA_DIR", str(tmp_path / "data"))
    code, _, err = run(capsys, "info", "--field", "f01")
    assert code == 1
