import csv
import json
import shutil
import subprocess
import sys

import pytest

from robust_doe.cli import main
from robust_doe.report import AnalysisReport


@pytest.fixture
def spec(data_dir):
    return str(data_dir / "median_barrier_spec.json")


@pytest.fixture
def params(data_dir):
    return str(data_dir / "surrogate_params.json")


@pytest.fixture
def respdir(tmp_path, tables_dir):
    d = tmp_path / "resp"
    d.mkdir()
    for name in ("acceleration.csv", "deflection.csv"):
        shutil.copy(tables_dir / name, d / name)
    return d


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_design_lists_every_cell(spec, tmp_path):
    out = tmp_path / "design.csv"
    assert main(["design", spec, "-o", str(out)]) == 0
    rows = _rows(out)
    assert len(rows) == 36
    assert rows[0]["A"] == "3.5" and rows[0]["v"] == "80.0"
    assert {(r["inner_run"], r["outer_run"]) for r in rows} == {(str(i), str(j)) for i in range(1, 10) for j in range(1, 5)}


def test_design_with_other_outer_array(spec, tmp_path):
    doc = json.loads(open(spec).read())
    doc["arrays"]["outer"] = "L4"
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    out = tmp_path / "d.csv"
    assert main(["design", str(path), "-o", str(out)]) == 0
    assert len(_rows(out)) == 36
    doc["arrays"]["inner"] = "L4"
    doc["factors"] = [f for f in doc["factors"] if f["kind"] == "noise"] + [
        {"name": "A", "kind": "controllable", "unit": "mm", "levels": [1, 2]}
    ]
    doc["arrays"]["assignment"]["inner"] = {"A": 1}
    path.write_text(json.dumps(doc))
    assert main(["design", str(path), "-o", str(out)]) == 0
    assert len(_rows(out)) == 16


def test_design_unknown_array_exit(spec, tmp_path, capsys):
    doc = json.loads(open(spec).read())
    doc["arrays"]["inner"] = "L99"
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    assert main(["design", str(path)]) == 2
    assert "L99" in capsys.readouterr().err


def test_simulate_is_deterministic(spec, params, tmp_path):
    assert main(["simulate", spec, "--params", params, "-o", str(tmp_path / "a")]) == 0
    assert main(["simulate", spec, "--params", params, "-o", str(tmp_path / "b")]) == 0
    for name in ("acceleration.csv", "deflection.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_simulate_rejects_bad_constant(spec, params, tmp_path, capsys):
    doc = json.loads(open(params).read())
    doc["strain_rate_C"] = 0
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    assert main(["simulate", spec, "--params", str(path), "-o", str(tmp_path / "o")]) == 2
    assert "Cowper-Symonds" in capsys.readouterr().err


def test_snr_command(spec, respdir, tmp_path):
    out = tmp_path / "snr.csv"
    assert main(["snr", spec, str(respdir), "-o", str(out)]) == 0
    rows = _rows(out)
    assert float(rows[0]["acceleration_snr"]) == pytest.approx(-24.86, abs=0.02)
    assert float(rows[8]["deflection_snr"]) == pytest.approx(-51.16, abs=0.02)


def test_analyze_json_roundtrip(spec, respdir, tmp_path):
    out = tmp_path / "report.json"
    assert main(["analyze", spec, str(respdir), "-o", str(out)]) == 0
    text = out.read_text()
    report = AnalysisReport.from_json(text)
    assert report.to_json() == text
    assert report.optimal_combination == "A3 B3 C1"
    assert report.factor_order == ["A", "B", "C"]
    assert report.grey.order[0] == 9
    defl = [c for c in report.criteria if c.objective == "deflection"][0]
    assert defl.failing_runs == [2, 4, 6]


def test_analyze_shape_error(spec, respdir, capsys):
    lines = (respdir / "acceleration.csv").read_text().splitlines()
    (respdir / "acceleration.csv").write_text("\n".join(lines[:-1]) + "\n")
    assert main(["analyze", spec, str(respdir)]) == 3
    err = capsys.readouterr().err
    assert "acceleration.csv" in err and "8x4" in err and "9x4" in err


def test_analyze_missing_file(spec, respdir):
    (respdir / "deflection.csv").unlink()
    assert main(["analyze", spec, str(respdir)]) == 3


def test_analyze_degenerate_signal(spec, respdir):
    text = "run_id,r1,r2,r3,r4\n" + "".join(f"{i},0,0,0,0\n" for i in range(1, 10))
    (respdir / "acceleration.csv").write_text(text)
    assert main(["analyze", spec, str(respdir)]) == 4


def _rho(spec, respdir, tmp_path, *extra):
    out = tmp_path / "r.json"
    assert main(["analyze", spec, str(respdir), "-o", str(out), *extra]) == 0
    return json.loads(out.read_text())["grey"]["rho"]


def test_rho_precedence(spec, respdir, tmp_path, monkeypatch):
    monkeypatch.delenv("ROBUST_DOE_RHO", raising=False)
    assert _rho(spec, respdir, tmp_path) == 0.5
    monkeypatch.setenv("ROBUST_DOE_RHO", "0.8")
    assert _rho(spec, respdir, tmp_path) == 0.8
    assert _rho(spec, respdir, tmp_path, "--rho", "0.3") == 0.3
    monkeypatch.setenv("ROBUST_DOE_RHO", "abc")
    assert main(["analyze", spec, str(respdir)]) == 64


def test_invalid_rho_exit(spec, respdir):
    assert main(["analyze", spec, str(respdir), "--rho", "0"]) == 2


def test_text_report(spec, respdir, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["analyze", spec, str(respdir), "--format", "text", "--no-banner", "-o", str(a)]) == 0
    assert main(["analyze", spec, str(respdir), "--format", "text", "--no-banner", "-o", str(b)]) == 0
    text = a.read_text()
    assert a.read_bytes() == b.read_bytes()
    assert "Optimal combination: A3 B3 C1" in text and "generated" not in text
    assert "Influence order: A > B > C" in text
    assert main(["analyze", spec, str(respdir), "--format", "text", "-o", str(a)]) == 0
    assert a.read_text().startswith("robust-doe ")


def test_confirm(spec, tables_dir, tmp_path):
    out = tmp_path / "c.json"
    before, after = str(tables_dir / "table14_before.csv"), str(tables_dir / "table14_after.csv")
    assert main(["confirm", before, after, spec, "-o", str(out)]) == 0
    entries = {e["objective"]: e for e in json.loads(out.read_text())["entries"]}
    assert entries["deflection"]["mean_reduction_pct"] == pytest.approx(49.1, abs=0.1)
    assert entries["acceleration"]["mean_reduction_pct"] == pytest.approx(55.4, abs=0.1)
    assert entries["deflection"]["after_pass"] is True
    assert main(["confirm", before, before, spec, "-o", str(out)]) == 0
    same = json.loads(out.read_text())["entries"][0]
    assert same["mean_reduction_pct"] == 0 and same["snr_improvement_pct"] == 0


def test_confirm_threshold_failure(spec, tmp_path):
    before = tmp_path / "b.csv"
    before.write_text("objective,r1,r2\ndeflection,900,1200\n")
    after = tmp_path / "a.csv"
    after.write_text("objective,r1,r2\ndeflection,400,500\n")
    out = tmp_path / "c.txt"
    assert main(["confirm", str(before), str(after), spec, "--format", "text", "--no-banner", "-o", str(out)]) == 0
    text = out.read_text()
    assert "FAIL" in text and "< 1000 mm" in text


def test_gra_normalized_input(tables_dir, tmp_path):
    out = tmp_path / "g.csv"
    assert main(["gra", str(tables_dir / "table10_normalized.csv"), "--normalized", "-o", str(out)]) == 0
    rows = _rows(out)
    assert float(rows[0]["grd"]) == pytest.approx(0.342, abs=1e-3)
    assert [r["rank"] for r in rows][8] == "1"


def test_gra_raw_kinds(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text("run_id,x,y\n1,1,5\n2,2,4\n3,3,6\n")
    out = tmp_path / "g.csv"
    assert main(["gra", str(src), "--kinds", "smaller-better,larger-better", "-o", str(out)]) == 0
    assert _rows(out)[0]["norm_x"] == "1.0"
    assert main(["gra", str(src), "--kinds", "smaller-better"]) == 64
    assert main(["gra", str(src), "--weights", "0.5,0.6"]) == 2


def test_verify_array(capsys):
    assert main(["verify-array", "L18"]) == 0
    assert "pass" in capsys.readouterr().out
    assert main(["verify-array", "L99"]) == 2


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 64


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "robust_doe.cli", "verify-array", "L9"], capture_output=True, text=True)
    assert r.returncode == 0 and "L9(3^4): pass" in r.stdout
