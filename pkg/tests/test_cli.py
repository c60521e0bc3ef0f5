import json
import re
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from jordconf import cli
from jordconf.cli import build_catalog, main, run_suite
from jordconf.report import VerificationReport, report_emit
from jordconf.suites import Config

ROOT = Path(__file__).resolve().parent.parent
REPORT_SCHEMA = json.loads((ROOT / "schemas" / "report.schema.json").read_text())
CATALOG_SCHEMA = json.loads((ROOT / "schemas" / "catalog.schema.json").read_text())


def _failing_report():
    rep = VerificationReport("demo", {"n": 1})
    rep.check("demo.zero", "(a, b)", 0)
    rep.check("demo.nonzero", "(c, d)", "2*λ*S")
    return rep


def test_all_pass_json_summary():
    rep = VerificationReport("demo")
    rep.check("demo.zero", "x", 0)
    doc = json.loads(report_emit(rep, "json"))
    assert doc["summary"]["fail"] == 0
    jsonschema.validate(doc, REPORT_SCHEMA)


def test_failing_text_names_instance_and_residual():
    text = report_emit(_failing_report(), "text")
    assert "(c, d)" in text and "2*λ*S" in text
    assert "FAIL demo.nonzero" in text


def test_formats_agree_on_counts():
    rep = _failing_report()
    doc = json.loads(report_emit(rep, "json"))
    text = report_emit(rep, "text")
    m = re.search(r"summary: total=(\d+) pass=(\d+) fail=(\d+)", text)
    assert tuple(map(int, m.groups())) == (doc["summary"]["total"], doc["summary"]["pass"],
                                           doc["summary"]["fail"])


def test_unknown_format():
    with pytest.raises(ValueError):
        report_emit(_failing_report(), "xml")


def test_js1_suite_counts_and_schema():
    rep = run_suite("js1")
    assert rep.ok
    by_id = {}
    for e in rep.entries:
        by_id[e.check_id] = by_id.get(e.check_id, 0) + 1
    assert sum(v for k, v in by_id.items() if "jordan" in k) >= 2 ** 4
    assert rep.summary["total"] >= 3 * 2 ** 2 + 2 ** 4
    jsonschema.validate(json.loads(report_emit(rep, "json", timing=True)), REPORT_SCHEMA)


def test_reports_are_deterministic():
    a = report_emit(run_suite("kn", Config(n=2)), "json")
    b = report_emit(run_suite("kn", Config(n=2)), "json")
    assert a == b


def test_invalid_config_and_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("js1", Config(tmin=2, tmax=1))
    with pytest.raises(ValueError):
        run_suite("nope")


def test_exit_codes(monkeypatch, capsys):
    assert main(["--suite", "js1", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["suite"] == "js1"
    assert main(["--suite", "js1", "--max-tdeg", "-1"]) == 2

    def broken(cfg, rep):
        rep.check("broken.sign", "(x, y)", "1")

    monkeypatch.setitem(cli.RUNNERS, "js1", broken)
    assert main(["--suite", "js1"]) == 1


def test_fail_fast_stops_early(monkeypatch):
    def broken(cfg, rep):
        for i in range(5):
            rep.check("broken.sign", f"({i})", "1")

    monkeypatch.setitem(cli.RUNNERS, "js1", broken)
    rep = run_suite("js1", Config(fail_fast=True))
    assert rep.summary["fail"] == 1
    assert any("first failure" in n for n in rep.notes)


def test_output_file(tmp_path):
    out = tmp_path / "report.json"
    assert main(["--suite", "ck6", "--format", "json", "-o", str(out)]) == 0
    jsonschema.validate(json.loads(out.read_text()), REPORT_SCHEMA)


@pytest.mark.parametrize("name", ["J0", "JS1", "K2"])
def test_catalog_documents_validate(name):
    jsonschema.validate(build_catalog(name), CATALOG_SCHEMA)


def test_golden_catalogs_validate():
    for path in (ROOT / "catalogs").glob("*.json"):
        jsonschema.validate(json.loads(path.read_text(encoding="utf-8")), CATALOG_SCHEMA)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jordconf", "--catalog", "JS1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["symbols"] == ["S", "T"]
