import json

import numpy as np
import pytest

from markovia.errors import ConfigError, SchemaError
from markovia.report import Check, DiagnosticReport, Verdict, merge_reports
from markovia.serialize import jsonable, read_report, report_to_json, write_csv, write_report


def sample_report(name="sample", seed=1):
    report = DiagnosticReport(name=name, anchor="markov.pairwise", tolerance=1e-9, seed=seed)
    report.add("first", True, detail="ok", gap=np.float64(1e-12))
    report.add("second", Verdict.INCONCLUSIVE, witnesses=[[1, 2]], steps=np.int64(3))
    report.traces["rows"] = [{"n": 1, "value": 0.5}]
    report.notes.append("a note")
    return report


def test_verdict_severity_and_exit_codes():
    assert [v.exit_code for v in Verdict] == [0, 0, 3, 2, 2]
    assert Verdict.SUPPORTED.ok
    assert not Verdict.INCONCLUSIVE.ok
    assert Verdict.of(True) is Verdict.PASS
    assert Verdict.of(False) is Verdict.FAIL


def test_worst_keeps_the_first_among_equals():
    assert Verdict.worst([]) is Verdict.PASS
    assert Verdict.worst([], Verdict.INCONCLUSIVE) is Verdict.INCONCLUSIVE
    assert Verdict.worst([Verdict.SUPPORTED, Verdict.PASS]) is Verdict.SUPPORTED
    assert Verdict.worst([Verdict.REFUTED, Verdict.INCONCLUSIVE, Verdict.FAIL]) is Verdict.REFUTED


def test_report_verdict_and_failures():
    report = sample_report()
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.count(Verdict.PASS) == 1
    assert not report.has_failures()
    report.add("third", False)
    assert report.verdict is Verdict.FAIL
    assert [c.name for c in report.failures()] == ["third"]
    assert report.checks[0].anchor == "markov.pairwise"
    assert str(report.checks[2]) == "third: fail"


def test_dict_round_trip_keeps_checks():
    report = sample_report()
    data = json.loads(report_to_json(report))
    assert data["schema"] == "markovia-report/1"
    assert data["checks"][0]["values"] == {"gap": 1e-12}
    back = DiagnosticReport.from_dict(data)
    assert back.verdict is report.verdict
    assert [c.name for c in back.checks] == ["first", "second"]
    assert back.checks[1].witnesses == [[1, 2]]
    assert back.notes == ["a note"]


def test_schema_is_checked():
    with pytest.raises(SchemaError, match="markovia-report/1"):
        DiagnosticReport.from_dict({"schema": "other/2", "property": "x"}, "r.json")
    with pytest.raises(SchemaError):
        DiagnosticReport.from_dict([1, 2])


def test_jsonable_handles_numpy_and_non_finite():
    value = {1: (np.float32(0.5), np.inf, -np.inf, np.nan), "a": np.arange(3), "b": np.bool_(True)}
    assert jsonable(value) == {"1": [0.5, "inf", "-inf", "nan"], "a": [0, 1, 2], "b": True}


def test_write_report_puts_timestamps_in_sidecar(tmp_path):
    path = tmp_path / "r.json"
    sidecar = write_report(sample_report(), path, started=0.0)
    assert sidecar.name == "r.json.sidecar.json"
    meta = json.loads(sidecar.read_text())
    assert meta["report"] == "r.json"
    assert "generated_at" in meta
    assert "generated_at" not in path.read_text()
    assert read_report(path).name == "sample"


def test_read_report_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"schema":\n  oops}')
    with pytest.raises(ConfigError) as info:
        read_report(broken)
    assert info.value.line == 2
    with pytest.raises(ConfigError):
        read_report(tmp_path / "missing.json")


def test_merge_takes_the_worst_and_sections_each_source():
    a = sample_report("a", seed=1)
    b = DiagnosticReport(name="b", seed=2, tolerance=1e-9)
    b.add("broken", Verdict.REFUTED)
    b.traces["rows"] = [{"n": 2}]
    merged = merge_reports([a, b])
    assert merged.name == "a+b"
    assert merged.verdict is Verdict.REFUTED
    assert merged.seed is None
    assert merged.tolerance == 1e-9
    assert {c.section for c in merged.checks} == {"a", "b"}
    assert set(merged.traces) == {"rows", "b/rows"}
    assert merge_reports([a]) is a
    with pytest.raises(ValueError):
        merge_reports([])


def test_absorb_keeps_existing_sections():
    inner = DiagnosticReport(name="inner")
    inner.checks.append(Check("c", Verdict.PASS, section="kept"))
    outer = DiagnosticReport(name="outer")
    outer.absorb(inner)
    assert outer.checks[0].section == "kept"


def test_write_csv_uses_fixed_columns(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, ["n", "v", "value"], [{"n": 1, "v": (0, 1), "value": 0.1, "extra": 5}, {"n": 2}])
    assert path.read_text().splitlines() == ["n,v,value", "1,01,0.1", "2,,"]


def test_merge_of_pass_and_inconclusive_is_inconclusive():
    good = DiagnosticReport(name="good")
    good.add("fine", True)
    unsure = DiagnosticReport(name="unsure")
    unsure.add("open", Verdict.INCONCLUSIVE)
    assert merge_reports([good, good]).verdict is Verdict.PASS
    assert merge_reports([good, unsure]).verdict is Verdict.INCONCLUSIVE


def test_merging_a_report_with_itself_keeps_verdicts():
    report = sample_report()
    merged = merge_reports([report, report])
    assert merged.name == "sample"
    assert [c.verdict for c in merged.checks] == [c.verdict for c in report.checks] * 2
    assert merged.verdict is report.verdict
