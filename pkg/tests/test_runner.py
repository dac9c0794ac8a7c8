import io
import json

import pytest

from core.logging import StructuredLogger
from core.report import emit_report, report_document
from core.runner import ConfigError, RunConfig, analyze_program, run
from core.session import AnalysisSession
from rules.registry import Severity


def _ranger(fixture_path, **options):
    return RunConfig(manifest=fixture_path("ranger/project.manifest"), output_format="json", **options)


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(files=["a.tir"], depth=-1)
    with pytest.raises(ConfigError):
        RunConfig(files=["a.tir"], rules=[0])
    with pytest.raises(ConfigError):
        RunConfig(files=["a.tir"], budget=-1)
    with pytest.raises(ConfigError):
        RunConfig(files=["a.tir"], output_format="xml")


def test_no_inputs():
    with pytest.raises(ConfigError):
        run(RunConfig())


def test_password_encryptor_end_to_end(fixture_path):
    report = run(RunConfig(files=[fixture_path("password_encryptor.tir")]))
    assert [(f.rule_id, f.evidence, f.severity) for f in report.findings] == [(1, "defaultkey", Severity.HIGH)]
    assert report.exit_code() == 1
    assert report.per_rule[1] == 1


def test_password_encryptor_without_refinement_counts_candidates(fixture_path):
    report = run(RunConfig(files=[fixture_path("password_encryptor.tir")], rules=[1], refine=False))
    assert len(report.findings) >= 4
    assert all(n == 0 for n in report.per_ri.values())


def test_refinement_counts(fixture_path):
    report = run(RunConfig(files=[fixture_path("password_encryptor.tir")], rules=[1]))
    assert report.per_ri["RI-I"] >= 1
    assert report.per_ri["RI-II"] >= 1
    assert report.per_ri["RI-III"] >= 1
    before, after = report.candidates[1]
    assert before >= 4 and after == 1


def test_fail_on_threshold(fixture_path):
    low_only = [fixture_path("infeasible_iteration.tir")]
    assert run(RunConfig(files=low_only)).exit_code() == 1
    assert run(RunConfig(files=low_only, fail_on=Severity.HIGH)).exit_code() == 0


def test_zero_budget_gives_partial_report(load_fixture):
    result = analyze_program(load_fixture("password_encryptor.tir"), RunConfig(files=["password_encryptor.tir"], budget=0))
    assert result.partial
    assert result.completed == []
    assert result.findings == []


def test_ranger_findings_are_not_double_counted(fixture_path):
    report = run(_ranger(fixture_path))
    assert sorted(f.rule_id for f in report.findings) == [7, 11, 13, 14, 16]
    shared = [f for f in report.findings if f.class_name.endswith("CredentialBuilder")]
    assert {f.rule_id for f in shared} == {13, 16}
    assert {f.root for f in shared} == {"plugins-kms"}
    iterations = next(f for f in report.findings if f.rule_id == 13)
    assert (iterations.line, iterations.evidence) == (17, "1")


def test_ranger_test_roots_are_opt_in(fixture_path):
    report = run(_ranger(fixture_path, include_tests=True))
    assert sorted(f.rule_id for f in report.findings) == [7, 9, 11, 13, 14, 16]


def test_reports_are_byte_identical(fixture_path):
    first = emit_report(run(_ranger(fixture_path)), "json")
    second = emit_report(run(_ranger(fixture_path)), "json")
    assert first == second


def test_parallel_roots_match_serial(fixture_path):
    serial = emit_report(run(_ranger(fixture_path)), "json")
    parallel = emit_report(run(_ranger(fixture_path, jobs=2)), "json")
    assert json.loads(serial)["findings"] == json.loads(parallel)["findings"]


def test_json_document(fixture_path):
    report = run(RunConfig(files=[fixture_path("password_encryptor.tir")], rules=[1, 7]))
    doc = report_document(report)
    assert set(doc) == {"version", "config", "findings", "perRule", "perRI", "partialRoots"}
    assert doc["perRule"] == {"1": 1, "7": 0}
    assert set(doc["perRI"]) == {"RI-I", "RI-II", "RI-III", "RI-IV", "RI-V"}
    assert doc["config"]["rules"] == [1, 7]
    finding = doc["findings"][0]
    assert finding["evidence"] == "defaultkey"
    assert finding["class"] == "PasswordEncryptor"
    assert finding["root"] is None


def test_text_report(fixture_path):
    report = run(RunConfig(files=[fixture_path("password_encryptor.tir")], refine_breakdown=True))
    text = emit_report(report, "text").decode("utf-8")
    assert "== HIGH ==" in text
    assert "Rule 1: Predictable/constant cryptographic keys" in text
    assert "1 finding(s)" in text
    assert "Refinements removed:" in text


def test_structured_events_redact_evidence(load_fixture):
    stream = io.StringIO()
    slog = StructuredLogger("run1", enabled=True, stream=stream)
    analyze_program(load_fixture("password_encryptor.tir"), RunConfig(files=["password_encryptor.tir"], rules=[1]), slog=slog)
    events = [json.loads(line) for line in stream.getvalue().splitlines()]
    assert [e["event_type"] for e in events] == ["ROOT_START", "CHECKER_RUN", "REFINEMENT", "ROOT_DONE"]
    assert events[1]["data"]["evidence"] == ["[REDACTED]"]
    assert "defaultkey" not in stream.getvalue()


def test_structured_budget_event(load_fixture):
    stream = io.StringIO()
    slog = StructuredLogger("run2", enabled=True, stream=stream)
    analyze_program(load_fixture("password_encryptor.tir"), RunConfig(files=["password_encryptor.tir"], budget=0), slog=slog)
    types = [json.loads(line)["event_type"] for line in stream.getvalue().splitlines()]
    assert types == ["ROOT_START", "BUDGET_EXPIRED", "ROOT_DONE"]


ROTATION = """\
class Rotation {
  static method void a() {
    r1 = "k1"
    r2 = r1.<java.lang.String: byte[] getBytes()>()
    r3 = new javax.crypto.spec.SecretKeySpec
    specialinvoke r3.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>(r2, "AES")
    return
  }
  static method void b() {
    r1 = "k2"
    r2 = r1.<java.lang.String: byte[] getBytes()>()
    r3 = new javax.crypto.spec.SecretKeySpec
    specialinvoke r3.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>(r2, "AES")
    return
  }
}
"""


def test_budget_running_out_inside_a_rule(parse, monkeypatch):
    checks = []

    def expired(self):
        checks.append(1)
        return len(checks) > 2

    # one check before rule 1, then one per call site
    monkeypatch.setattr(AnalysisSession, "expired", expired)
    stream = io.StringIO()
    slog = StructuredLogger("run3", enabled=True, stream=stream)
    result = analyze_program(parse(ROTATION), RunConfig(files=["<memory>"], rules=[1, 2], budget=60), slog=slog)
    assert result.partial
    assert result.completed == []
    assert [(f.rule_id, f.line, f.evidence) for f in result.findings] == [(1, 6, "k1")]
    types = [json.loads(line)["event_type"] for line in stream.getvalue().splitlines()]
    assert types == ["ROOT_START", "BUDGET_EXPIRED", "ROOT_DONE"]


def test_budget_is_not_consulted_without_one(parse):
    result = analyze_program(parse(ROTATION), RunConfig(files=["<memory>"], rules=[1]))
    assert not result.partial
    assert result.completed == [1]
    assert [f.evidence for f in result.findings] == ["k1", "k2"]
