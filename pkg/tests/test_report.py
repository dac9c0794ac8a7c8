import json
from pathlib import Path

import jsonschema
import pytest

from core.report import emit_report
from core.runner import RunConfig, run

SCHEMA = json.loads((Path(__file__).resolve().parent.parent / "data" / "report.schema.json").read_text(encoding="utf-8"))


@pytest.fixture
def validate():
    validator = jsonschema.Draft202012Validator(SCHEMA)

    def _validate(report) -> dict:
        doc = json.loads(emit_report(report, "json"))
        validator.validate(doc)
        return doc
    return _validate


def test_schema_is_well_formed():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


def test_empty_report_matches_schema(fixture_path, validate):
    doc = validate(run(RunConfig(files=[fixture_path("password_encryptor.tir")], rules=[7])))
    assert doc["findings"] == []
    assert doc["perRule"] == {"7": 0}


def test_one_finding_report_matches_schema(fixture_path, validate):
    doc = validate(run(RunConfig(files=[fixture_path("password_encryptor.tir")], rules=[1], budget=30)))
    assert [f["evidence"] for f in doc["findings"]] == ["defaultkey"]
    assert doc["config"]["budget"] == 30


def test_manifest_report_matches_schema(fixture_path, validate):
    doc = validate(run(RunConfig(manifest=fixture_path("ranger/project.manifest"), output_format="json")))
    assert doc["config"]["inputs"] == {"manifest": fixture_path("ranger/project.manifest")}
    assert doc["findings"]


def test_schema_rejects_unknown_finding_keys(fixture_path):
    doc = json.loads(emit_report(run(RunConfig(files=[fixture_path("password_encryptor.tir")], rules=[1])), "json"))
    doc["findings"][0]["confidence"] = 0.5
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, SCHEMA, cls=jsonschema.Draft202012Validator)
