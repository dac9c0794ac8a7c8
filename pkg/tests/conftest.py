import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from core.parser import parse_program  # noqa: E402
from core.project import program_from_files  # noqa: E402
from core.runner import RunConfig, analyze_program  # noqa: E402

FIXTURES = Path(__file__).resolve().parent / "fixtures"
CORPUS = ROOT / "data" / "bench"


@pytest.fixture
def fixture_path():
    def _path(name: str) -> str:
        return str(FIXTURES / name)
    return _path


@pytest.fixture
def load_fixture():
    def _load(name: str):
        return program_from_files([str(FIXTURES / name)])
    return _load


@pytest.fixture
def parse():
    def _parse(text: str, source: str = "inline.tir"):
        return parse_program(text, source)
    return _parse


@pytest.fixture
def findings_for():
    """Run a rule subset over one fixture program and return its findings."""
    def _run(program, rules, **options):
        cfg = RunConfig(files=["<memory>"], rules=list(rules), **options)
        return analyze_program(program, cfg).findings
    return _run
