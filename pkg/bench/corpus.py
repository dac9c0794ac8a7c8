"""
Benchmark corpus: one directory per case holding `case.tir` and `case.expect`.

    data/bench/<category>/<ruleNN-slug>/case.tir
    data/bench/<category>/<ruleNN-slug>/case.expect

`case.expect` lists `expect <ruleId> <line>` entries, or the single token
`clean` for a correct API use.
"""
from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass
from pathlib import Path

from core.parser import source_lines

logger = logging.getLogger(__name__)

CATEGORIES = ("basic", "interprocTwo", "interprocMulti", "fieldSensitive", "fpTest", "correctUse")
ADVANCED = CATEGORIES[1:]
COMMON_RULES = frozenset({1, 2, 3, 11, 14, 16})

_CASE_DIR_RE = re.compile(r"^rule(?P<rule>\d{1,2})-[\w\-]+$")
_EXPECT_RE = re.compile(r"^expect\s+(?P<rule>\d+)\s+(?P<line>\d+)$")
_MARKER_RE = re.compile(r"#\s*expect\s+(?P<rule>\d+)\b")


class BenchCaseError(ValueError):
    pass


@dataclass(frozen=True)
class BenchCase:
    id: str
    rule_id: int
    category: str
    program: Path
    expected: tuple[tuple[int, int], ...] = ()

    @property
    def is_clean(self) -> bool:
        return not self.expected

    @property
    def is_advanced(self) -> bool:
        return self.category in ADVANCED


def parse_expect(text: str, source: str = "") -> list[tuple[int, int]]:
    entries = []
    clean = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "clean":
            clean = True
            continue
        m = _EXPECT_RE.match(line)
        if m is None:
            raise BenchCaseError(f"{source}:{lineno}: expected 'expect <rule> <line>' or 'clean', got {line!r}")
        entries.append((int(m["rule"]), int(m["line"])))
    if clean and entries:
        raise BenchCaseError(f"{source}: 'clean' cannot be combined with expectations")
    if not clean and not entries:
        raise BenchCaseError(f"{source}: no expectations and not marked clean")
    return sorted(entries)


def expect_markers(tir_text: str) -> list[tuple[int, int]]:
    """(rule, line) pairs from `# expect N` comments in a TIR file."""
    found = []
    for lineno, line in enumerate(source_lines(tir_text), start=1):
        for m in _MARKER_RE.finditer(line):
            found.append((int(m["rule"]), lineno))
    return sorted(found)


def load_case(case_dir: Path) -> BenchCase:
    case_dir = Path(case_dir)
    m = _CASE_DIR_RE.match(case_dir.name)
    if m is None:
        raise BenchCaseError(f"{case_dir}: directory name must look like ruleNN-slug")
    category = case_dir.parent.name
    if category not in CATEGORIES:
        raise BenchCaseError(f"{case_dir}: unknown category {category!r}")
    program = case_dir / "case.tir"
    expect = case_dir / "case.expect"
    if not program.is_file() or not expect.is_file():
        raise BenchCaseError(f"{case_dir}: needs case.tir and case.expect")

    expected = parse_expect(expect.read_text(encoding="utf-8"), str(expect))
    lines = source_lines(program.read_text(encoding="utf-8"))
    for rule, line in expected:
        if not 1 <= line <= len(lines) or not lines[line - 1].split("#", 1)[0].strip():
            raise BenchCaseError(f"{expect}: rule {rule} expected at line {line}, which holds no instruction")
    return BenchCase(f"{category}/{case_dir.name}", int(m["rule"]), category, program, tuple(expected))


def load_corpus(root) -> list[BenchCase]:
    root = Path(root)
    if not root.is_dir():
        raise BenchCaseError(f"{root}: not a directory")
    cases = []
    for category in CATEGORIES:
        cat_dir = root / category
        if not cat_dir.is_dir():
            continue
        for name in sorted(os.listdir(cat_dir)):
            if (cat_dir / name).is_dir():
                cases.append(load_case(cat_dir / name))
    logger.info(f"loaded {len(cases)} bench case(s) from {root}")
    return cases
