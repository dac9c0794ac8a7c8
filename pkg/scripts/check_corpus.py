#!/usr/bin/env python3
"""
Check the benchmark corpus: composition per category and rule, and agreement
between `case.expect` files and the `# expect` markers in each program.
"""
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from bench.corpus import CATEGORIES, BenchCaseError, expect_markers, load_corpus  # noqa: E402


def check_corpus(corpus_dir: str = "data/bench") -> bool:
    """Print the corpus breakdown; return False on any disagreement."""
    try:
        cases = load_corpus(Path(corpus_dir))
    except BenchCaseError as e:
        print(f"❌ {e}")
        return False

    print(f"Total cases: {len(cases)}\n")

    by_category = Counter(c.category for c in cases)
    clean = Counter(c.category for c in cases if c.is_clean)
    print("Category breakdown:")
    for category in CATEGORIES:
        print(f"  {category}: {by_category[category]} ({clean[category]} clean)")

    expected = Counter(rule for c in cases for rule, _ in c.expected)
    print("\nExpected findings per rule:")
    for rule in sorted(expected):
        print(f"  rule {rule:2d}: {expected[rule]}")
    print(f"  total: {sum(expected.values())}")

    mismatches = []
    for case in cases:
        markers = expect_markers(case.program.read_text(encoding="utf-8"))
        if markers != list(case.expected):
            mismatches.append((case.id, markers, list(case.expected)))

    if mismatches:
        print("\n❌ MARKERS DISAGREE WITH EXPECT FILES:")
        for case_id, markers, listed in mismatches:
            print(f"  {case_id}: markers {markers} vs expect {listed}")
        return False

    print("\n✓ Markers agree with expect files")
    return True


if __name__ == "__main__":
    ok = check_corpus(sys.argv[1] if len(sys.argv) > 1 else "data/bench")
    sys.exit(0 if ok else 1)
