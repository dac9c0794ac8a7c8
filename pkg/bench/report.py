"""
Bench report generator: console tables, JSON and Markdown.
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.table import Table

from bench.corpus import CATEGORIES
from bench.scorer import Counts, ScoreReport
from rules.registry import RULES

_GROUP_ORDER = (*CATEGORIES, "advanced", "overall")


def score_report_document(score: ScoreReport) -> dict:
    return {
        "groups": {name: score.groups[name].to_dict() for name in _GROUP_ORDER if name in score.groups},
        "perRule": {str(rid): counts.to_dict() for rid, counts in score.per_rule.items()},
        "misses": [
            {"case": c.case.id, "expected": [list(e) for e in c.case.expected], "actual": [list(a) for a in c.actual]}
            for c in score.misses()
        ],
    }


def score_report_json(score: ScoreReport) -> str:
    return json.dumps(score_report_document(score), indent=2, sort_keys=True) + "\n"


def _row(name: str, counts: Counts) -> list[str]:
    return [
        name, str(counts.gtp), str(counts.tp), str(counts.fp), str(counts.fn),
        f"{counts.precision:.1f}", f"{counts.recall:.1f}", f"{counts.fpr:.1f}", f"{counts.fnr:.1f}",
    ]


def print_score_report(score: ScoreReport, console: Optional[Console] = None) -> None:
    console = console or Console()
    table = Table(title="Benchmark by category")
    for header in ("Group", "GTP", "TP", "FP", "FN", "Prec.", "Rec.", "FPR", "FNR"):
        table.add_column(header, justify="left" if header == "Group" else "right")
    for name in _GROUP_ORDER:
        counts = score.groups.get(name)
        if counts is not None and (counts.gtp or counts.tn or counts.fp):
            table.add_row(*_row(name, counts), style="bold" if name == "overall" else None)
    console.print(table)

    per_rule = Table(title="Benchmark by rule")
    for header in ("Rule", "GTP", "TP", "FP", "FN"):
        per_rule.add_column(header, justify="left" if header == "Rule" else "right")
    for rid, counts in score.per_rule.items():
        per_rule.add_row(f"{rid:>2} {RULES[rid].title}", str(counts.gtp), str(counts.tp), str(counts.fp), str(counts.fn))
    console.print(per_rule)

    for miss in score.misses():
        console.print(f"[yellow]{miss.case.id}[/yellow]: expected {list(miss.case.expected)}, got {miss.actual}")


def write_markdown_report(score: ScoreReport, output_path) -> Path:
    """Write the score tables as Markdown and return the path."""
    output_path = Path(output_path)
    lines = [
        "# Benchmark Report",
        "",
        f"**Generated:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}",
        "",
        "## By category",
        "",
        "| Group | GTP | TP | FP | FN | Prec. | Rec. | FPR | FNR |",
        "|-------|-----|----|----|----|-------|------|-----|-----|",
    ]
    for name in _GROUP_ORDER:
        counts = score.groups.get(name)
        if counts is not None:
            lines.append("| " + " | ".join(_row(name, counts)) + " |")
    lines.extend([
        "",
        "## By rule",
        "",
        "| Rule | GTP | TP | FP | FN |",
        "|------|-----|----|----|----|",
    ])
    for rid, counts in score.per_rule.items():
        lines.append(f"| {rid} {RULES[rid].title} | {counts.gtp} | {counts.tp} | {counts.fp} | {counts.fn} |")
    misses = score.misses()
    if misses:
        lines.extend(["", "## Misses", ""])
        for miss in misses:
            lines.append(f"- `{miss.case.id}`: expected {list(miss.case.expected)}, got {miss.actual}")
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return output_path
