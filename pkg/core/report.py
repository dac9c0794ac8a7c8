"""
Report rendering: grouped text for people, a stable JSON document for tools.
"""
from __future__ import annotations

import json
from itertools import groupby

import config
from core.runner import Report
from rules.registry import RULES, Severity

_SEVERITY_NAMES = {Severity.HIGH: "HIGH", Severity.MEDIUM: "MEDIUM", Severity.LOW: "LOW"}


def report_document(report: Report) -> dict:
    return {
        "version": config.REPORT_VERSION,
        "config": report.config.echo(),
        "findings": [f.to_dict() for f in report.findings],
        "perRule": {str(rid): n for rid, n in sorted(report.per_rule.items())},
        "perRI": dict(sorted(report.per_ri.items())),
        "partialRoots": sorted(report.partial_roots),
    }


def _text(report: Report) -> str:
    lines = []
    ordered = sorted(report.findings, key=lambda f: (f.severity.rank, f.rule_id, f.file, f.line, f.evidence))
    for severity, by_severity in groupby(ordered, key=lambda f: f.severity):
        lines.append(f"== {_SEVERITY_NAMES[severity]} ==")
        for rule_id, by_rule in groupby(by_severity, key=lambda f: f.rule_id):
            lines.append(f"[{severity.value}] Rule {rule_id}: {RULES[rule_id].title}")
            for f in by_rule:
                root = f" ({f.root})" if f.root else ""
                lines.append(f"  {f.file}:{f.line}  {f.class_name}.{f.method}  {f.evidence}{root}")
        lines.append("")

    lines.append(f"{len(report.findings)} finding(s)")
    if report.partial_roots:
        lines.append(f"partial results (budget expired): {', '.join(sorted(report.partial_roots))}")

    if report.config.refine_breakdown:
        lines.append("")
        lines.append("Refinements removed:")
        for ri, n in sorted(report.per_ri.items()):
            lines.append(f"  {ri:<7} {n}")
        lines.append("Candidates per rule (before -> after):")
        for rid, (before, after) in sorted(report.candidates.items()):
            lines.append(f"  rule {rid:>2}: {before} -> {after}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (json.dumps(report_document(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")
    return _text(report).encode("utf-8")
