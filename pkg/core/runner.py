"""
Run orchestration: roots, rules, budgets and the merged report.
"""
from __future__ import annotations

import logging
import time
import uuid
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Optional

import config
from core.ir import Program
from core.logging import StructuredLogger
from core.project import classes_for_root, dependency_dag, parse_manifest, program_from_files, root_subprojects
from core.refine import RI_IDS
from core.session import AnalysisSession
from rules import CHECKERS, EXECUTION_ORDER, RULES
from rules.registry import Finding, Severity

logger = logging.getLogger(__name__)

ALL_RULES = tuple(sorted(RULES))


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    files: list[str] = field(default_factory=list)
    manifest: Optional[str] = None
    rules: list[int] = field(default_factory=lambda: list(ALL_RULES))
    depth: int = config.ANALYZER_DEPTH
    refine: bool = True
    budget: Optional[float] = None
    output_format: str = "text"
    fail_on: Severity = Severity.LOW
    jobs: int = config.ANALYZER_JOBS
    check_client_trusted: bool = config.ANALYZER_CHECK_CLIENT_TRUSTED
    include_tests: bool = False
    refine_breakdown: bool = False
    structured_logs: bool = config.ANALYZER_STRUCTURED_LOGS
    redact_evidence: bool = config.ANALYZER_REDACT_EVIDENCE

    def __post_init__(self):
        if self.depth < 0:
            raise ConfigError("depth must be >= 0")
        unknown = [r for r in self.rules if r not in RULES]
        if unknown:
            raise ConfigError(f"unknown rule id(s): {unknown}")
        if self.budget is not None and self.budget < 0:
            raise ConfigError("budget must be >= 0")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.output_format not in ("text", "json"):
            raise ConfigError(f"unknown format {self.output_format!r}")
        self.rules = sorted(set(self.rules))

    def echo(self) -> dict:
        """The configuration as it appears in the machine-readable report."""
        return {
            "inputs": {"manifest": self.manifest} if self.manifest else {"files": list(self.files)},
            "rules": list(self.rules),
            "depth": self.depth,
            "refine": self.refine,
            "budget": self.budget,
            "failOn": self.fail_on.value,
            "checkClientTrusted": self.check_client_trusted,
            "includeTests": self.include_tests,
        }


@dataclass
class RootResult:
    root: Optional[str]
    findings: list[Finding] = field(default_factory=list)
    removed: dict[int, dict[str, int]] = field(default_factory=dict)
    candidates: dict[int, tuple[int, int]] = field(default_factory=dict)
    completed: list[int] = field(default_factory=list)
    partial: bool = False
    seconds: float = 0.0


@dataclass
class Report:
    config: RunConfig
    findings: list[Finding] = field(default_factory=list)
    per_rule: dict[int, int] = field(default_factory=dict)
    per_ri: dict[str, int] = field(default_factory=dict)
    candidates: dict[int, tuple[int, int]] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    partial_roots: list[str] = field(default_factory=list)

    def exit_code(self) -> int:
        """0 clean, 1 findings at or above the fail-on severity."""
        return 1 if any(f.severity.at_least(self.config.fail_on) for f in self.findings) else 0


def _root_label(root: Optional[str]) -> str:
    return root if root is not None else "<inputs>"


def analyze_program(program: Program, cfg: RunConfig, root: Optional[str] = None,
                    slog: Optional[StructuredLogger] = None) -> RootResult:
    """Run the selected rules over one program, stopping when the budget runs out."""
    slog = slog or StructuredLogger(uuid.uuid4().hex[:8])
    started = time.monotonic()
    deadline = started + cfg.budget if cfg.budget is not None else None
    session = AnalysisSession(
        program,
        root=root,
        depth=cfg.depth,
        refine=cfg.refine,
        check_client_trusted=cfg.check_client_trusted,
        deadline=deadline,
    )
    result = RootResult(root)
    order = [rid for rid in EXECUTION_ORDER if rid in cfg.rules]
    slog.log_root_start(root, sum(1 for c in program.classes.values() if not c.is_phantom), order)

    for rid in order:
        if session.expired():
            result.partial = True
            skipped = [r for r in order if r not in result.completed]
            logger.warning(f"{_root_label(root)}: budget expired, skipping rule(s) {skipped}")
            slog.log_budget_expired(root, list(result.completed), skipped)
            break
        t0 = time.monotonic()
        found = CHECKERS[rid](session)
        result.findings.extend(found)
        if session.interrupted:
            result.partial = True
            skipped = [r for r in order if r not in result.completed]
            logger.warning(f"{_root_label(root)}: budget expired during rule {rid}, skipping rule(s) {skipped}")
            slog.log_budget_expired(root, list(result.completed), skipped)
            break
        result.completed.append(rid)
        slog.log_checker_run(root, rid, found, int((time.monotonic() - t0) * 1000))
        if rid in session.counts:
            counts = session.counts[rid]
            removed = session.removals[rid].counts() if rid in session.removals else {}
            slog.log_refinement(root, rid, counts.before, counts.after, removed)

    result.removed = {rid: log.counts() for rid, log in session.removals.items()}
    result.candidates = {rid: (c.before, c.after) for rid, c in session.counts.items()}
    result.seconds = time.monotonic() - started
    slog.log_root_done(root, len(result.findings), int(result.seconds * 1000), result.partial)
    return result


def load_root(cfg: RunConfig, root: Optional[str]) -> Program:
    if cfg.manifest:
        return classes_for_root(parse_manifest(cfg.manifest), root)
    return program_from_files(cfg.files)


def _analyze_root(cfg: RunConfig, root: Optional[str], run_id: str) -> RootResult:
    slog = StructuredLogger(run_id, cfg.structured_logs, cfg.redact_evidence)
    return analyze_program(load_root(cfg, root), cfg, root, slog)


def plan_roots(cfg: RunConfig) -> list[Optional[str]]:
    if not cfg.manifest:
        if not cfg.files:
            raise ConfigError("no input: give .tir files or --manifest")
        return [None]
    manifest = parse_manifest(cfg.manifest)
    roots = root_subprojects(dependency_dag(manifest), include_tests=cfg.include_tests)
    logger.info(f"{len(roots)} root subproject(s): {', '.join(roots)}")
    return roots


def merge_results(cfg: RunConfig, results: list[RootResult]) -> Report:
    """Cross-root merge; the first root in sorted order owns a shared finding."""
    report = Report(cfg)
    seen = set()
    for result in sorted(results, key=lambda r: _root_label(r.root)):
        for finding in sorted(result.findings, key=lambda f: f.sort_key):
            if finding.dedup_key in seen:
                continue
            seen.add(finding.dedup_key)
            report.findings.append(finding)
        for rid, removed in result.removed.items():
            for ri, n in removed.items():
                report.per_ri[ri] = report.per_ri.get(ri, 0) + n
        for rid, (before, after) in result.candidates.items():
            b, a = report.candidates.get(rid, (0, 0))
            report.candidates[rid] = (b + before, a + after)
        report.timings[_root_label(result.root)] = result.seconds
        if result.partial:
            report.partial_roots.append(_root_label(result.root))
    report.findings.sort(key=lambda f: f.sort_key)
    report.per_rule = {rid: 0 for rid in cfg.rules}
    for finding in report.findings:
        report.per_rule[finding.rule_id] += 1
    report.per_ri = {ri: report.per_ri.get(ri, 0) for ri in RI_IDS}
    return report


def run(cfg: RunConfig) -> Report:
    run_id = uuid.uuid4().hex[:8]
    roots = plan_roots(cfg)
    if cfg.jobs > 1 and len(roots) > 1:
        with Pool(min(cfg.jobs, len(roots))) as pool:
            results = pool.starmap(_analyze_root, [(cfg, root, run_id) for root in roots])
    else:
        results = [_analyze_root(cfg, root, run_id) for root in roots]
    report = merge_results(cfg, results)
    for label, seconds in sorted(report.timings.items()):
        logger.info(f"{label}: {seconds:.2f}s")
    return report
