"""
Bench runner: analyze every corpus case and score it.
"""
from __future__ import annotations

import logging
import time
from multiprocessing import Pool

from bench.corpus import BenchCase, load_corpus
from bench.scorer import CaseScore, ScoreReport, build_score_report, score_findings
from core.project import program_from_files
from core.runner import RunConfig, analyze_program

logger = logging.getLogger(__name__)


def run_case(case: BenchCase, cfg: RunConfig) -> CaseScore:
    program = program_from_files([str(case.program)])
    result = analyze_program(program, cfg)
    actual = sorted((f.rule_id, f.line) for f in result.findings if f.rule_id in cfg.rules)
    expected = [e for e in case.expected if e[0] in cfg.rules]
    tp, fp, fn = score_findings(expected, actual)
    if fp or fn:
        logger.info(f"{case.id}: expected {expected}, got {actual}")
    return CaseScore(case, tp, fp, fn, actual)


def run_bench(corpus_dir, cfg: RunConfig) -> ScoreReport:
    """Score the analyzer on every case whose rule is selected."""
    started = time.monotonic()
    cases = [c for c in load_corpus(corpus_dir) if c.rule_id in cfg.rules]
    if cfg.jobs > 1 and len(cases) > 1:
        with Pool(cfg.jobs) as pool:
            scores = pool.starmap(run_case, [(case, cfg) for case in cases])
    else:
        scores = [run_case(case, cfg) for case in cases]
    report = build_score_report(scores)
    overall = report.overall
    logger.info(
        f"bench: {len(cases)} case(s), TP={overall.tp} FP={overall.fp} FN={overall.fn} "
        f"in {time.monotonic() - started:.1f}s"
    )
    return report
