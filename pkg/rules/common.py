"""
Shared pipeline for rules that look for constant or predictable values.

For each criterion row the API's call sites are sliced backwards across
methods, the candidates are (optionally) refined, and every survivor the
rule's `accept` predicate likes becomes a Finding.
"""
from __future__ import annotations

import logging
from typing import Callable, Iterable, Optional, Union

from core.backward import ConstantCandidate, PredictableCall, SliceResult, SlicingCriterion
from core.callgraph import CallSite, call_sites_of
from core.forward import track_data_only_constant
from core.ir import ConstInt, ConstLong, ConstString, Instruction, MethodSig
from core.refine import RefinementContext, apply_refinements
from core.session import AnalysisSession
from rules.registry import DATA_ONLY_RULES, Criterion, Finding, RuleSpec

logger = logging.getLogger(__name__)

Candidate = Union[ConstantCandidate, PredictableCall]
Accept = Callable[[Candidate], bool]


def accept_any(cand: Candidate) -> bool:
    return True


def string_value(cand: Candidate) -> Optional[str]:
    if isinstance(cand, ConstantCandidate) and isinstance(cand.value, ConstString):
        return cand.value.text
    return None


def int_value(cand: Candidate) -> Optional[int]:
    if isinstance(cand, ConstantCandidate) and isinstance(cand.value, (ConstInt, ConstLong)):
        return cand.value.value
    return None


def algorithm_token(text: str) -> str:
    """`AES/CBC/PKCS5Padding` -> `AES`; matching is case-insensitive."""
    return text.split("/", 1)[0].strip().upper()


def collect_candidates(results: Iterable[SliceResult]) -> list[Candidate]:
    seen = set()
    out: list[Candidate] = []
    for result in results:
        for cand in (*result.constants, *result.predictable_calls):
            if cand not in seen:
                seen.add(cand)
                out.append(cand)
    return out


def slice_argument(session: AnalysisSession, site: CallSite, param: int) -> list[SliceResult]:
    return session.slicer.inter(SlicingCriterion.inter_param(site, [param]))


def refined_candidates(
    session: AnalysisSession,
    rule: RuleSpec,
    criterion: Criterion,
    results: list[SliceResult],
) -> list[Candidate]:
    """Candidates of one criterion site after data-only tracking and refinement."""
    candidates = collect_candidates(results)
    if not session.refine:
        session.record_refinement(rule.id, len(candidates), len(candidates))
        return candidates
    kept = candidates
    if rule.id in DATA_ONLY_RULES:
        kept = [
            c for c in kept
            if not isinstance(c, ConstantCandidate) or track_data_only_constant(results, c)
        ]
    ctx = RefinementContext(rule.id, criterion.kind, rule.forbid_null, rule.forbid_empty_string)
    kept, log = apply_refinements(kept, ctx)
    session.record_refinement(rule.id, len(candidates), len(kept), log)
    return kept


def finding_for(session: AnalysisSession, rule: RuleSpec, cand: Candidate) -> Finding:
    site = cand.site
    return Finding(
        rule_id=rule.id,
        severity=rule.severity,
        file=site.file,
        class_name=site.method.owner,
        method=site.method.name,
        line=site.line,
        evidence=cand.text,
        root=session.root,
    )


def finding_at(
    session: AnalysisSession,
    rule: RuleSpec,
    method: MethodSig,
    instruction: Instruction,
    evidence: str,
) -> Finding:
    return Finding(
        rule_id=rule.id,
        severity=rule.severity,
        file=session.program.source_of(method.owner),
        class_name=method.owner,
        method=method.name,
        line=instruction.line,
        evidence=evidence,
        root=session.root,
    )


def dedupe(findings: Iterable[Finding]) -> list[Finding]:
    unique: dict[tuple, Finding] = {}
    for f in findings:
        unique.setdefault(f.dedup_key, f)
    return sorted(unique.values(), key=lambda f: f.sort_key)


def constant_findings(
    session: AnalysisSession,
    rule: RuleSpec,
    accept: Accept = accept_any,
    criteria: Optional[Iterable[Criterion]] = None,
) -> list[Finding]:
    findings = []
    for criterion in criteria if criteria is not None else rule.criteria:
        for site in call_sites_of(session.graph, criterion.api):
            if session.out_of_time():
                return dedupe(findings)
            results = slice_argument(session, site, criterion.param_index)
            for cand in refined_candidates(session, rule, criterion, results):
                if accept(cand):
                    findings.append(finding_for(session, rule, cand))
    logger.debug(f"rule {rule.id}: {len(findings)} finding(s) before dedup")
    return dedupe(findings)
