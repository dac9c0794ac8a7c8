"""
Rules 13-16: brute-force attack risks.
"""
from __future__ import annotations

import logging

import config
from core.callgraph import call_sites_of
from core.forward import OriginError, intra_forward_slice
from core.ir import Invoke
from core.session import AnalysisSession
from rules.common import (
    algorithm_token,
    constant_findings,
    dedupe,
    finding_at,
    int_value,
    refined_candidates,
    slice_argument,
    string_value,
)
from rules.registry import KEY_PAIR_GENERATOR_ROWS, KEY_SIZE_ROWS, RULES, Finding

logger = logging.getLogger(__name__)


def check_pbe_iterations(session: AnalysisSession) -> list[Finding]:
    rule = RULES[13]
    minimum = rule.thresholds["iterations"]

    def too_few(cand) -> bool:
        value = int_value(cand)
        return value is not None and value < minimum

    return constant_findings(session, rule, too_few)


def _names_in(names: frozenset[str]):
    def matches(cand) -> bool:
        text = string_value(cand)
        return text is not None and algorithm_token(text) in names
    return matches


def check_broken_symmetric(session: AnalysisSession) -> list[Finding]:
    rule = RULES[14]
    return constant_findings(session, rule, _names_in(rule.insecure_names))


def check_broken_hash(session: AnalysisSession) -> list[Finding]:
    rule = RULES[16]
    return constant_findings(session, rule, _names_in(rule.insecure_names))


def check_asym_key_size(session: AnalysisSession) -> list[Finding]:
    """
    Weak RSA/DSA/DH/EC key pairs.

    The generator returned by `getInstance` is followed forward inside its
    method. Without an `initialize` call the provider default applies;
    otherwise the size argument of each `initialize` is sliced backwards.
    """
    rule = RULES[15]
    program = session.program
    size_rows = {row.api: row for row in KEY_SIZE_ROWS}
    findings = []
    for criterion in KEY_PAIR_GENERATOR_ROWS:
        for site in call_sites_of(session.graph, criterion.api):
            if session.out_of_time():
                return dedupe(findings)
            candidates = refined_candidates(session, rule, criterion, slice_argument(session, site, 0))
            algorithms = sorted({algorithm_token(text) for c in candidates if (text := string_value(c)) is not None})
            known = [alg for alg in algorithms if alg in config.ASYMMETRIC_MIN_KEY_SIZE]
            if not known:
                continue
            method = program.method(site.caller)
            try:
                forward = intra_forward_slice(method, site.instruction_index, program)
            except OriginError:
                continue
            inits = [
                (i, method.body[i]) for i in forward.indices
                if isinstance(method.body[i], Invoke) and method.body[i].callee in size_rows
            ]
            if not inits:
                for alg in known:
                    if alg in config.ASYMMETRIC_WEAK_DEFAULTS:
                        findings.append(finding_at(session, rule, site.caller, method.body[site.instruction_index],
                                                   f"{alg} default key size"))
                continue
            for i, init in inits:
                init_site = session.graph.site_at[(site.caller, i)]
                row = size_rows[init.callee]
                sizes = sorted({
                    value for c in refined_candidates(session, rule, row, slice_argument(session, init_site, 0))
                    if (value := int_value(c)) is not None
                })
                for alg in known:
                    for size in sizes:
                        if size < config.ASYMMETRIC_MIN_KEY_SIZE[alg]:
                            findings.append(finding_at(session, rule, site.caller, init, f"{alg} {size}"))
    logger.debug(f"rule 15: {len(findings)} finding(s)")
    return dedupe(findings)
