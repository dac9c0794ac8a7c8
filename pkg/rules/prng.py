"""
Rules 8-9: predictable seeds and insecure PRNGs.
"""
from core.ir import Invoke, InvokeKind
from core.session import AnalysisSession
from rules.common import constant_findings, dedupe, finding_at
from rules.registry import RULES, Finding


def check_seeds(session: AnalysisSession) -> list[Finding]:
    # getSeed/generateSeed results are assigned virtual invokes, so RI-I drops their arguments
    return constant_findings(session, RULES[8])


def check_untrusted_prng(session: AnalysisSession) -> list[Finding]:
    """Every java.util.Random instantiation."""
    rule = RULES[9]
    constructors = {criterion.api for criterion in rule.criteria}
    findings = []
    for _, method in session.program.concrete_methods():
        for ins in method.body:
            if isinstance(ins, Invoke) and ins.kind is InvokeKind.SPECIAL and ins.callee in constructors:
                findings.append(finding_at(session, rule, method.sig, ins, str(ins.callee)))
    return dedupe(findings)
