"""
Rules 1-3: predictable keys and passwords.
"""
from core.session import AnalysisSession
from rules.common import constant_findings
from rules.registry import RULES, Finding


def check_predictable_keys(session: AnalysisSession) -> list[Finding]:
    return constant_findings(session, RULES[1])


def check_pbe_passwords(session: AnalysisSession) -> list[Finding]:
    return constant_findings(session, RULES[2])


def check_keystore_passwords(session: AnalysisSession) -> list[Finding]:
    return constant_findings(session, RULES[3])

