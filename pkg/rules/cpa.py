"""
Rules 10-12: chosen-plaintext attack risks (static salts, ECB, static IVs).
"""
import config
from core.session import AnalysisSession
from rules.common import algorithm_token, constant_findings, string_value
from rules.registry import RULES, Finding


def check_static_salt(session: AnalysisSession) -> list[Finding]:
    return constant_findings(session, RULES[10])


def _is_ecb(cand) -> bool:
    text = string_value(cand)
    if text is None or algorithm_token(text) not in config.BLOCK_CIPHERS:
        return False
    parts = [p.strip().upper() for p in text.split("/")]
    # a bare algorithm name gets the provider default, which is ECB
    return len(parts) == 1 or parts[1] == "ECB"


def check_ecb(session: AnalysisSession) -> list[Finding]:
    return constant_findings(session, RULES[11], _is_ecb)


def check_static_iv(session: AnalysisSession) -> list[Finding]:
    """Any constant IV, whatever mode the cipher ends up in."""
    return constant_findings(session, RULES[12])
