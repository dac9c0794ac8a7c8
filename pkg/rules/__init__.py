from typing import Callable

from core.session import AnalysisSession
from rules.bruteforce import check_asym_key_size, check_broken_hash, check_broken_symmetric, check_pbe_iterations
from rules.cpa import check_ecb, check_static_iv, check_static_salt
from rules.prng import check_seeds, check_untrusted_prng
from rules.registry import EXECUTION_ORDER, RULES, Finding, RuleSpec, Severity
from rules.secrets import check_keystore_passwords, check_pbe_passwords, check_predictable_keys
from rules.ssl import check_hostname_verifier, check_http, check_ssl_socket, check_trust_manager

Checker = Callable[[AnalysisSession], list[Finding]]

CHECKERS: dict[int, Checker] = {
    1: check_predictable_keys,
    2: check_pbe_passwords,
    3: check_keystore_passwords,
    4: check_hostname_verifier,
    5: check_trust_manager,
    6: check_ssl_socket,
    7: check_http,
    8: check_seeds,
    9: check_untrusted_prng,
    10: check_static_salt,
    11: check_ecb,
    12: check_static_iv,
    13: check_pbe_iterations,
    14: check_broken_symmetric,
    15: check_asym_key_size,
    16: check_broken_hash,
}

__all__ = ["CHECKERS", "EXECUTION_ORDER", "RULES", "Checker", "Finding", "RuleSpec", "Severity"]
