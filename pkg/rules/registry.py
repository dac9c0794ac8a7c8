"""
Rule registry: the 16 rules, their severities and slicing criteria.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import config
from core.ir import MethodSig
from core.parser import parse_signature
from core.refine import ValueKind


class Severity(str, Enum):
    HIGH = "H"
    MEDIUM = "M"
    LOW = "L"

    @property
    def rank(self) -> int:
        return {"H": 0, "M": 1, "L": 2}[self.value]

    def at_least(self, threshold: "Severity") -> bool:
        return self.rank <= threshold.rank


class AnalysisPlan(str, Enum):
    INTER_BACKWARD = "interBackward"
    INTER_BACKWARD_DATA_ONLY = "interBackward+dataOnlyForward"
    INTRA_BACKWARD = "intraBackward"
    INTRA_FORWARD = "intraForward"
    SEARCH = "search"
    COMBINATION = "combination"


@dataclass(frozen=True)
class Criterion:
    """One slicing criterion row: an API and the argument (or structural point) of interest."""
    row: str
    api: MethodSig
    param_index: Optional[int] = None
    kind: ValueKind = ValueKind.STRING
    structural: Optional[str] = None

    def __str__(self) -> str:
        point = f"#{self.param_index}" if self.param_index is not None else f" [{self.structural}]"
        return f"{self.row} {self.api}{point}"


@dataclass(frozen=True)
class RuleSpec:
    id: int
    title: str
    severity: Severity
    plan: AnalysisPlan
    criteria: tuple[Criterion, ...] = ()
    insecure_names: frozenset[str] = frozenset()
    thresholds: dict = field(default_factory=dict, compare=False, hash=False)
    forbid_null: bool = False
    forbid_empty_string: bool = False

    @property
    def uses_data_only_tracking(self) -> bool:
        return self.plan is AnalysisPlan.INTER_BACKWARD_DATA_ONLY


@dataclass(frozen=True)
class Finding:
    rule_id: int
    severity: Severity
    file: str
    class_name: str
    method: str
    line: int
    evidence: str
    root: Optional[str] = None

    @property
    def dedup_key(self) -> tuple:
        return (self.rule_id, self.class_name, self.method, self.line, self.evidence)

    @property
    def sort_key(self) -> tuple:
        return (self.rule_id, self.file, self.line, self.class_name, self.method, self.evidence)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule_id,
            "severity": self.severity.value,
            "file": self.file,
            "class": self.class_name,
            "method": self.method,
            "line": self.line,
            "evidence": self.evidence,
            "root": self.root,
        }


def _row(row: str, sig: str, param: Optional[int] = None, kind: ValueKind = ValueKind.STRING,
         structural: Optional[str] = None) -> Criterion:
    return Criterion(row, parse_signature(sig), param, kind, structural)


_STR = "java.lang.String"
_BYTES = ValueKind.BYTE_ARRAY
_CHARS = ValueKind.CHAR_ARRAY
_INT = ValueKind.INT

_CIPHER_ROWS = (
    _row("11.1", f"<javax.crypto.Cipher: javax.crypto.Cipher getInstance({_STR})>", 0),
    _row("11.2", f"<javax.crypto.Cipher: javax.crypto.Cipher getInstance({_STR},{_STR})>", 0),
    _row("11.3", f"<javax.crypto.Cipher: javax.crypto.Cipher getInstance({_STR},java.security.Provider)>", 0),
)

_KPG = "java.security.KeyPairGenerator"
_SPEC = "java.security.spec.AlgorithmParameterSpec"

KEY_PAIR_GENERATOR_ROWS = (
    _row("15.1", f"<{_KPG}: {_KPG} getInstance({_STR})>", 0),
    _row("15.2", f"<{_KPG}: {_KPG} getInstance({_STR},{_STR})>", 0),
    _row("15.3", f"<{_KPG}: {_KPG} getInstance({_STR},java.security.Provider)>", 0),
)

KEY_SIZE_ROWS = (
    _row("15.4", f"<{_KPG}: void initialize(int)>", 0, _INT),
    _row("15.5", f"<{_KPG}: void initialize(int,java.security.SecureRandom)>", 0, _INT),
    _row("15.6", f"<{_KPG}: void initialize({_SPEC})>", 0, _INT),
    _row("15.7", f"<{_KPG}: void initialize({_SPEC},java.security.SecureRandom)>", 0, _INT),
)

SOCKET_FACTORY_ROWS = (
    _row("6.1", "<javax.net.ssl.SSLSocketFactory: javax.net.SocketFactory getDefault()>", structural="create"),
    _row("6.2", "<javax.net.ssl.SSLContext: javax.net.ssl.SSLSocketFactory getSocketFactory()>",
         structural="create"),
)

HOSTNAME_VERIFIER_ROWS = (
    _row("4.1", f"<javax.net.ssl.HostnameVerifier: boolean verify({_STR},javax.net.ssl.SSLSession)>",
         structural="return"),
)

_CHAIN = "java.security.cert.X509Certificate[]"
TRUST_MANAGER_ROWS = (
    _row("5.1", f"<javax.net.ssl.X509TrustManager: void checkServerTrusted({_CHAIN},{_STR})>",
         structural="checkValidity"),
    _row("5.2", f"<javax.net.ssl.X509TrustManager: void checkServerTrusted({_CHAIN},{_STR})>",
         structural="throw"),
    _row("5.3", f"<javax.net.ssl.X509TrustManager: {_CHAIN} getAcceptedIssuers()>", structural="return"),
)

RANDOM_CONSTRUCTORS = (
    _row("9.1", "<java.util.Random: void <init>()>", structural="new"),
    _row("9.2", "<java.util.Random: void <init>(long)>", structural="new"),
)

RULES: dict[int, RuleSpec] = {
    1: RuleSpec(1, "Predictable/constant cryptographic keys", Severity.HIGH,
                AnalysisPlan.INTER_BACKWARD_DATA_ONLY, (
                    _row("1.1", f"<javax.crypto.spec.SecretKeySpec: void <init>(byte[],{_STR})>", 0, _BYTES),
                    _row("1.2", f"<javax.crypto.spec.SecretKeySpec: void <init>(byte[],int,int,{_STR})>", 0, _BYTES),
                ), forbid_null=True, forbid_empty_string=True),
    2: RuleSpec(2, "Predictable/constant passwords for PBE", Severity.HIGH,
                AnalysisPlan.INTER_BACKWARD_DATA_ONLY, (
                    _row("2.1", "<javax.crypto.spec.PBEKeySpec: void <init>(char[])>", 0, _CHARS),
                    _row("2.2", "<javax.crypto.spec.PBEKeySpec: void <init>(char[],byte[],int,int)>", 0, _CHARS),
                    _row("2.3", "<javax.crypto.spec.PBEKeySpec: void <init>(char[],byte[],int)>", 0, _CHARS),
                ), forbid_null=True, forbid_empty_string=True),
    3: RuleSpec(3, "Predictable/constant passwords for KeyStore", Severity.HIGH,
                AnalysisPlan.INTER_BACKWARD_DATA_ONLY, (
                    _row("3.1", "<java.security.KeyStore: void load(java.io.InputStream,char[])>", 1, _CHARS),
                    _row("3.2", "<java.security.KeyStore: void store(java.io.OutputStream,char[])>", 1, _CHARS),
                    _row("3.3", f"<java.security.KeyStore: void setKeyEntry({_STR},java.security.Key,char[],"
                                "java.security.cert.Certificate[])>", 2, _CHARS),
                    _row("3.4", f"<java.security.KeyStore: java.security.Key getKey({_STR},char[])>", 1, _CHARS),
                ), forbid_null=True, forbid_empty_string=True),
    4: RuleSpec(4, "Custom Hostname verifiers to accept all hosts", Severity.HIGH,
                AnalysisPlan.INTRA_BACKWARD, HOSTNAME_VERIFIER_ROWS),
    5: RuleSpec(5, "Custom TrustManager to trust all certificates", Severity.HIGH,
                AnalysisPlan.INTRA_BACKWARD, TRUST_MANAGER_ROWS),
    6: RuleSpec(6, "Custom SSLSocketFactory w/o manual Hostname verification", Severity.HIGH,
                AnalysisPlan.INTRA_FORWARD, SOCKET_FACTORY_ROWS),
    7: RuleSpec(7, "Occasional use of HTTP", Severity.HIGH, AnalysisPlan.INTER_BACKWARD, (
                    _row("7.1", f"<java.net.URL: void <init>({_STR})>", 0, ValueKind.URL),
                    _row("7.2", f"<java.net.URL: void <init>({_STR},{_STR},{_STR})>", 0, ValueKind.URL),
                    _row("7.3", f"<java.net.URL: void <init>({_STR},{_STR},int,{_STR})>", 0, ValueKind.URL),
                    _row("7.4", f"<okhttp3.Request$Builder: okhttp3.Request$Builder url({_STR})>", 0, ValueKind.URL),
                    _row("7.5", f"<retrofit2.Retrofit$Builder: retrofit2.Retrofit$Builder baseUrl({_STR})>", 0,
                         ValueKind.URL),
                )),
    8: RuleSpec(8, "Predictable/constant PRNG seeds", Severity.MEDIUM,
                AnalysisPlan.INTER_BACKWARD_DATA_ONLY, (
                    _row("8.1", "<java.security.SecureRandom: void <init>(byte[])>", 0, _BYTES),
                    _row("8.2", "<java.security.SecureRandom: void setSeed(byte[])>", 0, _BYTES),
                    _row("8.3", "<java.security.SecureRandom: void setSeed(long)>", 0, _INT),
                )),
    9: RuleSpec(9, "Cryptographically insecure PRNGs (e.g., java.util.Random)", Severity.MEDIUM, AnalysisPlan.SEARCH,
                RANDOM_CONSTRUCTORS),
    10: RuleSpec(10, "Static salts in PBE", Severity.MEDIUM, AnalysisPlan.INTER_BACKWARD_DATA_ONLY, (
                    _row("10.1", "<javax.crypto.spec.PBEParameterSpec: void <init>(byte[],int)>", 0, _BYTES),
                    _row("10.2", f"<javax.crypto.spec.PBEParameterSpec: void <init>(byte[],int,{_SPEC})>", 0, _BYTES),
                    _row("10.3", "<javax.crypto.spec.PBEKeySpec: void <init>(char[],byte[],int,int)>", 1, _BYTES),
                    _row("10.4", "<javax.crypto.spec.PBEKeySpec: void <init>(char[],byte[],int)>", 1, _BYTES),
                ), forbid_null=True),
    11: RuleSpec(11, "ECB mode in symmetric ciphers", Severity.MEDIUM, AnalysisPlan.INTER_BACKWARD,
                 _CIPHER_ROWS),
    12: RuleSpec(12, "Static IVs in CBC mode symmetric ciphers", Severity.MEDIUM,
                 AnalysisPlan.INTER_BACKWARD_DATA_ONLY, (
                    _row("12.1", "<javax.crypto.spec.IvParameterSpec: void <init>(byte[])>", 0, _BYTES),
                    _row("12.2", "<javax.crypto.spec.IvParameterSpec: void <init>(byte[],int,int)>", 0, _BYTES),
                 ), forbid_null=True),
    13: RuleSpec(13, "Fewer than 1,000 iterations for PBE", Severity.LOW,
                 AnalysisPlan.INTER_BACKWARD_DATA_ONLY, (
                    _row("13.1", "<javax.crypto.spec.PBEParameterSpec: void <init>(byte[],int)>", 1, _INT),
                    _row("13.2", f"<javax.crypto.spec.PBEParameterSpec: void <init>(byte[],int,{_SPEC})>", 1, _INT),
                    _row("13.3", "<javax.crypto.spec.PBEKeySpec: void <init>(char[],byte[],int,int)>", 2, _INT),
                    _row("13.4", "<javax.crypto.spec.PBEKeySpec: void <init>(char[],byte[],int)>", 2, _INT),
                 ), thresholds={"iterations": config.PBE_MIN_ITERATIONS}),
    14: RuleSpec(14, "64-bit block ciphers", Severity.LOW, AnalysisPlan.INTER_BACKWARD, _CIPHER_ROWS,
                 insecure_names=frozenset(config.INSECURE_SYMMETRIC)),
    15: RuleSpec(15, "Insecure asymmetric ciphers", Severity.LOW, AnalysisPlan.COMBINATION,
                 KEY_PAIR_GENERATOR_ROWS + KEY_SIZE_ROWS),
    16: RuleSpec(16, "Insecure cryptographic hash", Severity.HIGH, AnalysisPlan.INTER_BACKWARD, (
                    _row("16.1", f"<java.security.MessageDigest: java.security.MessageDigest getInstance({_STR})>", 0),
                    _row("16.2", f"<java.security.MessageDigest: java.security.MessageDigest getInstance({_STR},"
                                 f"{_STR})>", 0),
                    _row("16.3", f"<java.security.MessageDigest: java.security.MessageDigest getInstance({_STR},"
                                 "java.security.Provider)>", 0),
                 ), insecure_names=frozenset(config.INSECURE_HASHES)),
}

# Rule 7 runs last so an expiring budget drops it first.
EXECUTION_ORDER: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14, 15, 16, 7)

# rules whose constant candidates go through setter/getter pairing
DATA_ONLY_RULES = frozenset({1, 2, 3, 8, 10, 12, 13, 15})


def parse_rule_list(text: str) -> list[int]:
    """Parse `1,4-7,16` into a sorted rule id list."""
    selected = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = (int(x) for x in part.split("-", 1))
            if lo > hi:
                raise ValueError(f"bad rule range {part!r}")
            selected.update(range(lo, hi + 1))
        else:
            selected.add(int(part))
    unknown = sorted(r for r in selected if r not in RULES)
    if unknown:
        raise ValueError(f"unknown rule id(s): {', '.join(map(str, unknown))}")
    return sorted(selected)


def describe_rules() -> str:
    lines = []
    for rid in sorted(RULES):
        spec = RULES[rid]
        lines.append(f"{rid:>2} [{spec.severity.value}] {spec.title} ({spec.plan.value})")
        for crit in spec.criteria:
            lines.append(f"     {crit}")
    return "\n".join(lines) + "\n"
