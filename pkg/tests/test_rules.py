import pytest

from rules import CHECKERS, EXECUTION_ORDER, RULES
from rules.registry import DATA_ONLY_RULES, Severity, describe_rules, parse_rule_list

WEB = """\
class Web {
  method void fetch() {
    r1 = new java.net.URL
    specialinvoke r1.<java.net.URL: void <init>(java.lang.String)>("http://example.com/api")
    r2 = new java.net.URL
    specialinvoke r2.<java.net.URL: void <init>(java.lang.String)>("https://example.com/api")
    return
  }
}
"""

CIPHERS = """\
class Ciphers {
  static method void make() {
    r1 = staticinvoke <javax.crypto.Cipher: javax.crypto.Cipher getInstance(java.lang.String)>("DES")
    r2 = staticinvoke <javax.crypto.Cipher: javax.crypto.Cipher getInstance(java.lang.String)>("AES/ECB/PKCS5Padding")
    r3 = staticinvoke <javax.crypto.Cipher: javax.crypto.Cipher getInstance(java.lang.String)>("AES/GCM/NoPadding")
    r4 = staticinvoke <javax.crypto.Cipher: javax.crypto.Cipher getInstance(java.lang.String)>("RC4")
    return
  }
}
"""

KEY_PAIRS = """\
class KeyPairs {
  static method void small() {
    r1 = staticinvoke <java.security.KeyPairGenerator: java.security.KeyPairGenerator getInstance(java.lang.String)>("RSA")
    virtualinvoke r1.<java.security.KeyPairGenerator: void initialize(int)>(1024)
    return
  }
  static method void defaulted() {
    r1 = staticinvoke <java.security.KeyPairGenerator: java.security.KeyPairGenerator getInstance(java.lang.String)>("DSA")
    r2 = r1.<java.security.KeyPairGenerator: java.security.KeyPair generateKeyPair()>()
    return
  }
  static method void curve() {
    r1 = staticinvoke <java.security.KeyPairGenerator: java.security.KeyPairGenerator getInstance(java.lang.String)>("EC")
    virtualinvoke r1.<java.security.KeyPairGenerator: void initialize(int)>(256)
    return
  }
}
"""

SEEDS = """\
class Seeds {
  static method void seed() {
    r1 = staticinvoke <java.lang.System: long currentTimeMillis()>()
    r2 = new java.security.SecureRandom
    specialinvoke r2.<java.security.SecureRandom: void <init>()>()
    virtualinvoke r2.<java.security.SecureRandom: void setSeed(long)>(r1)
    r3 = new java.util.Random
    specialinvoke r3.<java.util.Random: void <init>()>()
    return
  }
}
"""


def _summary(findings):
    return sorted((f.rule_id, f.line, f.evidence) for f in findings)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def test_every_rule_has_a_checker():
    assert sorted(RULES) == list(range(1, 17))
    assert sorted(CHECKERS) == sorted(RULES)
    assert sorted(EXECUTION_ORDER) == sorted(RULES)
    assert EXECUTION_ORDER[-1] == 7


def test_severities():
    high = {rid for rid, spec in RULES.items() if spec.severity is Severity.HIGH}
    medium = {rid for rid, spec in RULES.items() if spec.severity is Severity.MEDIUM}
    low = {rid for rid, spec in RULES.items() if spec.severity is Severity.LOW}
    assert high == {1, 2, 3, 4, 5, 6, 7, 16}
    assert medium == {8, 9, 10, 11, 12}
    assert low == {13, 14, 15}
    assert Severity.HIGH.at_least(Severity.LOW)
    assert not Severity.LOW.at_least(Severity.MEDIUM)


def test_data_only_rules_use_forward_tracking():
    for rid in DATA_ONLY_RULES - {15}:
        assert RULES[rid].uses_data_only_tracking


def test_rule_lists():
    assert parse_rule_list("1,4-7,16") == [1, 4, 5, 6, 7, 16]
    assert parse_rule_list(" 3 , 3 ") == [3]
    with pytest.raises(ValueError):
        parse_rule_list("17")
    with pytest.raises(ValueError):
        parse_rule_list("9-2")


def test_describe_rules_lists_criteria():
    text = describe_rules()
    assert " 1 [H] Predictable/constant cryptographic keys" in text
    assert "javax.crypto.spec.SecretKeySpec" in text
    assert "15.4" in text


# ---------------------------------------------------------------------------
# Constant-tracking rules
# ---------------------------------------------------------------------------

def test_password_encryptor_reports_only_the_default_key(load_fixture, findings_for):
    findings = findings_for(load_fixture("password_encryptor.tir"), [1])
    assert len(findings) == 1
    finding = findings[0]
    assert (finding.evidence, finding.line, finding.severity) == ("defaultkey", 24, Severity.HIGH)
    assert (finding.class_name, finding.method) == ("PasswordEncryptor", "getKey")


def test_password_encryptor_without_refinement(load_fixture, findings_for):
    findings = findings_for(load_fixture("password_encryptor.tir"), [1], refine=False)
    assert len(findings) >= 4
    assert {"UTF-8", "pass.key", "1", "defaultkey"} <= {f.evidence for f in findings}


def test_data_only_holder(load_fixture, findings_for):
    program = load_fixture("data_only.tir")
    assert [f.evidence for f in findings_for(program, [1])] == ["mykey"]
    assert sorted(f.evidence for f in findings_for(program, [1], refine=False)) == ["mykey", "mytext"]


def test_hex_conversion_needs_depth(load_fixture, findings_for):
    program = load_fixture("hex_key.tir")
    assert findings_for(program, [1], depth=1) == []
    deep = findings_for(program, [1], depth=2)
    assert _summary(deep) == [(1, 9, "6A5B7C8A")]


def test_infeasible_zero_iterations_is_reported(load_fixture, findings_for):
    findings = findings_for(load_fixture("infeasible_iteration.tir"), [13])
    assert _summary(findings) == [(13, 5, "0")]


def test_http_urls(parse, findings_for):
    assert _summary(findings_for(parse(WEB), [7])) == [(7, 4, "http://example.com/api")]


def test_ecb_and_weak_ciphers(parse, findings_for):
    findings = findings_for(parse(CIPHERS), [11, 14])
    assert _summary(findings) == [
        (11, 3, "DES"),
        (11, 4, "AES/ECB/PKCS5Padding"),
        (14, 3, "DES"),
        (14, 6, "RC4"),
    ]


def test_asymmetric_key_sizes(parse, findings_for):
    findings = findings_for(parse(KEY_PAIRS), [15])
    assert _summary(findings) == [(15, 4, "RSA 1024"), (15, 8, "DSA default key size")]


def test_predictable_seed_and_untrusted_prng(parse, findings_for):
    findings = findings_for(parse(SEEDS), [8, 9])
    assert _summary(findings) == [
        (8, 3, "<java.lang.System: long currentTimeMillis()>"),
        (9, 8, "<java.util.Random: void <init>()>"),
    ]


# ---------------------------------------------------------------------------
# SSL/TLS rules
# ---------------------------------------------------------------------------

def test_accept_all_hostname_verifier(load_fixture, findings_for):
    findings = findings_for(load_fixture("ssl_listings.tir"), [4])
    assert [(f.class_name, f.line) for f in findings] == [("AllowAllHostnameVerifier", 83)]


def test_trust_managers(load_fixture, findings_for):
    findings = findings_for(load_fixture("ssl_listings.tir"), [5])
    assert sorted((f.class_name, f.line, f.evidence) for f in findings) == [
        ("SwallowingManager", 50, "checkServerTrusted never throws"),
        ("SwallowingManager", 54, "empty accepted issuers"),
        ("ValidityOnlyManager", 25, "checkValidity without signature verification"),
    ]


def test_socket_without_hostname_verification(load_fixture, findings_for):
    findings = findings_for(load_fixture("ssl_listings.tir"), [6])
    assert [(f.class_name, f.line) for f in findings] == [("TaxiSocket", 8)]


SHARED_FIELD = """\
class Holder {
  field java.lang.String f
  method void <init>() {
    this.<f> = "alpha"
    return
  }
  method void reset() {
    this.<f> = "beta"
    return
  }
  static method void build(java.lang.String) {
    r1 := param 0
    r2 = r1.<java.lang.String: byte[] getBytes()>()
    r3 = new javax.crypto.spec.SecretKeySpec
    specialinvoke r3.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>(r2, "AES")
    return
  }
  method void decoded() {
    r1 = this.<f>
    r2 = staticinvoke <lib.Codec: java.lang.String decode(java.lang.String)>(r1)
    staticinvoke <Holder: void build(java.lang.String)>(r2)
    return
  }
  method void direct() {
    r1 = this.<f>
    staticinvoke <Holder: void build(java.lang.String)>(r1)
    return
  }
}
"""


def test_field_reached_under_two_contexts_keeps_both(parse, findings_for):
    # the decoded caller is sliced first; its clipped context must not hide the direct one
    findings = findings_for(parse(SHARED_FIELD), [1])
    assert _summary(findings) == [(1, 4, "alpha"), (1, 8, "beta")]
    unrefined = findings_for(parse(SHARED_FIELD), [1], refine=False)
    assert _summary(unrefined) == [(1, 4, "alpha"), (1, 8, "beta")]


DEAD_THROW = """\
class DeadThrowManager implements javax.net.ssl.X509TrustManager {
  method void checkServerTrusted(java.security.cert.X509Certificate[],java.lang.String) {
    r1 := param 0
    r2 := param 1
    return
    r3 = new java.security.cert.CertificateException
    throw r3
  }
}
class RethrowingManager implements javax.net.ssl.X509TrustManager {
  method void checkServerTrusted(java.security.cert.X509Certificate[],java.lang.String) {
    r1 := param 0
    r2 := param 1
    return
  handler:
    r3 := @caughtexception
    throw r3
  }
}
"""

CLIENT_LAX = """\
class ClientLaxManager implements javax.net.ssl.X509TrustManager {
  field javax.net.ssl.X509TrustManager delegate
  method void checkServerTrusted(java.security.cert.X509Certificate[],java.lang.String) {
    r1 := param 0
    r2 := param 1
    r3 = this.<delegate>
    interfaceinvoke r3.<javax.net.ssl.X509TrustManager: void checkServerTrusted(java.security.cert.X509Certificate[],java.lang.String)>(r1, r2)
    return
  }
  method void checkClientTrusted(java.security.cert.X509Certificate[],java.lang.String) {
    r1 := param 0
    r2 := param 1
    return
  }
}
"""

VERIFIERS = """\
class FlagVerifier implements javax.net.ssl.HostnameVerifier {
  static field boolean ACCEPT
  static method void <clinit>() {
    <FlagVerifier>.<ACCEPT> = true
    return
  }
  method boolean verify(java.lang.String,javax.net.ssl.SSLSession) {
    r1 := param 0
    r2 := param 1
    r3 = <FlagVerifier>.<ACCEPT>
    return r3
  }
}
class PeerHostVerifier implements javax.net.ssl.HostnameVerifier {
  method boolean verify(java.lang.String,javax.net.ssl.SSLSession) {
    r1 := param 0
    r2 := param 1
    r3 = interfaceinvoke r2.<javax.net.ssl.SSLSession: java.lang.String getPeerHost()>()
    r4 = virtualinvoke r3.<java.lang.String: boolean equals(java.lang.Object)>(r1)
    return r4
  }
}
"""


def test_unreachable_throw_does_not_count(parse, findings_for):
    findings = findings_for(parse(DEAD_THROW), [5])
    assert [(f.class_name, f.line, f.evidence) for f in findings] == [
        ("DeadThrowManager", 5, "checkServerTrusted never throws"),
    ]


def test_client_side_trust_check_is_opt_in(parse, findings_for):
    assert findings_for(parse(CLIENT_LAX), [5]) == []
    findings = findings_for(parse(CLIENT_LAX), [5], check_client_trusted=True)
    assert [(f.method, f.line, f.evidence) for f in findings] == [
        ("checkClientTrusted", 13, "checkClientTrusted never throws"),
    ]


def test_verifier_returning_a_field_constant(parse, findings_for):
    findings = findings_for(parse(VERIFIERS), [4])
    assert [(f.class_name, f.line, f.evidence) for f in findings] == [("FlagVerifier", 11, "return r3")]
