"""
Rules 4-7: SSL/TLS man-in-the-middle risks.

Rules 4 and 5 inspect user implementations of the JSSE callback
interfaces, rule 6 follows socket factories forward and rule 7 is a plain
constant search on URL-taking APIs.
"""
from __future__ import annotations

import logging
from typing import Iterator, Optional

from core.backward import SlicingCriterion
from core.callgraph import call_sites_of
from core.defuse import successors
from core.forward import OriginError, intra_forward_slice
from core.ir import (
    Assign,
    CaughtException,
    ClassDef,
    ConstInt,
    ConstNull,
    If,
    Invoke,
    Local,
    MethodDef,
    ParamRef,
    Return,
    Throw,
)
from core.parser import render_instruction
from core.session import AnalysisSession
from rules.common import constant_findings, dedupe, finding_at, string_value
from rules.registry import RULES, Finding

logger = logging.getLogger(__name__)

HOSTNAME_VERIFIER = "javax.net.ssl.HostnameVerifier"
TRUST_MANAGERS = ("javax.net.ssl.X509TrustManager", "javax.net.ssl.X509ExtendedTrustManager")
SSL_SOCKET_FACTORY = "javax.net.ssl.SSLSocketFactory"
CERT_CHAIN = "java.security.cert.X509Certificate[]"


def _implementers(session: AnalysisSession, *interfaces: str) -> Iterator[ClassDef]:
    program = session.program
    for cls in program.classes.values():
        if cls.is_phantom:
            continue
        if any(program.implements(cls.name, iface) for iface in interfaces):
            yield cls


def _param_binding(method: MethodDef, index: int) -> Optional[int]:
    for i, ins in enumerate(method.body):
        if isinstance(ins, Assign) and isinstance(ins.rhs, ParamRef) and ins.rhs.index == index:
            return i
    return None


# ---------------------------------------------------------------------------
# Rule 4
# ---------------------------------------------------------------------------

def check_hostname_verifier(session: AnalysisSession) -> list[Finding]:
    rule = RULES[4]
    findings = []
    for cls in _implementers(session, HOSTNAME_VERIFIER):
        if session.out_of_time():
            break
        method = cls.find_method("verify", ("java.lang.String", "javax.net.ssl.SSLSession"))
        if method is None or method.body is None:
            continue
        for i, ins in enumerate(method.body):
            if not isinstance(ins, Return):
                continue
            result = session.slicer.intra(SlicingCriterion.intra_return(method.sig, i))
            if 1 not in result.influencing_params:
                findings.append(finding_at(session, rule, method.sig, ins, render_instruction(ins)))
                break
    return dedupe(findings)


# ---------------------------------------------------------------------------
# Rule 5
# ---------------------------------------------------------------------------

def _trust_methods(cls: ClassDef, client_side: bool) -> Iterator[MethodDef]:
    names = {"checkServerTrusted", "checkClientTrusted"} if client_side else {"checkServerTrusted"}
    for method in cls.methods:
        if (
            method.sig.name in names
            and method.body is not None
            and method.sig.param_types[:1] == (CERT_CHAIN,)
        ):
            yield method


def _invokes(method: MethodDef, name: str) -> list[tuple[int, Invoke]]:
    return [(i, ins) for i, ins in enumerate(method.body) if isinstance(ins, Invoke) and ins.callee.name == name]


def _reachable(method: MethodDef) -> set[int]:
    """Instructions reachable from entry or from an exception handler."""
    succ = successors(method.body)
    roots = [0] if method.body else []
    roots += [i for i, ins in enumerate(method.body)
              if isinstance(ins, Assign) and isinstance(ins.rhs, CaughtException)]
    seen = set(roots)
    stack = list(roots)
    while stack:
        for j in succ[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def _throws(method: MethodDef) -> bool:
    live = _reachable(method)
    return any(isinstance(ins, Throw) for i, ins in enumerate(method.body) if i in live)


def _catches(method: MethodDef) -> bool:
    return any(isinstance(ins, Assign) and isinstance(ins.rhs, CaughtException) for ins in method.body)


def _propagates(method: MethodDef) -> bool:
    """A validating call whose exception is not swallowed by a handler."""
    validating = (
        _invokes(method, "checkValidity")
        or _invokes(method, "verify")
        or _invokes(method, method.sig.name)
    )
    return bool(validating) and not _catches(method)


def _validity_only(session: AnalysisSession, method: MethodDef) -> Optional[Invoke]:
    """The checkValidity call on a chain element when it is the only validation."""
    if _throws(method) or _invokes(method, "verify"):
        return None
    binding = _param_binding(method, 0)
    if binding is None:
        return None
    defuse = session.slicer.defuse(method.sig)
    for i, ins in _invokes(method, "checkValidity"):
        if binding in defuse.backward_closure([i]):
            return ins
    return None


def _first_return(method: MethodDef):
    for ins in method.body:
        if isinstance(ins, Return):
            return ins
    return method.body[-1] if method.body else None


def _accepted_issuers_empty(session: AnalysisSession, method: MethodDef) -> list[Return]:
    found = []
    for i, ins in enumerate(method.body):
        if not isinstance(ins, Return) or ins.value is None:
            continue
        result = session.slicer.intra(SlicingCriterion.intra_return(method.sig, i))
        for cand in result.constants:
            if isinstance(cand.value, ConstNull) or (
                isinstance(cand.value, ConstInt) and cand.value.value == 0 and cand.via_array_size
            ):
                found.append(ins)
                break
    return found


def check_trust_manager(session: AnalysisSession) -> list[Finding]:
    rule = RULES[5]
    findings = []
    for cls in _implementers(session, *TRUST_MANAGERS):
        if session.out_of_time():
            break
        for method in _trust_methods(cls, session.check_client_trusted):
            checked = _validity_only(session, method)
            if checked is not None:
                findings.append(finding_at(session, rule, method.sig, checked,
                                           "checkValidity without signature verification"))
            elif not _throws(method) and not _propagates(method):
                at = _first_return(method)
                if at is not None:
                    findings.append(finding_at(session, rule, method.sig, at, f"{method.sig.name} never throws"))
        issuers = cls.find_method("getAcceptedIssuers", ())
        if issuers is not None and issuers.body is not None:
            for ins in _accepted_issuers_empty(session, issuers):
                findings.append(finding_at(session, rule, issuers.sig, ins, "empty accepted issuers"))
    return dedupe(findings)


# ---------------------------------------------------------------------------
# Rule 6
# ---------------------------------------------------------------------------

def _reads_local(ins: If, name: str) -> bool:
    return any(isinstance(v, Local) and v.name == name for v in (ins.left, ins.right))


def check_ssl_socket(session: AnalysisSession) -> list[Finding]:
    rule = RULES[6]
    program = session.program
    findings = []
    for criterion in rule.criteria:
        for site in call_sites_of(session.graph, criterion.api):
            if session.out_of_time():
                return dedupe(findings)
            cls = program.classes.get(site.caller.owner)
            if cls is not None and cls.superclass == SSL_SOCKET_FACTORY:
                continue
            method = program.method(site.caller)
            try:
                forward = intra_forward_slice(method, site.instruction_index, program)
            except OriginError:
                logger.debug(f"{site}: socket factory result is discarded")
                continue
            influenced = [method.body[i] for i in forward.indices]
            sockets = [ins for ins in influenced if isinstance(ins, Invoke) and ins.callee.name == "createSocket"]
            if not sockets:
                continue
            sessions = [ins for ins in influenced if isinstance(ins, Invoke) and ins.callee.name == "getSession"]
            verifies = [ins for ins in influenced if isinstance(ins, Invoke) and ins.callee.name == "verify"
                        and ins.assign_target is not None]
            branched = any(
                isinstance(ins, If) and _reads_local(ins, v.assign_target.name)
                for v in verifies
                for ins in influenced
            )
            if not (sessions and verifies and branched):
                findings.append(finding_at(session, rule, site.caller, sockets[0],
                                           "createSocket without hostname verification"))
    return dedupe(findings)


# ---------------------------------------------------------------------------
# Rule 7
# ---------------------------------------------------------------------------

def _is_http(cand) -> bool:
    text = string_value(cand)
    return text is not None and text.lower().startswith("http://")


def check_http(session: AnalysisSession) -> list[Finding]:
    return constant_findings(session, RULES[7], _is_http)
