"""
Structured logging for analysis runs.
"""
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime
from typing import Optional, TextIO


@dataclass
class LogEvent:
    timestamp: str
    run_id: str
    event_type: str  # "ROOT_START" | "CHECKER_RUN" | "REFINEMENT" | "BUDGET_EXPIRED" | "ROOT_DONE"
    root: Optional[str]
    data: dict


class StructuredLogger:
    """
    JSON-lines event log written to stderr.

    Disabled loggers drop every event, so callers never need to check.
    Evidence strings (hard-coded keys, passwords) are redacted unless
    `redact_evidence` is turned off.
    """

    def __init__(self, run_id: str, enabled: bool = False, redact_evidence: bool = True,
                 stream: Optional[TextIO] = None):
        self.run_id = run_id
        self.enabled = enabled
        self.redact_evidence = redact_evidence
        self.stream = stream

    def log_root_start(self, root: Optional[str], classes: int, rules: list[int]):
        self._emit("ROOT_START", root, {"classes": classes, "rules": rules})

    def log_checker_run(self, root: Optional[str], rule_id: int, findings: list, duration_ms: int):
        self._emit("CHECKER_RUN", root, {
            "rule": rule_id,
            "findings": len(findings),
            "evidence": [self._redact(f.evidence) for f in findings],
            "duration_ms": duration_ms,
        })

    def log_refinement(self, root: Optional[str], rule_id: int, before: int, after: int, removed: dict):
        self._emit("REFINEMENT", root, {"rule": rule_id, "before": before, "after": after, "removed": removed})

    def log_budget_expired(self, root: Optional[str], completed: list[int], skipped: list[int]):
        self._emit("BUDGET_EXPIRED", root, {"rules_completed": completed, "rules_skipped": skipped})

    def log_root_done(self, root: Optional[str], findings: int, duration_ms: int, partial: bool):
        self._emit("ROOT_DONE", root, {"findings": findings, "duration_ms": duration_ms, "partial": partial})

    def _redact(self, evidence: str) -> str:
        return "[REDACTED]" if self.redact_evidence else evidence

    def _emit(self, event_type: str, root: Optional[str], data: dict):
        if not self.enabled:
            return
        event = LogEvent(
            timestamp=datetime.now().isoformat(),
            run_id=self.run_id,
            event_type=event_type,
            root=root,
            data=data,
        )
        stream = self.stream or sys.stderr
        print(json.dumps(asdict(event), ensure_ascii=False), file=stream)
