"""
AnalysisSession: everything one root-subproject analysis shares across rules.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import config
from core.backward import BackwardSlicer
from core.callgraph import CallGraph, build_call_graph
from core.ir import Program
from core.refine import RemovalLog


@dataclass
class RuleCounts:
    """Candidates seen by a rule before and after refinement."""
    before: int = 0
    after: int = 0


@dataclass
class AnalysisSession:
    """
    Per-root analysis state.

    The call graph and the backward slicer (with its summary and slice
    caches) are built once and reused by every checker, so rules that share
    criteria (11 and 14, the PBE rows of 1, 10 and 13) slice only once.
    """
    program: Program
    root: Optional[str] = None
    depth: int = 1
    refine: bool = True
    check_client_trusted: bool = False
    deadline: Optional[float] = None
    interrupted: bool = False

    removals: dict[int, RemovalLog] = field(default_factory=dict)
    counts: dict[int, RuleCounts] = field(default_factory=dict)

    _graph: Optional[CallGraph] = field(default=None, repr=False)
    _slicer: Optional[BackwardSlicer] = field(default=None, repr=False)

    @property
    def graph(self) -> CallGraph:
        if self._graph is None:
            self._graph = build_call_graph(self.program)
        return self._graph

    @property
    def slicer(self) -> BackwardSlicer:
        if self._slicer is None:
            self._slicer = BackwardSlicer(
                self.program,
                self.graph,
                self.depth,
                predictable_sources=config.PREDICTABLE_SOURCES,
                collection_apis=config.COLLECTION_INDEX_APIS,
            )
        return self._slicer

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() >= self.deadline

    def out_of_time(self) -> bool:
        """Checked inside rule loops; once true the running rule stops and the root is partial."""
        if self.expired():
            self.interrupted = True
        return self.interrupted

    def record_refinement(self, rule_id: int, before: int, after: int, log: Optional[RemovalLog] = None) -> None:
        counts = self.counts.setdefault(rule_id, RuleCounts())
        counts.before += before
        counts.after += after
        if log is not None:
            self.removals.setdefault(rule_id, RemovalLog()).extend(log)

    def removal_counts(self) -> dict[str, int]:
        """Per-RI removal counts summed over every rule."""
        totals: dict[str, int] = {}
        for log in self.removals.values():
            for ri, n in log.counts().items():
                totals[ri] = totals.get(ri, 0) + n
        return totals
