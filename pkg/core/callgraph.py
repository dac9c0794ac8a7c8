"""
Caller/callee index with direct-subclass dispatch.

Virtual and interface invokes resolve to the declared owner's method plus
overrides in classes that extend or implement the owner directly. Deeper
overrides are deliberately left out.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field

from core.ir import Invoke, InvokeKind, MethodSig, Program

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CallSite:
    caller: MethodSig
    instruction_index: int
    callee: MethodSig
    kind: InvokeKind
    file: str = field(default="", compare=False)
    line: int = field(default=0, compare=False)

    @property
    def sort_key(self) -> tuple:
        return (self.file, self.line, str(self.caller), self.instruction_index)

    def __str__(self) -> str:
        return f"{self.caller}@{self.line}"


@dataclass
class CallGraph:
    program: Program
    callers_of: dict[MethodSig, list[CallSite]] = field(default_factory=dict)
    resolved_targets: dict[CallSite, frozenset[MethodSig]] = field(default_factory=dict)
    site_at: dict[tuple[MethodSig, int], CallSite] = field(default_factory=dict)
    sites_by_declared: dict[MethodSig, list[CallSite]] = field(default_factory=dict)

    def is_phantom(self, site: CallSite) -> bool:
        return not self.resolved_targets.get(site)

    def sites(self) -> list[CallSite]:
        return sorted(self.resolved_targets, key=lambda s: s.sort_key)


def resolve_targets(program: Program, invoke: Invoke) -> frozenset[MethodSig]:
    callee = invoke.callee
    found = set()
    declared = program.method(callee)
    if declared is not None and declared.body is not None:
        found.add(declared.sig)
    if invoke.kind in (InvokeKind.STATIC, InvokeKind.SPECIAL):
        return frozenset(found)

    for cls in program.classes.values():
        if cls.is_phantom:
            continue
        if cls.superclass == callee.owner or callee.owner in cls.interfaces:
            override = cls.find_method(callee.name, callee.param_types)
            if override is not None and override.body is not None:
                found.add(override.sig)
    return frozenset(found)


def build_call_graph(program: Program) -> CallGraph:
    graph = CallGraph(program)
    callers = defaultdict(list)
    by_declared = defaultdict(list)
    for cls, method in program.concrete_methods():
        for index, ins in enumerate(method.body):
            if not isinstance(ins, Invoke):
                continue
            site = CallSite(method.sig, index, ins.callee, ins.kind, cls.source, ins.line)
            targets = resolve_targets(program, ins)
            graph.resolved_targets[site] = targets
            graph.site_at[(method.sig, index)] = site
            by_declared[ins.callee].append(site)
            for target in targets:
                callers[target].append(site)

    graph.callers_of = {sig: sorted(sites, key=lambda s: s.sort_key) for sig, sites in callers.items()}
    graph.sites_by_declared = {sig: sorted(sites, key=lambda s: s.sort_key) for sig, sites in by_declared.items()}
    phantom = sum(1 for targets in graph.resolved_targets.values() if not targets)
    logger.debug(f"call graph: {len(graph.resolved_targets)} sites, {phantom} phantom")
    return graph


def call_sites_of(graph: CallGraph, target: MethodSig) -> list[CallSite]:
    """Sites that may reach `target`, ordered by (file, line).

    Phantom sites count when their declared callee is `target`; that is how
    library APIs without a body are found.
    """
    found = set(graph.callers_of.get(target, ()))
    for site in graph.sites_by_declared.get(target, ()):
        if graph.is_phantom(site):
            found.add(site)
    return sorted(found, key=lambda s: s.sort_key)


def dump_call_graph(graph: CallGraph) -> str:
    lines = []
    for site in graph.sites():
        targets = graph.resolved_targets[site]
        if not targets:
            lines.append(f"{site.caller} @{site.line} -> {site.callee} phantom")
            continue
        for target in sorted(targets):
            lines.append(f"{site.caller} @{site.line} -> {target}")
    return "\n".join(lines) + ("\n" if lines else "")
