"""
Backward slicing.

`BackwardSlicer.intra` walks def-use edges backwards from a criterion inside
one method. Invokes met on the way are either explored (their callee is
summarised at depth - 1) or clipped (their arguments become candidates with
a `FlowContext` describing the invoke). `BackwardSlicer.inter` climbs the
caller chains and follows field initialisers, stitching one result per
maximal chain.
"""
from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

import config
from core.callgraph import CallGraph, CallSite, call_sites_of
from core.defuse import ENTRY, DefUseGraph, def_use_graph, local_loc
from core.ir import (
    ArrayRef,
    Assign,
    BinOp,
    CaughtException,
    Constant,
    FieldKey,
    FieldRef,
    Instruction,
    Invoke,
    InvokeKind,
    LengthOf,
    MethodSig,
    NewArray,
    NewObject,
    ParamRef,
    Program,
    Return,
    Throw,
    constant_text,
    is_constant,
)
from core.parser import render_instruction

logger = logging.getLogger(__name__)

_SETTER_NAME = re.compile(r"^set[A-Z0-9_]\w*$")


class CriterionError(ValueError):
    pass


class CriterionMode(str, Enum):
    INTER_PARAM = "interParam"
    INTRA_RETURN = "intraReturn"
    INTRA_THROW = "intraThrow"
    INTRA_ASSIGN = "intraAssign"
    INTRA_PARAM = "intraParam"


@dataclass(frozen=True)
class SlicingCriterion:
    mode: CriterionMode
    call_site: Optional[CallSite] = None
    param_indices: frozenset[int] = frozenset()
    method: Optional[MethodSig] = None
    instruction_index: Optional[int] = None

    def __post_init__(self):
        if self.mode is CriterionMode.INTER_PARAM:
            if self.call_site is None or not self.param_indices:
                raise CriterionError("interParam needs a call site and at least one parameter index")
            return
        if self.method is None:
            raise CriterionError(f"{self.mode.value} needs a method")
        if self.mode in (CriterionMode.INTRA_ASSIGN, CriterionMode.INTRA_PARAM) and self.instruction_index is None:
            raise CriterionError(f"{self.mode.value} needs an instruction index")
        if self.mode is CriterionMode.INTRA_PARAM and not self.param_indices:
            raise CriterionError("intraParam needs at least one parameter index")

    @classmethod
    def inter_param(cls, site: CallSite, params: Iterable[int]) -> "SlicingCriterion":
        return cls(CriterionMode.INTER_PARAM, call_site=site, param_indices=frozenset(params))

    @classmethod
    def intra_param(cls, method: MethodSig, index: int, params: Iterable[int]) -> "SlicingCriterion":
        return cls(CriterionMode.INTRA_PARAM, method=method, instruction_index=index,
                   param_indices=frozenset(params))

    @classmethod
    def intra_return(cls, method: MethodSig, index: Optional[int] = None) -> "SlicingCriterion":
        return cls(CriterionMode.INTRA_RETURN, method=method, instruction_index=index)

    @classmethod
    def intra_throw(cls, method: MethodSig, index: Optional[int] = None) -> "SlicingCriterion":
        return cls(CriterionMode.INTRA_THROW, method=method, instruction_index=index)

    @classmethod
    def intra_assign(cls, method: MethodSig, index: int) -> "SlicingCriterion":
        return cls(CriterionMode.INTRA_ASSIGN, method=method, instruction_index=index)

    @property
    def host(self) -> MethodSig:
        return self.call_site.caller if self.call_site is not None else self.method


# ---------------------------------------------------------------------------
# Candidates and their flow context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SetterRef:
    """A target-less single-argument `setX(v)` call on a local."""
    method: MethodSig
    receiver: str
    name: str
    index: int

    @property
    def suffix(self) -> str:
        return self.name[3:]


@dataclass(frozen=True)
class FlowContext:
    invoke_kind: Optional[InvokeKind] = None
    in_assignment: bool = False
    setter: Optional[SetterRef] = None
    via_array_index: bool = False
    via_array_size: bool = False
    via_collection_index: bool = False
    array_element: bool = False

    def through_invoke(self, kind: InvokeKind, in_assignment: bool) -> "FlowContext":
        # the clipped invoke closest to the criterion is the one that counts
        if self.invoke_kind is not None:
            return self
        return replace(self, invoke_kind=kind, in_assignment=in_assignment)

    def with_setter(self, setter: Optional[SetterRef]) -> "FlowContext":
        if setter is None or self.setter is not None:
            return self
        return replace(self, setter=setter)

    def flagged(self, **flags: bool) -> "FlowContext":
        return replace(self, **flags)

    def combine(self, inner: "FlowContext") -> "FlowContext":
        """Context of a value seen with `inner` inside a callee reached under `self`."""
        clipped = self if self.invoke_kind is not None else inner
        return FlowContext(
            invoke_kind=clipped.invoke_kind,
            in_assignment=clipped.in_assignment,
            setter=self.setter or inner.setter,
            via_array_index=self.via_array_index or inner.via_array_index,
            via_array_size=self.via_array_size or inner.via_array_size,
            via_collection_index=self.via_collection_index or inner.via_collection_index,
            array_element=self.array_element or inner.array_element,
        )

    def flags(self) -> list[str]:
        out = []
        if self.invoke_kind is not None:
            out.append(f"{self.invoke_kind.value}{'+assign' if self.in_assignment else ''}")
        for name in ("via_array_index", "via_array_size", "via_collection_index", "array_element"):
            if getattr(self, name):
                out.append(name)
        if self.setter is not None:
            out.append(f"setter={self.setter.receiver}.{self.setter.name}")
        return out


@dataclass(frozen=True)
class Site:
    method: MethodSig
    index: int
    position: Optional[int]
    line: int
    file: str


@dataclass(frozen=True)
class ConstantCandidate:
    value: Constant
    site: Site
    context: FlowContext = FlowContext()

    @property
    def invoke_kind(self) -> Optional[InvokeKind]:
        return self.context.invoke_kind

    @property
    def in_assignment(self) -> bool:
        return self.context.in_assignment

    @property
    def via_array_index(self) -> bool:
        return self.context.via_array_index

    @property
    def via_array_size(self) -> bool:
        return self.context.via_array_size

    @property
    def via_collection_index(self) -> bool:
        return self.context.via_collection_index

    @property
    def array_element(self) -> bool:
        return self.context.array_element

    @property
    def text(self) -> str:
        return constant_text(self.value)

    def under(self, ctx: FlowContext) -> "ConstantCandidate":
        return replace(self, context=ctx.combine(self.context))


@dataclass(frozen=True)
class PredictableCall:
    api: str
    site: Site
    context: FlowContext = FlowContext()

    @property
    def text(self) -> str:
        return self.api

    def under(self, ctx: FlowContext) -> "PredictableCall":
        return replace(self, context=ctx.combine(self.context))


@dataclass(frozen=True)
class SliceStep:
    method: MethodSig
    index: int
    instruction: Instruction


def _add_unique(items: list, item) -> None:
    if item not in items:
        items.append(item)


@dataclass
class SliceResult:
    criterion: SlicingCriterion
    instructions: list[SliceStep] = field(default_factory=list)
    influencing_params: set[int] = field(default_factory=set)
    param_contexts: dict[int, list[FlowContext]] = field(default_factory=dict)
    used_fields: set[FieldKey] = field(default_factory=set)
    field_contexts: dict[FieldKey, list[FlowContext]] = field(default_factory=dict)
    constants: list[ConstantCandidate] = field(default_factory=list)
    predictable_calls: list[PredictableCall] = field(default_factory=list)
    clipped_sites: list[Site] = field(default_factory=list)
    uses_receiver: bool = False

    def steps_in(self, method: MethodSig) -> set[int]:
        return {step.index for step in self.instructions if step.method == method}

    def under(self, ctx: FlowContext) -> "SliceResult":
        """Copy with every recorded context seen through `ctx`."""
        return replace(
            self,
            instructions=list(self.instructions),
            influencing_params=set(self.influencing_params),
            param_contexts={p: [ctx.combine(c) for c in cs] for p, cs in self.param_contexts.items()},
            used_fields=set(self.used_fields),
            field_contexts={k: [ctx.combine(c) for c in cs] for k, cs in self.field_contexts.items()},
            constants=[c.under(ctx) for c in self.constants],
            predictable_calls=[p.under(ctx) for p in self.predictable_calls],
            clipped_sites=list(self.clipped_sites),
        )

    @classmethod
    def stitch(cls, criterion: SlicingCriterion, chain: list["SliceResult"]) -> "SliceResult":
        """Concatenate a callee-first chain of partial results."""
        out = cls(criterion)
        for part in chain:
            for step in part.instructions:
                _add_unique(out.instructions, step)
            for c in part.constants:
                _add_unique(out.constants, c)
            for p in part.predictable_calls:
                _add_unique(out.predictable_calls, p)
            for s in part.clipped_sites:
                _add_unique(out.clipped_sites, s)
            out.used_fields |= part.used_fields
            for key, ctxs in part.field_contexts.items():
                for ctx in ctxs:
                    _add_unique(out.field_contexts.setdefault(key, []), ctx)
        if chain:
            last = chain[-1]
            out.influencing_params = set(last.influencing_params)
            out.param_contexts = {p: list(cs) for p, cs in last.param_contexts.items()}
            out.uses_receiver = last.uses_receiver
        return out


class _Collector:
    def __init__(self, result: SliceResult):
        self.result = result

    def step(self, step: SliceStep) -> None:
        _add_unique(self.result.instructions, step)

    def constant(self, cand: ConstantCandidate) -> None:
        _add_unique(self.result.constants, cand)

    def predictable(self, call: PredictableCall) -> None:
        _add_unique(self.result.predictable_calls, call)

    def clipped(self, site: Site) -> None:
        _add_unique(self.result.clipped_sites, site)

    def param(self, index: int, ctx: FlowContext) -> None:
        self.result.influencing_params.add(index)
        _add_unique(self.result.param_contexts.setdefault(index, []), ctx)

    def used_field(self, key: FieldKey, ctx: FlowContext) -> None:
        self.result.used_fields.add(key)
        _add_unique(self.result.field_contexts.setdefault(key, []), ctx)

    def absorb(self, part: SliceResult) -> None:
        for step in part.instructions:
            self.step(step)
        for c in part.constants:
            self.constant(c)
        for p in part.predictable_calls:
            self.predictable(p)
        for s in part.clipped_sites:
            self.clipped(s)


@dataclass
class _InterState:
    visited: set = field(default_factory=set)
    fields_seen: set = field(default_factory=set)
    chains: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# Slicer
# ---------------------------------------------------------------------------

class BackwardSlicer:
    """Backward slicer bound to one program and call graph.

    Def-use graphs, callee summaries, field initialiser slices and stitched
    inter-procedural results are cached for the lifetime of the slicer.
    """

    def __init__(
        self,
        program: Program,
        graph: CallGraph,
        depth: int = 1,
        predictable_sources: Optional[Iterable[str]] = None,
        collection_apis: Optional[dict[str, tuple[int, ...]]] = None,
    ):
        if depth < 0:
            raise ValueError("orthogonal depth must be non-negative")
        self.program = program
        self.graph = graph
        self.depth = depth
        self.predictable_sources = set(config.PREDICTABLE_SOURCES if predictable_sources is None
                                       else predictable_sources)
        self.collection_apis = dict(config.COLLECTION_INDEX_APIS if collection_apis is None
                                    else collection_apis)
        self._defuse: dict[MethodSig, DefUseGraph] = {}
        self._summaries: dict[tuple[MethodSig, int], SliceResult] = {}
        self._field_slices: dict[FieldKey, list[tuple[MethodSig, SliceResult]]] = {}
        self._inter: dict[tuple[CallSite, frozenset[int]], list[SliceResult]] = {}

    def defuse(self, sig: MethodSig) -> DefUseGraph:
        if sig not in self._defuse:
            method = self.program.method(sig)
            if method is None:
                raise CriterionError(f"unknown method {sig}")
            self._defuse[sig] = def_use_graph(method, self.program)
        return self._defuse[sig]

    # -- intra ---------------------------------------------------------------

    def intra(
        self,
        criterion: SlicingCriterion,
        depth: Optional[int] = None,
        seeds: Optional[dict[int, list[FlowContext]]] = None,
    ) -> SliceResult:
        if criterion.mode is CriterionMode.INTER_PARAM:
            raise CriterionError("intra slicing needs an intra-procedural criterion")
        sig = criterion.method
        method = self.program.method(sig)
        if method is None or method.body is None:
            raise CriterionError(f"criterion host {sig} has no body")
        body = method.body
        depth = self.depth if depth is None else depth

        op_seeds = []
        ins_seeds = []
        index = criterion.instruction_index
        if criterion.mode is CriterionMode.INTRA_PARAM:
            ins = body[index] if 0 <= index < len(body) else None
            if not isinstance(ins, Invoke):
                raise CriterionError(f"instruction {index} of {sig} is not an invoke")
            for p in sorted(criterion.param_indices):
                if p >= len(ins.args):
                    raise CriterionError(f"{ins.callee} has no argument {p}")
                for ctx in (seeds or {}).get(p, [FlowContext()]):
                    op_seeds.append((index, ins.args[p], p, ctx))
        elif criterion.mode in (CriterionMode.INTRA_RETURN, CriterionMode.INTRA_THROW):
            kind = Return if criterion.mode is CriterionMode.INTRA_RETURN else Throw
            picked = range(len(body)) if index is None else [index]
            for i in picked:
                ins = body[i]
                if index is not None and not isinstance(ins, kind):
                    raise CriterionError(f"instruction {i} of {sig} is not a {kind.__name__.lower()}")
                if isinstance(ins, kind) and ins.value is not None:
                    op_seeds.append((i, ins.value, None, FlowContext()))
        else:
            ins = body[index] if 0 <= index < len(body) else None
            if not isinstance(ins, (Assign, Invoke, NewArray)):
                raise CriterionError(f"instruction {index} of {sig} is not an assignment")
            ins_seeds.append((index, FlowContext()))

        return self._run(sig, criterion, op_seeds, ins_seeds, depth, frozenset({sig}))

    def _site(self, sig: MethodSig, index: int, position: Optional[int]) -> Site:
        ins = self.program.method(sig).body[index]
        return Site(sig, index, position, ins.line, self.program.source_of(sig.owner))

    def _run(self, sig, criterion, op_seeds, ins_seeds, depth, stack) -> SliceResult:
        du = self.defuse(sig)
        body = du.method.body
        acc = du.accesses
        out = _Collector(SliceResult(criterion))
        worklist = deque()
        queued = set()

        def push(index: int, ctx: FlowContext) -> None:
            if (index, ctx) not in queued:
                queued.add((index, ctx))
                worklist.append((index, ctx))

        def follow(index: int, value, position: Optional[int], ctx: FlowContext, locs=None) -> None:
            if is_constant(value):
                out.constant(ConstantCandidate(value, self._site(sig, index, position), ctx))
                return
            if isinstance(value, ArrayRef):
                follow(index, value.base, position, ctx)
                follow(index, value.index, position, ctx.flagged(via_array_index=True))
                return
            if isinstance(value, BinOp):
                follow(index, value.left, position, ctx)
                follow(index, value.right, position, ctx)
                return
            if isinstance(value, LengthOf):
                follow(index, value.value, position, ctx)
                return
            for loc in sorted(locs if locs is not None else acc.value_reads(value)):
                for d in du.defs_reaching(index, [loc]):
                    if d != ENTRY:
                        push(d, ctx)
                    elif loc[0] == "field":
                        out.used_field(FieldKey(loc[1], loc[2]), ctx)
                    elif loc == local_loc("this"):
                        out.result.uses_receiver = True

        for index, value, position, ctx in op_seeds:
            out.step(SliceStep(sig, index, body[index]))
            follow(index, value, position, ctx)
        for index, ctx in ins_seeds:
            push(index, ctx)

        while worklist:
            index, ctx = worklist.popleft()
            ins = body[index]
            out.step(SliceStep(sig, index, ins))
            if isinstance(ins, Assign):
                target, rhs = ins.target, ins.rhs
                if isinstance(target, ArrayRef):
                    follow(index, target.base, None, ctx, locs=[local_loc(target.base.name)])
                    follow(index, target.index, None, ctx.flagged(via_array_index=True))
                    follow(index, rhs, None, ctx.flagged(array_element=True))
                elif isinstance(rhs, ParamRef):
                    out.param(rhs.index, ctx)
                elif not isinstance(rhs, (NewObject, CaughtException)):
                    follow(index, rhs, None, ctx)
            elif isinstance(ins, NewArray):
                follow(index, ins.size, None, ctx.flagged(via_array_size=True))
            elif isinstance(ins, Invoke):
                self._visit_invoke(sig, index, ins, ctx, depth, stack, out, follow)
            elif isinstance(ins, (Return, Throw)) and ins.value is not None:
                follow(index, ins.value, None, ctx)

        out.result.instructions.sort(key=lambda s: (s.method != sig, str(s.method), s.index))
        return out.result

    def _setter_ref(self, sig: MethodSig, index: int, ins: Invoke) -> Optional[SetterRef]:
        if (
            ins.kind in (InvokeKind.VIRTUAL, InvokeKind.INTERFACE)
            and ins.assign_target is None
            and len(ins.args) == 1
            and _SETTER_NAME.match(ins.callee.name)
        ):
            return SetterRef(sig, ins.base.name, ins.callee.name, index)
        return None

    def _visit_invoke(self, sig, index, ins: Invoke, ctx, depth, stack, out: _Collector, follow) -> None:
        site = self.graph.site_at.get((sig, index))
        targets = self.graph.resolved_targets.get(site, frozenset()) if site is not None else frozenset()
        setter = self._setter_ref(sig, index, ins)

        if depth > 0 and targets and not (targets & stack):
            for target in sorted(targets):
                summary = self._summary(target, depth - 1, stack | {target})
                out.absorb(summary.under(ctx))
                for p, contexts in sorted(summary.param_contexts.items()):
                    if p >= len(ins.args):
                        continue
                    for inner in contexts:
                        follow(index, ins.args[p], p, ctx.combine(inner).with_setter(setter))
                for key, contexts in sorted(summary.field_contexts.items()):
                    if self.program.is_static_field(key):
                        for inner in contexts:
                            out.used_field(key, ctx.combine(inner))
                if summary.uses_receiver and ins.base is not None:
                    follow(index, ins.base, None, ctx)
            return

        here = self._site(sig, index, None)
        out.clipped(here)
        if str(ins.callee) in self.predictable_sources:
            out.predictable(PredictableCall(str(ins.callee), here, ctx))
        if ins.base is not None:
            follow(index, ins.base, None, ctx)
        arg_ctx = ctx.through_invoke(ins.kind, ins.assign_target is not None).with_setter(setter)
        index_positions = self.collection_apis.get(str(ins.callee), ())
        for position, arg in enumerate(ins.args):
            if position in index_positions:
                follow(index, arg, position, ctx.flagged(via_collection_index=True))
            else:
                follow(index, arg, position, arg_ctx)

    def _summary(self, sig: MethodSig, depth: int, stack: frozenset) -> SliceResult:
        """What flows out of a callee: its returns, field writes and writes into parameter arrays."""
        key = (sig, depth)
        if key in self._summaries:
            return self._summaries[key]
        method = self.program.method(sig)
        params = {name for name in method.param_locals if name}
        op_seeds = []
        ins_seeds = []
        for i, ins in enumerate(method.body):
            if isinstance(ins, Return) and ins.value is not None:
                op_seeds.append((i, ins.value, None, FlowContext()))
            elif isinstance(ins, Assign) and isinstance(ins.target, FieldRef):
                ins_seeds.append((i, FlowContext()))
            elif isinstance(ins, Assign) and isinstance(ins.target, ArrayRef) and ins.target.base.name in params:
                ins_seeds.append((i, FlowContext()))
        result = self._run(sig, SlicingCriterion.intra_return(sig), op_seeds, ins_seeds, depth, stack)
        if any(not self.program.is_static_field(k) for k in result.used_fields):
            result.uses_receiver = True
        self._summaries[key] = result
        return result

    # -- fields --------------------------------------------------------------

    def field_init_slices(self, key: FieldKey) -> list[tuple[MethodSig, SliceResult]]:
        if key in self._field_slices:
            return self._field_slices[key]
        found = []
        for cls, method in self.program.concrete_methods():
            for i, ins in enumerate(method.body):
                if not (isinstance(ins, Assign) and isinstance(ins.target, FieldRef)):
                    continue
                if self.program.field_key(ins.target, cls.name) != key:
                    continue
                criterion = SlicingCriterion.intra_assign(method.sig, i)
                found.append((method.sig, self.intra(criterion)))
        self._field_slices[key] = found
        return found

    # -- inter ---------------------------------------------------------------

    def inter(self, criterion: SlicingCriterion) -> list[SliceResult]:
        if criterion.mode is not CriterionMode.INTER_PARAM:
            raise CriterionError("inter slicing needs an interParam criterion")
        key = (criterion.call_site, criterion.param_indices)
        if key in self._inter:
            return self._inter[key]
        state = _InterState()
        self._ascend([], criterion.call_site, criterion.param_indices, None, state)
        results = []
        seen = set()
        for chain in state.chains:
            ident = tuple(id(part) for part in chain)
            if ident in seen:
                continue
            seen.add(ident)
            results.append(SliceResult.stitch(criterion, chain))
        logger.debug(f"{criterion.call_site}: {len(results)} chain(s), {len(state.visited)} criteria visited")
        self._inter[key] = results
        return results

    def _ascend(self, prefix, site: CallSite, params, seeds, state: _InterState) -> None:
        key = (site, frozenset(params))
        if key in state.visited:
            if prefix:
                state.chains.append(prefix)
            return
        state.visited.add(key)
        criterion = SlicingCriterion.intra_param(site.caller, site.instruction_index, params)
        self._grow(prefix, self.intra(criterion, seeds=seeds), site.caller, state)

    def _grow(self, prefix, part: SliceResult, method: MethodSig, state: _InterState) -> None:
        chain = prefix + [part]
        grew = False
        for fkey in sorted(part.field_contexts):
            for ctx in part.field_contexts[fkey]:
                # each (field, context) pair is expanded once per inter slice
                if (fkey, ctx) in state.fields_seen:
                    continue
                state.fields_seen.add((fkey, ctx))
                for init_method, fslice in self.field_init_slices(fkey):
                    grew = True
                    self._grow(chain, fslice.under(ctx), init_method, state)
        if part.influencing_params:
            for caller in call_sites_of(self.graph, method):
                grew = True
                self._ascend(chain, caller, part.influencing_params, part.param_contexts, state)
        if not grew:
            state.chains.append(chain)


# ---------------------------------------------------------------------------
# Functional entry points
# ---------------------------------------------------------------------------

def intra_backward_slice(program: Program, graph: CallGraph, method: MethodSig,
                         criterion: SlicingCriterion, depth: int = 1) -> SliceResult:
    if criterion.method != method:
        raise CriterionError(f"criterion targets {criterion.method}, not {method}")
    return BackwardSlicer(program, graph, depth).intra(criterion)


def inter_backward_slices(graph: CallGraph, program: Program, criterion: SlicingCriterion,
                          depth: int = 1) -> list[SliceResult]:
    return BackwardSlicer(program, graph, depth).inter(criterion)


def field_init_slices(graph: CallGraph, program: Program, key: FieldKey,
                      depth: int = 1) -> list[tuple[MethodSig, SliceResult]]:
    return BackwardSlicer(program, graph, depth).field_init_slices(key)


def format_slice(results: list[SliceResult]) -> str:
    """Debug rendering used by `analyze --dump-slice`."""
    lines = []
    for n, result in enumerate(results):
        lines.append(f"chain {n}:")
        for step in result.instructions:
            ins = step.instruction
            lines.append(f"  {step.method} @{ins.line}: {render_instruction(ins)}")
        for cand in result.constants:
            flags = ",".join(cand.context.flags()) or "-"
            lines.append(f"  constant {cand.text!r} @{cand.site.line} [{flags}]")
        for call in result.predictable_calls:
            flags = ",".join(call.context.flags()) or "-"
            lines.append(f"  predictable {call.api} @{call.site.line} [{flags}]")
    return "\n".join(lines) + "\n"
