"""
Forward slicing and data-only object tracking.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from core.backward import ConstantCandidate, SliceResult
from core.defuse import def_use_graph
from core.ir import Assign, FieldRef, Invoke, Label, MethodDef, MethodSig, NewArray, ParamRef, Program, Return

logger = logging.getLogger(__name__)

_SETTER = re.compile(r"^set[A-Z0-9_]\w*$")
_GETTER = re.compile(r"^(?:get|is)[A-Z0-9_]\w*$")


class OriginError(ValueError):
    pass


@dataclass(frozen=True)
class ForwardSlice:
    origin: tuple[MethodSig, int]
    influenced: tuple[tuple[MethodSig, int], ...] = ()

    @property
    def indices(self) -> list[int]:
        return [index for _, index in self.influenced]


def intra_forward_slice(method: MethodDef, origin_index: int, program: Optional[Program] = None) -> ForwardSlice:
    """Instructions of `method` influenced by the value defined at `origin_index`, in body order."""
    body = method.body
    if body is None or not 0 <= origin_index < len(body):
        raise OriginError(f"instruction {origin_index} is not in {method.sig}")
    origin = body[origin_index]
    defines_value = (
        isinstance(origin, (Assign, NewArray))
        or (isinstance(origin, Invoke) and origin.assign_target is not None)
    )
    if not defines_value:
        raise OriginError(f"instruction {origin_index} of {method.sig} is not an assignment")
    graph = def_use_graph(method, program)
    reached = sorted(graph.forward_closure(origin_index))
    return ForwardSlice((method.sig, origin_index), tuple((method.sig, i) for i in reached))


@dataclass
class DataOnlyBinding:
    object_local: str
    class_name: str
    tainted_fields: set[str] = field(default_factory=set)


def _field_name(suffix: str) -> str:
    return suffix[:1].lower() + suffix[1:]


def _has_paired_getter(result: SliceResult, cand: ConstantCandidate) -> bool:
    setter = cand.context.setter
    wanted = f"get{setter.suffix}".lower()
    for step in result.instructions:
        ins = step.instruction
        if (
            step.method == setter.method
            and step.index > setter.index
            and isinstance(ins, Invoke)
            and ins.assign_target is not None
            and not ins.args
            and ins.base is not None
            and ins.base.name == setter.receiver
            and ins.callee.name.lower() == wanted
        ):
            return True
    return False


def track_data_only_constant(slices: Iterable[SliceResult], cand: ConstantCandidate) -> bool:
    """Keep a setter argument only if the matching getter on the same object feeds the criterion.

    Candidates that did not arrive through a setter are always kept.
    """
    if cand.context.setter is None:
        return True
    return any(_has_paired_getter(result, cand) for result in slices)


def _is_accessor(method: MethodDef) -> bool:
    """Setter, getter or constructor that only moves values between parameters and fields."""
    sig = method.sig
    if _SETTER.match(sig.name):
        allowed = len(sig.param_types) == 1
    elif _GETTER.match(sig.name):
        allowed = not sig.param_types
    else:
        allowed = sig.name in ("<init>", "<clinit>")
    if not allowed:
        return False
    for ins in method.body or ():
        if isinstance(ins, (Label, Return)):
            continue
        if isinstance(ins, Assign) and (
            isinstance(ins.rhs, ParamRef) or isinstance(ins.target, FieldRef) or isinstance(ins.rhs, FieldRef)
        ):
            continue
        if isinstance(ins, Invoke) and sig.name == "<init>" and ins.callee.name == "<init>":
            continue
        return False
    return True


def is_data_only_class(program: Program, class_name: str) -> bool:
    """Only fields, setters, getters and plain constructors; library classes have no visible members."""
    cls = program.classes.get(class_name)
    if cls is None or cls.is_phantom:
        return True
    return all(_is_accessor(m) for m in cls.methods)


def _touches_fields_of(result: SliceResult, method: MethodSig, local: str) -> bool:
    for step in result.instructions:
        ins = step.instruction
        if step.method != method or not isinstance(ins, Assign):
            continue
        for ref in (ins.target, ins.rhs):
            if isinstance(ref, FieldRef) and ref.base is not None and ref.base.name == local:
                return True
    return False


def data_only_bindings(
    slices: list[SliceResult],
    candidates: Iterable[ConstantCandidate],
    program: Program,
) -> list[DataOnlyBinding]:
    """Data-only objects whose fields were reached by tracked setter constants."""
    bindings: dict[tuple, DataOnlyBinding] = {}
    for result in slices:
        calls = {(s.method, s.index): s.instruction for s in result.instructions}
        for cand in candidates:
            setter = cand.context.setter
            if setter is None or not _has_paired_getter(result, cand):
                continue
            owner = calls.get((setter.method, setter.index))
            if not isinstance(owner, Invoke):
                continue
            class_name = owner.callee.owner
            if not is_data_only_class(program, class_name):
                logger.debug(f"{class_name} has behaviour beyond accessors, no data-only binding")
                continue
            if _touches_fields_of(result, setter.method, setter.receiver):
                continue
            key = (setter.method, setter.receiver)
            binding = bindings.setdefault(key, DataOnlyBinding(setter.receiver, class_name))
            binding.tainted_fields.add(_field_name(setter.suffix))
    return list(bindings.values())
