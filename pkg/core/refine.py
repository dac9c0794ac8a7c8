"""
Refinement passes that drop pseudo-influences from slice candidates.

Passes run in a fixed order and a removed candidate is attributed to the
first pass that matches it:

    RI-I    argument of a virtual invoke whose result is assigned (state indicator)
    RI-II   argument of a static or interface invoke whose result is assigned (source identifier)
    RI-III  array index, array size or collection index (bookkeeping)
    RI-IV   constant whose type cannot be the expected value
    RI-V    null or empty-string initialiser the API contract forbids
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

from core.backward import ConstantCandidate, PredictableCall
from core.ir import ConstBool, ConstChar, ConstInt, ConstLong, ConstNull, ConstString, InvokeKind

logger = logging.getLogger(__name__)

Candidate = Union[ConstantCandidate, PredictableCall]


class ValueKind(str, Enum):
    BYTE_ARRAY = "byteArrayLike"
    CHAR_ARRAY = "charArrayLike"
    STRING = "stringLike"
    INT = "intLike"
    URL = "urlLike"


@dataclass(frozen=True)
class RefinementContext:
    rule_id: int
    expected_kind: ValueKind
    forbid_null: bool = False
    forbid_empty_string: bool = False


@dataclass
class RemovalLog:
    entries: list[tuple[Candidate, str, str]] = field(default_factory=list)

    def add(self, cand: Candidate, ri: str, reason: str) -> None:
        self.entries.append((cand, ri, reason))

    def counts(self) -> dict[str, int]:
        return dict(Counter(ri for _, ri, _ in self.entries))

    def extend(self, other: "RemovalLog") -> None:
        self.entries.extend(other.entries)

    def __len__(self) -> int:
        return len(self.entries)


def ri_state_indicator(cand: Candidate, ctx: Optional[RefinementContext] = None) -> bool:
    """RI-I."""
    return cand.context.invoke_kind is InvokeKind.VIRTUAL and cand.context.in_assignment


def ri_source_identifier(cand: Candidate, ctx: Optional[RefinementContext] = None) -> bool:
    """RI-II."""
    return (
        cand.context.invoke_kind in (InvokeKind.STATIC, InvokeKind.INTERFACE)
        and cand.context.in_assignment
    )


def ri_bookkeeping(cand: Candidate, ctx: Optional[RefinementContext] = None) -> bool:
    """RI-III."""
    c = cand.context
    return c.via_array_index or c.via_array_size or c.via_collection_index


def ri_type_incompatible(cand: Candidate, ctx: RefinementContext) -> bool:
    """RI-IV. Array elements and predictable calls are never judged by type."""
    if not isinstance(cand, ConstantCandidate) or cand.array_element:
        return False
    value = cand.value
    if ctx.expected_kind is ValueKind.INT:
        return isinstance(value, (ConstBool, ConstString, ConstChar))
    return isinstance(value, (ConstBool, ConstInt, ConstLong))


def ri_infeasible_path(cand: Candidate, ctx: RefinementContext) -> bool:
    """RI-V."""
    if not isinstance(cand, ConstantCandidate):
        return False
    if ctx.forbid_null and isinstance(cand.value, ConstNull):
        return True
    return ctx.forbid_empty_string and isinstance(cand.value, ConstString) and cand.value.text == ""


REFINEMENTS: list[tuple[str, Callable, str]] = [
    ("RI-I", ri_state_indicator, "argument of an assigned virtual invoke"),
    ("RI-II", ri_source_identifier, "argument of an assigned static/interface invoke"),
    ("RI-III", ri_bookkeeping, "array index, array size or collection index"),
    ("RI-IV", ri_type_incompatible, "type incompatible with the expected value"),
    ("RI-V", ri_infeasible_path, "null or empty initialiser"),
]

RI_IDS = [ri for ri, _, _ in REFINEMENTS]


def apply_refinements(candidates: list[Candidate], ctx: RefinementContext) -> tuple[list[Candidate], RemovalLog]:
    kept = []
    log = RemovalLog()
    for cand in candidates:
        for ri, predicate, reason in REFINEMENTS:
            if predicate(cand, ctx):
                log.add(cand, ri, reason)
                break
        else:
            kept.append(cand)
    if log.entries:
        logger.debug(f"rule {ctx.rule_id}: refinements removed {len(log)} of {len(candidates)} candidate(s)")
    return kept, log
