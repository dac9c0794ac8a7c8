"""
Reaching definitions and the per-method def-use graph.

A location is one of

    ("local", name)          the local variable itself
    ("cells", name)          the array cells reachable through the local
    ("field", owner, name)   a field, instance or static

Reads of a local touch both its value and its cells, so an array store
followed by a read of the array connects the two.
"""
from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from core.ir import (
    ArrayRef,
    Assign,
    BinOp,
    FieldKey,
    FieldRef,
    Goto,
    If,
    Instruction,
    Invoke,
    Label,
    LengthOf,
    Local,
    MethodDef,
    NewArray,
    Program,
    Return,
    Throw,
)

logger = logging.getLogger(__name__)

ENTRY = -1

Location = tuple


class NoBodyError(ValueError):
    """Raised when a def-use graph is requested for a phantom method."""


def local_loc(name: str) -> Location:
    return ("local", name)


def cells_loc(name: str) -> Location:
    return ("cells", name)


def field_loc(key: FieldKey) -> Location:
    return ("field", key.owner, key.name)


def is_field_loc(loc: Location) -> bool:
    return loc[0] == "field"


# ---------------------------------------------------------------------------
# Per-instruction reads and writes
# ---------------------------------------------------------------------------

class Accesses:
    """Computes the locations an instruction reads and defines."""

    def __init__(self, owner: str, program: Optional[Program] = None):
        self.owner = owner
        self.program = program

    def field_key(self, ref: FieldRef) -> FieldKey:
        if self.program is not None:
            return self.program.field_key(ref, self.owner)
        return FieldKey(ref.owner or self.owner, ref.name)

    def value_reads(self, value) -> set[Location]:
        if isinstance(value, Local):
            return {local_loc(value.name), cells_loc(value.name)}
        if isinstance(value, FieldRef):
            return {field_loc(self.field_key(value))}
        if isinstance(value, ArrayRef):
            return {local_loc(value.base.name), cells_loc(value.base.name)} | self.value_reads(value.index)
        if isinstance(value, BinOp):
            return self.value_reads(value.left) | self.value_reads(value.right)
        if isinstance(value, LengthOf):
            return self.value_reads(value.value)
        return set()

    def reads(self, ins: Instruction) -> set[Location]:
        if isinstance(ins, Assign):
            found = self.value_reads(ins.rhs)
            if isinstance(ins.target, ArrayRef):
                # storing into a cell needs the array reference, not its contents
                found |= {local_loc(ins.target.base.name)} | self.value_reads(ins.target.index)
            return found
        if isinstance(ins, Invoke):
            found = self.value_reads(ins.base) if ins.base is not None else set()
            for arg in ins.args:
                found |= self.value_reads(arg)
            return found
        if isinstance(ins, NewArray):
            return self.value_reads(ins.size)
        if isinstance(ins, (Return, Throw)):
            return self.value_reads(ins.value) if ins.value is not None else set()
        if isinstance(ins, If):
            return self.value_reads(ins.left) | self.value_reads(ins.right)
        return set()

    def defs(self, ins: Instruction) -> list[tuple[Location, bool]]:
        """(location, strong) pairs; strong definitions kill earlier ones."""
        if isinstance(ins, Assign):
            target = ins.target
            if isinstance(target, Local):
                return [(local_loc(target.name), True), (cells_loc(target.name), True)]
            if isinstance(target, FieldRef):
                return [(field_loc(self.field_key(target)), True)]
            return [(cells_loc(target.base.name), False)]
        if isinstance(ins, NewArray):
            return [(local_loc(ins.target.name), True), (cells_loc(ins.target.name), True)]
        if isinstance(ins, Invoke):
            found = []
            if ins.assign_target is not None:
                name = ins.assign_target.name
                found += [(local_loc(name), True), (cells_loc(name), True)]
            elif ins.base is not None:
                found.append((local_loc(ins.base.name), False))
            for arg, ptype in zip(ins.args, ins.callee.param_types):
                if isinstance(arg, Local) and ptype.endswith("[]"):
                    found.append((cells_loc(arg.name), False))
            return found
        return []


# ---------------------------------------------------------------------------
# Control flow
# ---------------------------------------------------------------------------

def successors(body: tuple[Instruction, ...]) -> list[list[int]]:
    labels = {ins.name: i for i, ins in enumerate(body) if isinstance(ins, Label)}
    succ: list[list[int]] = []
    for i, ins in enumerate(body):
        nxt = [i + 1] if i + 1 < len(body) else []
        if isinstance(ins, (Return, Throw)):
            succ.append([])
        elif isinstance(ins, Goto):
            succ.append([labels[ins.label]])
        elif isinstance(ins, If):
            succ.append(sorted({*nxt, labels[ins.label]}))
        else:
            succ.append(nxt)
    return succ


# ---------------------------------------------------------------------------
# Def-use graph
# ---------------------------------------------------------------------------

@dataclass
class DefUseGraph:
    method: MethodDef
    edges: frozenset[tuple[int, int]]
    reaching_in: list[frozenset[tuple[Location, int]]]
    reads_at: list[set[Location]]
    used_fields: set[FieldKey] = field(default_factory=set)
    accesses: Optional[Accesses] = None

    def defs_reaching(self, index: int, locs: Iterable[Location]) -> list[int]:
        """Definitions (ENTRY included) of any of `locs` reaching instruction `index`."""
        wanted = set(locs)
        return sorted({d for loc, d in self.reaching_in[index] if loc in wanted})

    def predecessors(self, index: int) -> list[int]:
        return sorted(d for d, u in self.edges if u == index)

    def backward_closure(self, seeds: Iterable[int]) -> set[int]:
        preds = defaultdict(set)
        for d, u in self.edges:
            preds[u].add(d)
        seen = set(seeds)
        queue = deque(seen)
        while queue:
            u = queue.popleft()
            for d in preds[u]:
                if d not in seen:
                    seen.add(d)
                    queue.append(d)
        return seen

    def forward_closure(self, origin: int) -> set[int]:
        """Instructions transitively influenced by `origin`, excluding it."""
        succs = defaultdict(set)
        for d, u in self.edges:
            succs[d].add(u)
        seen: set[int] = set()
        queue = deque([origin])
        while queue:
            d = queue.popleft()
            for u in succs[d]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        seen.discard(origin)
        return seen


def def_use_graph(method: MethodDef, program: Optional[Program] = None) -> DefUseGraph:
    """Reaching-definitions based def-use graph of one method.

    Branch targets merge conservatively; there are no exception edges, so a
    throw ends its path like a return.
    """
    if method.body is None:
        raise NoBodyError(f"no body: {method.sig}")
    body = method.body
    acc = Accesses(method.sig.owner, program)
    n = len(body)
    reads = [acc.reads(ins) for ins in body]
    defs = [acc.defs(ins) for ins in body]

    universe: set[Location] = set()
    for i in range(n):
        universe |= reads[i]
        universe |= {loc for loc, _ in defs[i]}

    succ = successors(body)
    in_sets: list[set] = [set() for _ in range(n)]
    out_sets: list[set] = [set() for _ in range(n)]
    if n:
        in_sets[0] = {(loc, ENTRY) for loc in universe}

    queue = deque(range(n))
    queued = set(queue)
    while queue:
        i = queue.popleft()
        queued.discard(i)
        killed = {loc for loc, strong in defs[i] if strong}
        out = {(loc, d) for loc, d in in_sets[i] if loc not in killed}
        out |= {(loc, i) for loc, _ in defs[i]}
        if out != out_sets[i] or not out_sets[i]:
            out_sets[i] = out
            for j in succ[i]:
                merged = in_sets[j] | out
                if merged != in_sets[j]:
                    in_sets[j] = merged
                    if j not in queued:
                        queue.append(j)
                        queued.add(j)

    edges = set()
    used_fields: set[FieldKey] = set()
    for u in range(n):
        for loc, d in in_sets[u]:
            if loc not in reads[u]:
                continue
            if d == ENTRY:
                if is_field_loc(loc):
                    used_fields.add(FieldKey(loc[1], loc[2]))
            else:
                edges.add((d, u))

    logger.debug(f"def-use graph for {method.sig}: {len(edges)} edges")
    return DefUseGraph(
        method=method,
        edges=frozenset(edges),
        reaching_in=[frozenset(s) for s in in_sets],
        reads_at=reads,
        used_fields=used_fields,
        accesses=acc,
    )


def reads_of(value, owner: str, program: Optional[Program] = None) -> set[Location]:
    return Accesses(owner, program).value_reads(value)

