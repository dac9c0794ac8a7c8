"""
Program model for TIR: classes, fields, methods, instructions and values.

Everything here is immutable once the parser hands it out, so analysis
workers can share one Program without locking.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterator, NamedTuple, Optional, Union


class InvokeKind(str, Enum):
    STATIC = "static"
    VIRTUAL = "virtual"
    SPECIAL = "special"
    INTERFACE = "interface"


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Local:
    name: str


@dataclass(frozen=True)
class ConstString:
    text: str


@dataclass(frozen=True)
class ConstInt:
    value: int


@dataclass(frozen=True)
class ConstLong:
    value: int


@dataclass(frozen=True)
class ConstBool:
    value: bool


@dataclass(frozen=True)
class ConstChar:
    value: str


@dataclass(frozen=True)
class ConstNull:
    pass


@dataclass(frozen=True)
class FieldRef:
    """Instance field (base set) or static field (base None, owner set)."""
    name: str
    base: Optional[Local] = None
    owner: Optional[str] = None

    @property
    def is_static(self) -> bool:
        return self.base is None


@dataclass(frozen=True)
class ArrayRef:
    base: Local
    index: "Value"


Constant = Union[ConstString, ConstInt, ConstLong, ConstBool, ConstChar, ConstNull]
Value = Union[Local, ConstString, ConstInt, ConstLong, ConstBool, ConstChar, ConstNull, FieldRef, ArrayRef]

CONSTANT_TYPES = (ConstString, ConstInt, ConstLong, ConstBool, ConstChar, ConstNull)


def is_constant(value) -> bool:
    return isinstance(value, CONSTANT_TYPES)


def constant_text(value: Constant) -> str:
    """Evidence text for a constant: strings unquoted, the rest as TIR literals."""
    if isinstance(value, ConstString):
        return value.text
    if isinstance(value, ConstLong):
        return f"{value.value}L"
    if isinstance(value, ConstInt):
        return str(value.value)
    if isinstance(value, ConstBool):
        return "true" if value.value else "false"
    if isinstance(value, ConstChar):
        return value.value
    return "null"


# ---------------------------------------------------------------------------
# Right-hand-side expressions that are not plain values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamRef:
    index: int


@dataclass(frozen=True)
class NewObject:
    type_name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Value
    right: Value


@dataclass(frozen=True)
class LengthOf:
    value: Value


@dataclass(frozen=True)
class CaughtException:
    pass


Expr = Union[Value, ParamRef, NewObject, BinOp, LengthOf, CaughtException]


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class MethodSig:
    owner: str
    name: str
    param_types: tuple[str, ...]
    return_type: str

    @property
    def subsignature(self) -> tuple[str, tuple[str, ...]]:
        return (self.name, self.param_types)

    def with_owner(self, owner: str) -> "MethodSig":
        return MethodSig(owner, self.name, self.param_types, self.return_type)

    def __str__(self) -> str:
        params = ",".join(self.param_types)
        return f"<{self.owner}: {self.return_type} {self.name}({params})>"


class FieldKey(NamedTuple):
    owner: str
    name: str

    def __str__(self) -> str:
        return f"{self.owner}.{self.name}"


# ---------------------------------------------------------------------------
# Instructions
# ---------------------------------------------------------------------------
# `line` is the 1-based line in the source file. It does not take part in
# equality so that parse(render(p)) == p holds.

@dataclass(frozen=True)
class Assign:
    target: Union[Local, FieldRef, ArrayRef]
    rhs: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Invoke:
    kind: InvokeKind
    base: Optional[Local]
    callee: MethodSig
    args: tuple[Value, ...]
    assign_target: Optional[Local] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class NewArray:
    target: Local
    elem_type: str
    size: Value
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Return:
    value: Optional[Value] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Throw:
    value: Value
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    left: Value
    cmp: str
    right: Value
    label: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Goto:
    label: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Label:
    name: str
    line: int = field(default=0, compare=False)


Instruction = Union[Assign, Invoke, NewArray, Return, Throw, If, Goto, Label]


def is_param_binding(ins: Instruction) -> bool:
    return isinstance(ins, Assign) and isinstance(ins.rhs, ParamRef)


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldDef:
    name: str
    declared_type: str
    is_static: bool = False


@dataclass(frozen=True)
class MethodDef:
    sig: MethodSig
    body: Optional[tuple[Instruction, ...]]
    is_static: bool = False
    param_locals: tuple[Optional[str], ...] = ()

    @property
    def is_phantom(self) -> bool:
        return self.body is None


@dataclass(frozen=True)
class ClassDef:
    name: str
    superclass: Optional[str] = None
    interfaces: tuple[str, ...] = ()
    fields: tuple[FieldDef, ...] = ()
    methods: tuple[MethodDef, ...] = ()
    is_phantom: bool = False
    source: str = field(default="", compare=False)

    def find_method(self, name: str, param_types: tuple[str, ...]) -> Optional[MethodDef]:
        for method in self.methods:
            if method.sig.name == name and method.sig.param_types == param_types:
                return method
        return None

    def find_field(self, name: str) -> Optional[FieldDef]:
        for f in self.fields:
            if f.name == name:
                return f
        return None


@dataclass(frozen=True)
class Program:
    classes: dict[str, ClassDef] = field(default_factory=dict)
    manifest: Optional[object] = field(default=None, compare=False)

    @cached_property
    def _methods(self) -> dict[MethodSig, MethodDef]:
        index = {}
        for cls in self.classes.values():
            for method in cls.methods:
                index[method.sig] = method
        return index

    def method(self, sig: MethodSig) -> Optional[MethodDef]:
        found = self._methods.get(sig)
        if found is not None:
            return found
        # Return types do not take part in Java overload resolution
        cls = self.classes.get(sig.owner)
        if cls is None:
            return None
        return cls.find_method(sig.name, sig.param_types)

    def concrete_methods(self) -> Iterator[tuple[ClassDef, MethodDef]]:
        """Yield every (class, method) with a body, in declaration order."""
        for cls in self.classes.values():
            if cls.is_phantom:
                continue
            for method in cls.methods:
                if method.body is not None:
                    yield cls, method

    def source_of(self, class_name: str) -> str:
        cls = self.classes.get(class_name)
        return cls.source if cls is not None else ""

    def superclasses(self, class_name: str) -> Iterator[str]:
        seen = set()
        current = self.classes.get(class_name)
        while current is not None and current.superclass and current.superclass not in seen:
            seen.add(current.superclass)
            yield current.superclass
            current = self.classes.get(current.superclass)

    def implements(self, class_name: str, interface: str) -> bool:
        """True if the class or one of its superclasses names `interface` (or extends it)."""
        chain = [class_name, *self.superclasses(class_name)]
        for name in chain:
            if name == interface:
                return True
            cls = self.classes.get(name)
            if cls is not None and interface in cls.interfaces:
                return True
        return False

    def resolve_field(self, class_name: str, field_name: str) -> FieldKey:
        """Owner that declares `field_name`, searching up the superclass chain."""
        for name in (class_name, *self.superclasses(class_name)):
            cls = self.classes.get(name)
            if cls is not None and cls.find_field(field_name) is not None:
                return FieldKey(name, field_name)
        return FieldKey(class_name, field_name)

    def field_key(self, ref: FieldRef, enclosing: str) -> FieldKey:
        if ref.owner is not None:
            return self.resolve_field(ref.owner, ref.name)
        return self.resolve_field(enclosing, ref.name)

    def is_static_field(self, key: FieldKey) -> bool:
        cls = self.classes.get(key.owner)
        if cls is None:
            return True
        fdef = cls.find_field(key.name)
        return fdef is None or fdef.is_static
