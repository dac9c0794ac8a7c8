"""
TIR parser and renderer.

The grammar is line oriented: one class header, field, method header or
instruction per line. `#` starts a comment outside string and char literals.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from core.ir import (
    ArrayRef,
    Assign,
    BinOp,
    CaughtException,
    ClassDef,
    ConstBool,
    ConstChar,
    ConstInt,
    ConstLong,
    ConstNull,
    ConstString,
    FieldDef,
    FieldRef,
    Goto,
    If,
    Instruction,
    Invoke,
    InvokeKind,
    Label,
    LengthOf,
    Local,
    MethodDef,
    MethodSig,
    NewArray,
    NewObject,
    ParamRef,
    Program,
    Return,
    Throw,
    Value,
)

logger = logging.getLogger(__name__)


class TirError(ValueError):
    """Base class for every problem found in a TIR source."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")


class TirSyntaxError(TirError):
    pass


class DuplicateClassError(TirError):
    pass


class DuplicateMemberError(TirError):
    pass


class UndefinedLabelError(TirError):
    pass


class UseBeforeDefError(TirError):
    pass


_IDENT = r"[A-Za-z_$][\w$]*"
_QNAME = r"[A-Za-z_$][\w$.]*"
_TYPE = r"[A-Za-z_$][\w$.]*(?:\[\])*"

_CLASS_RE = re.compile(
    rf"^class\s+(?P<name>{_QNAME})"
    rf"(?:\s+extends\s+(?P<super>{_QNAME}))?"
    rf"(?:\s+implements\s+(?P<ifaces>{_QNAME}(?:\s*,\s*{_QNAME})*))?"
    r"\s*\{$"
)
_FIELD_RE = re.compile(rf"^(?P<static>static\s+)?field\s+(?P<type>{_TYPE})\s+(?P<name>{_IDENT})$")
_METHOD_RE = re.compile(
    rf"^(?P<static>static\s+)?method\s+(?P<ret>{_TYPE})\s+(?P<name><init>|<clinit>|{_IDENT})"
    r"\s*\((?P<params>[^)]*)\)\s*\{$"
)
_SIG_RE = re.compile(
    rf"^<(?P<owner>{_QNAME}):\s*(?P<ret>{_TYPE})\s+(?P<name><init>|<clinit>|{_IDENT})"
    r"\((?P<params>[^)]*)\)>$"
)
_LABEL_RE = re.compile(rf"^(?P<name>{_IDENT}):$")
_GOTO_RE = re.compile(rf"^goto\s+(?P<label>{_IDENT})$")
_IF_RE = re.compile(rf"^if\s+(?P<left>.+?)\s+(?P<cmp>==|!=|<=|>=|<|>)\s+(?P<right>.+?)\s+goto\s+(?P<label>{_IDENT})$")
_IDENTITY_RE = re.compile(rf"^(?P<target>{_IDENT})\s*:=\s*(?:param\s+(?P<index>\d+)|(?P<caught>@caughtexception))$")
_STATIC_INVOKE_RE = re.compile(r"^staticinvoke\s+(?P<sig><.+?\)>)\((?P<args>.*)\)$")
_INSTANCE_INVOKE_RE = re.compile(
    rf"^(?:(?P<kw>specialinvoke|interfaceinvoke|virtualinvoke)\s+)?(?P<base>{_IDENT})\.(?P<sig><.+?\)>)\((?P<args>.*)\)$"
)
_NEWARRAY_RE = re.compile(rf"^newarray\s+(?P<type>{_QNAME})\s*\[(?P<size>[^\]]+)\]$")
_NEW_RE = re.compile(rf"^new\s+(?P<type>{_QNAME})$")
_LENGTHOF_RE = re.compile(r"^lengthof\s+(?P<value>.+)$")
_INT_RE = re.compile(r"^-?\d+$")
_LONG_RE = re.compile(r"^-?\d+L$")
_LOCAL_RE = re.compile(rf"^{_IDENT}$")
_INSTANCE_FIELD_RE = re.compile(rf"^(?P<base>{_IDENT})\.<(?:(?P<owner>{_QNAME}):\s*)?(?P<name>{_IDENT})>$")
_STATIC_FIELD_RE = re.compile(rf"^<(?P<owner>{_QNAME})>\.<(?P<name>{_IDENT})>$")
_ARRAY_RE = re.compile(rf"^(?P<base>{_IDENT})\[(?P<index>[^\]]+)\]$")

_BINARY_OPS = ("<<", ">>", "+", "-", "*", "/", "%", "&", "|", "^")
_KEYWORDS = {"null", "true", "false", "new", "newarray", "lengthof", "goto", "if", "return", "throw",
             "staticinvoke", "specialinvoke", "interfaceinvoke", "virtualinvoke", "class", "method", "field"}
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r", "'": "'"}
_UNESCAPES = {v: k for k, v in _ESCAPES.items()}
_PRIMITIVES = {"byte", "short", "int", "long", "float", "double", "boolean", "char", "void"}


# ---------------------------------------------------------------------------
# Lexical helpers
# ---------------------------------------------------------------------------

def _strip_comment(text: str) -> str:
    quote = None
    escaped = False
    for i, ch in enumerate(text):
        if quote:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            return text[:i]
    return text


def _top_level_positions(text: str, needle: str) -> list[int]:
    """Offsets of `needle` outside quotes and angle-bracket signatures."""
    found = []
    quote = None
    escaped = False
    depth = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if quote:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(needle, i):
            found.append(i)
        i += 1
    return found


def _split_args(text: str) -> list[str]:
    text = text.strip()
    if not text:
        return []
    parts = []
    start = 0
    for pos in _top_level_positions(text, ","):
        parts.append(text[start:pos].strip())
        start = pos + 1
    parts.append(text[start:].strip())
    return parts


def _unescape(body: str, line: int, column: int) -> str:
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            if i + 1 >= len(body) or body[i + 1] not in _ESCAPES:
                raise TirSyntaxError("invalid escape sequence", line, column + i)
            out.append(_ESCAPES[body[i + 1]])
            i += 2
            continue
        if ch == '"':
            raise TirSyntaxError("unescaped quote in string literal", line, column + i)
        out.append(ch)
        i += 1
    return "".join(out)


def _escape(text: str, quote: str = '"') -> str:
    special = {"\\", quote, "\n", "\t", "\r"}
    return "".join(f"\\{_UNESCAPES[ch]}" if ch in special else ch for ch in text)


def source_lines(text: str) -> list[str]:
    """Physical lines of a TIR source: only a newline ends a line and a trailing CR is dropped."""
    return [raw[:-1] if raw.endswith("\r") else raw for raw in text.split("\n")]


def _parse_types(text: str, line: int, column: int) -> tuple[str, ...]:
    text = text.strip()
    if not text:
        return ()
    types = tuple(t.strip() for t in text.split(","))
    for t in types:
        if not re.fullmatch(_TYPE, t):
            raise TirSyntaxError(f"invalid type name {t!r}", line, column)
    return types


def parse_signature(text: str, line: int = 0, column: int = 0) -> MethodSig:
    """Parse `<owner: ret name(p1,p2)>`."""
    m = _SIG_RE.match(text.strip())
    if not m:
        raise TirSyntaxError(f"malformed method signature {text!r}", line, column)
    return MethodSig(
        owner=m["owner"],
        name=m["name"],
        param_types=_parse_types(m["params"], line, column),
        return_type=m["ret"],
    )


def parse_value(text: str, line: int = 0, column: int = 0) -> Value:
    text = text.strip()
    if not text:
        raise TirSyntaxError("missing value", line, column)
    if text.startswith('"'):
        if len(text) < 2 or not text.endswith('"') or text.endswith('\\"') and not text.endswith('\\\\"'):
            raise TirSyntaxError("unterminated string literal", line, column)
        return ConstString(_unescape(text[1:-1], line, column + 1))
    if text.startswith("'"):
        body = text[1:-1] if len(text) >= 3 and text.endswith("'") else None
        if body is None:
            raise TirSyntaxError("malformed char literal", line, column)
        if len(body) == 2 and body[0] == "\\" and body[1] in _ESCAPES:
            return ConstChar(_ESCAPES[body[1]])
        if len(body) != 1:
            raise TirSyntaxError("malformed char literal", line, column)
        return ConstChar(body)
    if text == "null":
        return ConstNull()
    if text in ("true", "false"):
        return ConstBool(text == "true")
    if _LONG_RE.match(text):
        return ConstLong(int(text[:-1]))
    if _INT_RE.match(text):
        return ConstInt(int(text))
    m = _STATIC_FIELD_RE.match(text)
    if m:
        return FieldRef(m["name"], None, m["owner"])
    m = _INSTANCE_FIELD_RE.match(text)
    if m:
        if m["owner"] is None and m["base"] != "this":
            raise TirSyntaxError("instance field of another object needs an owner: base.<Owner: name>",
                                 line, column)
        return FieldRef(m["name"], Local(m["base"]), m["owner"])
    m = _ARRAY_RE.match(text)
    if m:
        index = parse_value(m["index"], line, column + text.index("[") + 1)
        if isinstance(index, (FieldRef, ArrayRef)):
            raise TirSyntaxError("array index must be a local or a constant", line, column)
        return ArrayRef(Local(m["base"]), index)
    if _LOCAL_RE.match(text) and text not in _KEYWORDS:
        return Local(text)
    raise TirSyntaxError(f"cannot parse value {text!r}", line, column)


def _simple_value(text: str, line: int, column: int) -> Value:
    """A value that may appear as an operand: a local or a constant."""
    value = parse_value(text, line, column)
    if isinstance(value, (FieldRef, ArrayRef)):
        raise TirSyntaxError("operand must be a local or a constant", line, column)
    return value


# ---------------------------------------------------------------------------
# Instructions
# ---------------------------------------------------------------------------

def _parse_invoke(text: str, target: Optional[Local], line: int, column: int) -> Optional[Invoke]:
    m = _STATIC_INVOKE_RE.match(text)
    if m:
        kind, base = InvokeKind.STATIC, None
    else:
        m = _INSTANCE_INVOKE_RE.match(text)
        if not m:
            return None
        kind = {
            "specialinvoke": InvokeKind.SPECIAL,
            "interfaceinvoke": InvokeKind.INTERFACE,
        }.get(m["kw"], InvokeKind.VIRTUAL)
        base = Local(m["base"])
    sig = parse_signature(m["sig"], line, column + m.start("sig"))
    raw_args = _split_args(m["args"])
    args = tuple(_simple_value(a, line, column + m.start("args")) for a in raw_args)
    if len(args) != len(sig.param_types):
        raise TirSyntaxError(
            f"{sig.name} expects {len(sig.param_types)} argument(s), got {len(args)}", line, column
        )
    return Invoke(kind, base, sig, args, target, line)


def _parse_rhs(text: str, target, line: int, column: int):
    """Return an Instruction for `target = text`."""
    if isinstance(target, Local):
        invoke = _parse_invoke(text, target, line, column)
        if invoke is not None:
            return invoke
        m = _NEWARRAY_RE.match(text)
        if m:
            return NewArray(target, m["type"], _simple_value(m["size"], line, column), line)
    elif text.startswith(("staticinvoke", "specialinvoke", "interfaceinvoke", "virtualinvoke", "newarray")):
        raise TirSyntaxError("invoke and newarray results must be assigned to a local", line, column)

    m = _NEW_RE.match(text)
    if m:
        return Assign(target, NewObject(m["type"]), line)
    m = _LENGTHOF_RE.match(text)
    if m:
        return Assign(target, LengthOf(_simple_value(m["value"], line, column)), line)
    for op in _BINARY_OPS:
        positions = _top_level_positions(text, f" {op} ")
        if positions:
            pos = positions[0]
            left = _simple_value(text[:pos], line, column)
            right = _simple_value(text[pos + len(op) + 2:], line, column + pos + len(op) + 2)
            return Assign(target, BinOp(op, left, right), line)
    value = parse_value(text, line, column)
    if not isinstance(target, Local) and isinstance(value, (FieldRef, ArrayRef)):
        raise TirSyntaxError("memory-to-memory assignment is not three-address", line, column)
    return Assign(target, value, line)


def parse_instruction(text: str, line: int = 0, column: int = 1) -> Instruction:
    m = _LABEL_RE.match(text)
    if m:
        return Label(m["name"], line)
    if text == "return":
        return Return(None, line)
    if text.startswith("return "):
        return Return(_simple_value(text[7:], line, column + 7), line)
    if text.startswith("throw "):
        return Throw(_simple_value(text[6:], line, column + 6), line)
    m = _GOTO_RE.match(text)
    if m:
        return Goto(m["label"], line)
    if text.startswith("if "):
        m = _IF_RE.match(text)
        if not m:
            raise TirSyntaxError("malformed if statement", line, column)
        return If(
            _simple_value(m["left"], line, column + m.start("left")),
            m["cmp"],
            _simple_value(m["right"], line, column + m.start("right")),
            m["label"],
            line,
        )
    m = _IDENTITY_RE.match(text)
    if m:
        target = Local(m["target"])
        if m["caught"]:
            return Assign(target, CaughtException(), line)
        return Assign(target, ParamRef(int(m["index"])), line)

    eq = [p for p in _top_level_positions(text, "=")
          if text[p - 1:p] not in ("=", "!", "<", ">", ":") and text[p + 1:p + 2] != "="]
    if eq:
        pos = eq[0]
        lhs_text = text[:pos].strip()
        rhs_text = text[pos + 1:].strip()
        if not rhs_text:
            raise TirSyntaxError("missing right-hand side", line, column + pos + 1)
        lhs = parse_value(lhs_text, line, column)
        if not isinstance(lhs, (Local, FieldRef, ArrayRef)):
            raise TirSyntaxError("assignment target must be a local, field or array cell", line, column)
        return _parse_rhs(rhs_text, lhs, line, column + pos + 2)

    invoke = _parse_invoke(text, None, line, column)
    if invoke is not None:
        return invoke
    raise TirSyntaxError(f"unrecognised instruction {text!r}", line, column)


# ---------------------------------------------------------------------------
# Method validation
# ---------------------------------------------------------------------------

def _value_locals(value) -> list[str]:
    if isinstance(value, Local):
        return [value.name]
    if isinstance(value, FieldRef):
        return [value.base.name] if value.base is not None else []
    if isinstance(value, ArrayRef):
        return [value.base.name, *_value_locals(value.index)]
    if isinstance(value, BinOp):
        return _value_locals(value.left) + _value_locals(value.right)
    if isinstance(value, LengthOf):
        return _value_locals(value.value)
    return []


def read_locals(ins: Instruction) -> list[str]:
    """Locals an instruction reads, in operand order."""
    if isinstance(ins, Assign):
        names = _value_locals(ins.rhs)
        if isinstance(ins.target, (FieldRef, ArrayRef)):
            names = _value_locals(ins.target) + names
        return names
    if isinstance(ins, Invoke):
        names = [ins.base.name] if ins.base is not None else []
        for arg in ins.args:
            names += _value_locals(arg)
        return names
    if isinstance(ins, NewArray):
        return _value_locals(ins.size)
    if isinstance(ins, (Return, Throw)):
        return _value_locals(ins.value) if ins.value is not None else []
    if isinstance(ins, If):
        return _value_locals(ins.left) + _value_locals(ins.right)
    return []


def defined_local(ins: Instruction) -> Optional[str]:
    if isinstance(ins, Assign) and isinstance(ins.target, Local):
        return ins.target.name
    if isinstance(ins, Invoke) and ins.assign_target is not None:
        return ins.assign_target.name
    if isinstance(ins, NewArray):
        return ins.target.name
    return None


def _validate_body(sig: MethodSig, body: list[Instruction], is_static: bool, source: str) -> tuple:
    labels: dict[str, Label] = {}
    for ins in body:
        if isinstance(ins, Label):
            if ins.name in labels:
                raise TirSyntaxError(f"duplicate label {ins.name}", ins.line, 1, source)
            labels[ins.name] = ins
    for ins in body:
        if isinstance(ins, (If, Goto)) and ins.label not in labels:
            raise UndefinedLabelError(f"undefined label {ins.label}", ins.line, 1, source)

    defined = set() if is_static else {"this"}
    param_locals: list[Optional[str]] = [None] * len(sig.param_types)
    for ins in body:
        for name in read_locals(ins):
            if name not in defined:
                raise UseBeforeDefError(f"local {name} read before definition", ins.line, 1, source)
        if isinstance(ins, Assign) and isinstance(ins.rhs, ParamRef):
            index = ins.rhs.index
            if index >= len(sig.param_types):
                raise TirSyntaxError(f"{sig.name} has no parameter {index}", ins.line, 1, source)
            param_locals[index] = ins.target.name
        name = defined_local(ins)
        if name is not None:
            defined.add(name)
    return tuple(param_locals)


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

@dataclass
class _ClassBuilder:
    name: str
    superclass: Optional[str]
    interfaces: tuple[str, ...]
    line: int
    fields: list
    methods: list


def _parse_classes(text: str, source: str) -> list[tuple[ClassDef, int]]:
    classes = []
    current: Optional[_ClassBuilder] = None
    method_header = None
    body: list[Instruction] = []

    for lineno, raw in enumerate(source_lines(text), start=1):
        stripped_comment = _strip_comment(raw)
        line = stripped_comment.strip()
        if not line:
            continue
        column = len(stripped_comment) - len(stripped_comment.lstrip()) + 1
        try:
            if current is None:
                m = _CLASS_RE.match(line)
                if not m:
                    raise TirSyntaxError("expected class declaration", lineno, column)
                ifaces = tuple(i.strip() for i in m["ifaces"].split(",")) if m["ifaces"] else ()
                current = _ClassBuilder(m["name"], m["super"], ifaces, lineno, [], [])
                continue

            if method_header is not None:
                if line == "}":
                    sig, is_static, header_line = method_header
                    param_locals = _validate_body(sig, body, is_static, source)
                    current.methods.append((MethodDef(sig, tuple(body), is_static, param_locals), header_line))
                    method_header, body = None, []
                    continue
                body.append(parse_instruction(line, lineno, column))
                continue

            if line == "}":
                fields = tuple(f for f, _ in current.fields)
                methods = tuple(m for m, _ in current.methods)
                classes.append((ClassDef(current.name, current.superclass, current.interfaces,
                                         fields, methods, False, source), current.line))
                current = None
                continue
            m = _FIELD_RE.match(line)
            if m:
                if any(f.name == m["name"] for f, _ in current.fields):
                    raise DuplicateMemberError(f"duplicate field {m['name']} in {current.name}", lineno, column)
                current.fields.append((FieldDef(m["name"], m["type"], bool(m["static"])), lineno))
                continue
            m = _METHOD_RE.match(line)
            if m:
                sig = MethodSig(current.name, m["name"], _parse_types(m["params"], lineno, column), m["ret"])
                if any(existing.sig.subsignature == sig.subsignature for existing, _ in current.methods):
                    raise DuplicateMemberError(f"duplicate method {sig}", lineno, column)
                method_header = (sig, bool(m["static"]), lineno)
                body = []
                continue
            raise TirSyntaxError("expected field, method or '}'", lineno, column)
        except TirError as exc:
            if not exc.source and source:
                raise type(exc)(exc.message, exc.line, exc.column, source) from None
            raise

    if current is not None:
        raise TirSyntaxError(f"class {current.name} is not closed", current.line, 1, source)
    return classes


def _referenced_classes(cls: ClassDef) -> list[str]:
    names = []
    if cls.superclass:
        names.append(cls.superclass)
    names.extend(cls.interfaces)
    for method in cls.methods:
        for ins in method.body or ():
            if isinstance(ins, Invoke):
                names.append(ins.callee.owner)
            elif isinstance(ins, Assign):
                if isinstance(ins.rhs, NewObject):
                    names.append(ins.rhs.type_name)
                for ref in (ins.target, ins.rhs):
                    if isinstance(ref, FieldRef) and ref.owner is not None:
                        names.append(ref.owner)
    return [n for n in names if n not in _PRIMITIVES]


def parse_class_defs(sources: Iterable[tuple[str, str]]) -> dict[str, ClassDef]:
    """Class definitions of several (path, text) sources; duplicates are rejected."""
    classes: dict[str, ClassDef] = {}
    for source, text in sources:
        for cls, line in _parse_classes(text, source):
            if cls.name in classes:
                raise DuplicateClassError(f"duplicate class {cls.name}", line, 1, source)
            classes[cls.name] = cls
    return classes


def link_program(classes: dict[str, ClassDef], manifest=None) -> Program:
    """Program over `classes` with every referenced but undefined class registered as a phantom."""
    classes = dict(classes)
    phantoms: dict[str, ClassDef] = {}
    for cls in list(classes.values()):
        for name in _referenced_classes(cls):
            if name not in classes and name not in phantoms:
                phantoms[name] = ClassDef(name, is_phantom=True)
    classes.update(phantoms)
    logger.debug(f"linked {len(classes) - len(phantoms)} classes, {len(phantoms)} phantom")
    return Program(classes, manifest)


def parse_sources(sources: Iterable[tuple[str, str]], manifest=None) -> Program:
    """Parse several (path, text) sources into one Program."""
    return link_program(parse_class_defs(sources), manifest)


def parse_program(source_text: str, source: str = "") -> Program:
    return parse_sources([(source, source_text)])


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_value(value) -> str:
    if isinstance(value, Local):
        return value.name
    if isinstance(value, ConstString):
        return f'"{_escape(value.text)}"'
    if isinstance(value, ConstChar):
        return "'" + _escape(value.value, "'") + "'"
    if isinstance(value, ConstLong):
        return f"{value.value}L"
    if isinstance(value, ConstInt):
        return str(value.value)
    if isinstance(value, ConstBool):
        return "true" if value.value else "false"
    if isinstance(value, ConstNull):
        return "null"
    if isinstance(value, FieldRef):
        if value.base is None:
            return f"<{value.owner}>.<{value.name}>"
        if value.owner is None:
            return f"{value.base.name}.<{value.name}>"
        return f"{value.base.name}.<{value.owner}: {value.name}>"
    if isinstance(value, ArrayRef):
        return f"{value.base.name}[{render_value(value.index)}]"
    raise TypeError(f"not a value: {value!r}")


def _render_expr(expr) -> str:
    if isinstance(expr, NewObject):
        return f"new {expr.type_name}"
    if isinstance(expr, BinOp):
        return f"{render_value(expr.left)} {expr.op} {render_value(expr.right)}"
    if isinstance(expr, LengthOf):
        return f"lengthof {render_value(expr.value)}"
    return render_value(expr)


def render_instruction(ins: Instruction) -> str:
    if isinstance(ins, Label):
        return f"{ins.name}:"
    if isinstance(ins, Goto):
        return f"goto {ins.label}"
    if isinstance(ins, If):
        return f"if {render_value(ins.left)} {ins.cmp} {render_value(ins.right)} goto {ins.label}"
    if isinstance(ins, Return):
        return "return" if ins.value is None else f"return {render_value(ins.value)}"
    if isinstance(ins, Throw):
        return f"throw {render_value(ins.value)}"
    if isinstance(ins, NewArray):
        return f"{ins.target.name} = newarray {ins.elem_type}[{render_value(ins.size)}]"
    if isinstance(ins, Invoke):
        args = ", ".join(render_value(a) for a in ins.args)
        if ins.kind is InvokeKind.STATIC:
            call = f"staticinvoke {ins.callee}({args})"
        else:
            keyword = {InvokeKind.SPECIAL: "specialinvoke ", InvokeKind.INTERFACE: "interfaceinvoke "}.get(ins.kind, "")
            call = f"{keyword}{ins.base.name}.{ins.callee}({args})"
        return call if ins.assign_target is None else f"{ins.assign_target.name} = {call}"
    if isinstance(ins, Assign):
        if isinstance(ins.rhs, ParamRef):
            return f"{ins.target.name} := param {ins.rhs.index}"
        if isinstance(ins.rhs, CaughtException):
            return f"{ins.target.name} := @caughtexception"
        return f"{render_value(ins.target)} = {_render_expr(ins.rhs)}"
    raise TypeError(f"not an instruction: {ins!r}")


def render_program(program: Program) -> str:
    out = []
    for cls in program.classes.values():
        if cls.is_phantom:
            continue
        header = f"class {cls.name}"
        if cls.superclass:
            header += f" extends {cls.superclass}"
        if cls.interfaces:
            header += " implements " + ", ".join(cls.interfaces)
        out.append(header + " {")
        for f in cls.fields:
            out.append(f"  {'static ' if f.is_static else ''}field {f.declared_type} {f.name}")
        for method in cls.methods:
            sig = method.sig
            params = ", ".join(sig.param_types)
            prefix = "static " if method.is_static else ""
            out.append(f"  {prefix}method {sig.return_type} {sig.name}({params}) {{")
            for ins in method.body or ():
                out.append(f"    {render_instruction(ins)}")
            out.append("  }")
        out.append("}")
        out.append("")
    return "\n".join(out)
