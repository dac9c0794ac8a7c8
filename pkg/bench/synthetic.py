"""
Synthetic TIR programs for property tests and timing runs.

    random_slice_program          small random methods checked against the slice oracle
    planted_refinement_case       one program with planted pseudo-influences and true positives
    scale_project                 a many-class project for timing the full rule set
    hex_conversion_program        key decoded by a helper one call below the slice
    infeasible_iteration_program  zero initialiser that only survives on an infeasible path

Every generator takes a seed so a failing case can be regenerated exactly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from core.ir import (
    ArrayRef,
    Assign,
    BinOp,
    ConstBool,
    ConstChar,
    ConstInt,
    ConstLong,
    ConstNull,
    ConstString,
    Goto,
    If,
    Invoke,
    Label,
    LengthOf,
    Local,
    MethodDef,
    NewArray,
    Return,
    Throw,
)
from core.parser import source_lines

# ---------------------------------------------------------------------------
# Random methods and the brute-force oracle
# ---------------------------------------------------------------------------

_MIX = "<lib.Codec: byte[] mix(byte[],int)>"
_UPDATE = "<lib.Sink: void update(byte[])>"
_RANDOM_KINDS = ("const", "copy", "binop", "newarray", "store", "load", "length", "mix", "update", "call", "if", "loop")
_MAX_LOOPS = 2


def _random_method(rng: random.Random, owner: str, name: str, size: int, callees: list[str]) -> list[str]:
    body = ["r0 := param 0", "r1 := param 1"]
    values = ["r0", "r1"]
    arrays = ["r0"]
    pending: list[str] = []
    loops: list[tuple[str, int]] = []
    labels = 0
    opened = 0

    def fresh() -> str:
        local = f"r{len(values)}"
        values.append(local)
        return local

    def operand() -> str:
        return rng.choice(values) if rng.random() < 0.7 else str(rng.randint(0, 9))

    def closing() -> int:
        return sum(2 if shape == "while" else 1 for shape, _ in loops)

    def close_loop() -> None:
        shape, n = loops.pop()
        if shape == "while":
            body.extend((f"goto H{n}", f"X{n}:"))
        else:
            body.append(f"if {rng.choice(values)} != 0 goto D{n}")

    while True:
        room = size - len(body) - len(pending) - closing() - 1
        if room <= 0:
            break
        if pending and rng.random() < 0.3:
            body.append(f"{pending.pop(0)}:")
            continue
        if loops and rng.random() < 0.15:
            close_loop()
            continue
        kind = rng.choice(_RANDOM_KINDS)
        if kind == "const":
            literal = str(rng.randint(0, 99)) if rng.random() < 0.5 else f'"k{rng.randint(0, 99)}"'
            body.append(f"{fresh()} = {literal}")
        elif kind == "copy":
            src = rng.choice(values)
            body.append(f"{fresh()} = {src}")
        elif kind == "binop":
            left = rng.choice(values)
            right = operand()
            op = rng.choice(("+", "-", "*", "^"))
            body.append(f"{fresh()} = {left} {op} {right}")
        elif kind == "newarray":
            size_value = operand()
            target = fresh()
            arrays.append(target)
            body.append(f"{target} = newarray byte[{size_value}]")
        elif kind == "store":
            body.append(f"{rng.choice(arrays)}[{operand()}] = {operand()}")
        elif kind == "load":
            array, index = rng.choice(arrays), operand()
            body.append(f"{fresh()} = {array}[{index}]")
        elif kind == "length":
            array = rng.choice(arrays)
            body.append(f"{fresh()} = lengthof {array}")
        elif kind == "mix":
            array, amount = rng.choice(arrays), operand()
            target = fresh()
            arrays.append(target)
            body.append(f"{target} = staticinvoke {_MIX}({array}, {amount})")
        elif kind == "update":
            base, array = rng.choice(values), rng.choice(arrays)
            body.append(f"virtualinvoke {base}.{_UPDATE}({array})")
        elif kind == "call" and callees:
            callee, array, amount = rng.choice(callees), rng.choice(arrays), operand()
            target = fresh()
            arrays.append(target)
            body.append(f"{target} = staticinvoke <{owner}: byte[] {callee}(byte[],int)>({array}, {amount})")
        elif kind == "if":
            label = f"L{labels}"
            labels += 1
            pending.append(label)
            body.append(f"if {rng.choice(values)} == 0 goto {label}")
        elif kind == "loop" and opened < _MAX_LOOPS:
            # a while loop costs four lines, a repeat loop two
            if rng.random() < 0.5 and room >= 4:
                body.extend((f"H{opened}:", f"if {rng.choice(values)} == 0 goto X{opened}"))
                loops.append(("while", opened))
            elif room >= 2:
                body.append(f"D{opened}:")
                loops.append(("repeat", opened))
            else:
                continue
            opened += 1
    while loops:
        close_loop()
    body.extend(f"{label}:" for label in pending)
    body.append(f"return {rng.choice(arrays)}")

    lines = [f"  static method byte[] {name}(byte[],int) {{"]
    lines.extend(f"    {ins}" for ins in body)
    lines.append("  }")
    return lines


def random_slice_program(seed: int, max_methods: int = 4, max_instructions: int = 40) -> str:
    """A class of up to `max_methods` methods with branches and loops; later methods may call earlier ones."""
    rng = random.Random(seed)
    owner = f"synthetic.Slice{seed}"
    lines = [f"class {owner} {{"]
    names: list[str] = []
    for i in range(rng.randint(1, max_methods)):
        name = f"m{i}"
        lines.extend(_random_method(rng, owner, name, rng.randint(6, max_instructions - 1), list(names)))
        names.append(name)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _oracle_value_reads(value) -> set:
    if isinstance(value, Local):
        return {("local", value.name), ("cells", value.name)}
    if isinstance(value, ArrayRef):
        return {("local", value.base.name), ("cells", value.base.name)} | _oracle_value_reads(value.index)
    if isinstance(value, BinOp):
        return _oracle_value_reads(value.left) | _oracle_value_reads(value.right)
    if isinstance(value, LengthOf):
        return _oracle_value_reads(value.value)
    return set()


def _oracle_reads(ins) -> set:
    if isinstance(ins, Assign) and isinstance(ins.target, ArrayRef):
        return ({("local", ins.target.base.name)} | _oracle_value_reads(ins.target.index)
                | _oracle_value_reads(ins.rhs))
    if isinstance(ins, Assign):
        return _oracle_value_reads(ins.rhs)
    if isinstance(ins, Invoke):
        found = _oracle_value_reads(ins.base) if ins.base is not None else set()
        for arg in ins.args:
            found |= _oracle_value_reads(arg)
        return found
    if isinstance(ins, NewArray):
        return _oracle_value_reads(ins.size)
    if isinstance(ins, If):
        return _oracle_value_reads(ins.left) | _oracle_value_reads(ins.right)
    if isinstance(ins, (Return, Throw)) and ins.value is not None:
        return _oracle_value_reads(ins.value)
    return set()


def _oracle_defs(ins) -> tuple[set, set]:
    """(strong, weak) locations written by one instruction."""
    if isinstance(ins, Assign) and isinstance(ins.target, ArrayRef):
        return set(), {("cells", ins.target.base.name)}
    if isinstance(ins, Assign) and isinstance(ins.target, Local):
        return {("local", ins.target.name), ("cells", ins.target.name)}, set()
    if isinstance(ins, NewArray):
        return {("local", ins.target.name), ("cells", ins.target.name)}, set()
    if isinstance(ins, Invoke):
        strong, weak = set(), set()
        if ins.assign_target is not None:
            strong = {("local", ins.assign_target.name), ("cells", ins.assign_target.name)}
        elif ins.base is not None:
            weak.add(("local", ins.base.name))
        for arg, ptype in zip(ins.args, ins.callee.param_types):
            if isinstance(arg, Local) and ptype.endswith("[]"):
                weak.add(("cells", arg.name))
        return strong, weak
    return set(), set()


def oracle_def_use_edges(method: MethodDef, unroll: int = 2) -> set[tuple[int, int]]:
    """Def-use edges by enumerating paths of a method body.

    Each backward jump is taken at most `unroll` times per path. Two is
    enough: a def-use pair is witnessed by a simple path to the def followed
    by a simple path from the def to the use.
    """
    body = method.body
    labels = {ins.name: i for i, ins in enumerate(body) if isinstance(ins, Label)}
    edges = set()
    seen = set()
    paths = [(0, {}, {})]
    while paths:
        i, live, taken = paths.pop()
        if i >= len(body):
            continue
        state = (i, frozenset(live.items()), frozenset(taken.items()))
        if state in seen:
            continue
        seen.add(state)
        ins = body[i]
        for loc in _oracle_reads(ins):
            for d in live.get(loc, ()):
                edges.add((d, i))
        strong, weak = _oracle_defs(ins)
        after = dict(live)
        for loc in strong:
            after[loc] = frozenset({i})
        for loc in weak:
            after[loc] = after.get(loc, frozenset()) | {i}
        if isinstance(ins, (Return, Throw)):
            continue
        targets = [] if isinstance(ins, Goto) else [i + 1]
        if isinstance(ins, (Goto, If)):
            targets.append(labels[ins.label])
        for target in targets:
            if target > i:
                paths.append((target, after, taken))
            elif taken.get(i, 0) < unroll:
                paths.append((target, after, {**taken, i: taken.get(i, 0) + 1}))
    return edges


def oracle_backward(edges: set[tuple[int, int]], seeds) -> set[int]:
    reached = set(seeds)
    changed = True
    while changed:
        changed = False
        for d, u in edges:
            if u in reached and d not in reached:
                reached.add(d)
                changed = True
    return reached


def oracle_forward(edges: set[tuple[int, int]], origin: int) -> set[int]:
    reached = {origin}
    changed = True
    while changed:
        changed = False
        for d, u in edges:
            if d in reached and u not in reached:
                reached.add(u)
                changed = True
    return reached - {origin}


# ---------------------------------------------------------------------------
# Planted refinement corpus
# ---------------------------------------------------------------------------

_KEY_SPEC = "<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>"
_PBE_SPEC = "<javax.crypto.spec.PBEParameterSpec: void <init>(byte[],int)>"
_GET_BYTES = "<java.lang.String: byte[] getBytes()>"


@dataclass(frozen=True)
class Planted:
    rule_id: int
    line: int
    evidence: str
    ri: Optional[str] = None  # None marks a true positive

    @property
    def is_true_positive(self) -> bool:
        return self.ri is None


@dataclass
class PlantedCase:
    seed: int
    text: str
    planted: list[Planted] = field(default_factory=list)

    @property
    def pseudo(self) -> list[Planted]:
        return [p for p in self.planted if not p.is_true_positive]

    @property
    def true_positives(self) -> list[Planted]:
        return [p for p in self.planted if p.is_true_positive]


class _Writer:
    def __init__(self):
        self.lines: list[str] = []
        self.planted: list[Planted] = []

    def emit(self, text: str, plant: Optional[tuple] = None) -> None:
        self.lines.append(text)
        if plant is not None:
            rule_id, evidence, ri = plant
            self.planted.append(Planted(rule_id, len(self.lines), evidence, ri))

    def key_sink(self, local: str) -> None:
        self.emit("    r9 = new javax.crypto.spec.SecretKeySpec")
        self.emit(f'    specialinvoke r9.{_KEY_SPEC}({local}, "AES")')


def _plant_state_indicator(w: _Writer, rng: random.Random, name: str) -> None:
    charset = rng.choice(("UTF-8", "ISO-8859-1", "US-ASCII", "UTF-16"))
    w.emit(f"  static method void {name}(java.lang.String) {{")
    w.emit("    r1 := param 0")
    w.emit(f'    r2 = r1.<java.lang.String: byte[] getBytes(java.lang.String)>("{charset}")', (1, charset, "RI-I"))
    w.key_sink("r2")


def _plant_source_identifier(w: _Writer, rng: random.Random, name: str) -> None:
    prop = rng.choice(("crypto.key", "app.secret", "db.password", "token.seed"))
    if rng.random() < 0.5:
        w.emit(f"  static method void {name}() {{")
        w.emit(f'    r1 = staticinvoke <java.lang.System: java.lang.String getProperty(java.lang.String)>("{prop}")',
               (1, prop, "RI-II"))
    else:
        w.emit(f"  static method void {name}(java.util.Map) {{")
        w.emit("    r0 := param 0")
        w.emit(f'    r1 = interfaceinvoke r0.<java.util.Map: java.lang.Object get(java.lang.Object)>("{prop}")',
               (1, prop, "RI-II"))
    w.emit(f"    r2 = r1.{_GET_BYTES}()")
    w.key_sink("r2")


def _plant_bookkeeping(w: _Writer, rng: random.Random, name: str) -> None:
    variant = rng.choice(("index", "size", "collection"))
    if variant == "index":
        k = rng.randint(0, 9)
        w.emit(f"  static method void {name}(java.lang.String[]) {{")
        w.emit("    r1 := param 0")
        w.emit(f"    r2 = r1[{k}]", (1, str(k), "RI-III"))
        w.emit(f"    r3 = r2.{_GET_BYTES}()")
        w.key_sink("r3")
    elif variant == "size":
        n = rng.choice((16, 24, 32))
        w.emit(f"  static method void {name}() {{")
        w.emit(f"    r1 = newarray byte[{n}]", (1, str(n), "RI-III"))
        w.emit("    r2 = new java.security.SecureRandom")
        w.emit("    specialinvoke r2.<java.security.SecureRandom: void <init>()>()")
        w.emit("    virtualinvoke r2.<java.security.SecureRandom: void nextBytes(byte[])>(r1)")
        w.key_sink("r1")
    else:
        k = rng.randint(0, 9)
        w.emit(f"  static method void {name}(java.util.List) {{")
        w.emit("    r1 := param 0")
        w.emit(f"    r2 = interfaceinvoke r1.<java.util.List: java.lang.Object get(int)>({k})", (1, str(k), "RI-III"))
        w.emit(f"    r3 = r2.{_GET_BYTES}()")
        w.key_sink("r3")


def _plant_type_incompatible(w: _Writer, rng: random.Random, name: str) -> None:
    sentinel = rng.choice(("0", "-1", "false"))
    w.emit(f"  static method void {name}(byte[]) {{")
    w.emit("    r1 := param 0")
    w.emit("    if r1 != null goto ready")
    w.emit(f"    r1 = {sentinel}", (1, sentinel, "RI-IV"))
    w.emit("  ready:")
    w.key_sink("r1")


def _plant_infeasible_init(w: _Writer, rng: random.Random, name: str) -> None:
    w.emit(f"  static method void {name}(java.lang.String) {{")
    w.emit("    r1 := param 0")
    if rng.random() < 0.5:
        w.emit("    r2 = null", (1, "null", "RI-V"))
        w.emit("    if r1 == null goto use")
        w.emit(f"    r2 = r1.{_GET_BYTES}()")
        w.emit("  use:")
        w.key_sink("r2")
    else:
        w.emit('    r2 = ""', (1, "", "RI-V"))
        w.emit("    if r1 == null goto use")
        w.emit("    r2 = r1")
        w.emit("  use:")
        w.emit(f"    r3 = r2.{_GET_BYTES}()")
        w.key_sink("r3")


def _plant_constant_key(w: _Writer, rng: random.Random, name: str) -> None:
    secret = "".join(rng.choice("0123456789abcdef") for _ in range(16))
    w.emit(f"  static method void {name}() {{")
    w.emit(f'    r1 = "{secret}"', (1, secret, None))
    w.emit(f"    r2 = r1.{_GET_BYTES}()")
    w.key_sink("r2")


def _plant_low_iterations(w: _Writer, rng: random.Random, name: str) -> None:
    count = rng.randint(1, 999)
    w.emit(f"  static method void {name}() {{")
    w.emit("    r1 = new java.security.SecureRandom")
    w.emit("    specialinvoke r1.<java.security.SecureRandom: void <init>()>()")
    w.emit("    r2 = newarray byte[8]")
    w.emit("    virtualinvoke r1.<java.security.SecureRandom: void nextBytes(byte[])>(r2)")
    w.emit("    r3 = new javax.crypto.spec.PBEParameterSpec")
    w.emit(f"    specialinvoke r3.{_PBE_SPEC}(r2, {count})", (13, str(count), None))


PSEUDO_PLANTERS = {
    "RI-I": _plant_state_indicator,
    "RI-II": _plant_source_identifier,
    "RI-III": _plant_bookkeeping,
    "RI-IV": _plant_type_incompatible,
    "RI-V": _plant_infeasible_init,
}
TRUE_PLANTERS = (_plant_constant_key, _plant_low_iterations)


def planted_refinement_case(seed: int) -> PlantedCase:
    rng = random.Random(seed)
    planters = rng.sample(list(PSEUDO_PLANTERS.values()), rng.randint(1, len(PSEUDO_PLANTERS)))
    planters += [rng.choice(TRUE_PLANTERS) for _ in range(rng.randint(1, 2))]
    rng.shuffle(planters)

    w = _Writer()
    w.emit(f"class synthetic.Planted{seed} {{")
    for i, plant in enumerate(planters):
        plant(w, rng, f"m{i}")
        w.emit("    return")
        w.emit("  }")
    w.emit("}")
    return PlantedCase(seed, "\n".join(w.lines) + "\n", w.planted)


def planted_refinement_corpus(size: int = 200, seed: int = 0) -> list[PlantedCase]:
    return [planted_refinement_case(seed + i) for i in range(size)]


# ---------------------------------------------------------------------------
# Call chains and the constant oracle
# ---------------------------------------------------------------------------

@dataclass
class CallChainCase:
    """Methods `f0..fN` passing one String down to the key spec in `f0`.

    `calls[i]` lists `(callee, source)` pairs made by `fi`, where source is
    `("const", text)`, `("param",)`, `("copy",)`, `("field", name)` or
    `("merge", first, second)`.
    """
    seed: int
    text: str
    calls: dict[int, list[tuple[int, tuple]]]
    field_constants: dict[str, set[str]]


def call_chain_case(seed: int, methods: int = 6, fields: int = 3) -> CallChainCase:
    rng = random.Random(seed)
    owner = f"synthetic.Chain{seed}"
    keys = f"synthetic.Keys{seed}"
    field_constants = {f"K{t}": {f"k{t}_init"} for t in range(fields)}
    rotated = rng.sample(sorted(field_constants), rng.randint(0, fields))
    for name in rotated:
        field_constants[name].add(f"{name.lower()}_rotated")

    lines = [f"class {owner} {{"]
    lines += [
        "  static method void f0(java.lang.String) {",
        "    r0 := param 0",
        f"    r1 = r0.{_GET_BYTES}()",
        "    r2 = new javax.crypto.spec.SecretKeySpec",
        f'    specialinvoke r2.{_KEY_SPEC}(r1, "AES")',
        "    return",
        "  }",
    ]
    calls: dict[int, list[tuple[int, tuple]]] = {0: []}
    for i in range(1, methods):
        calls[i] = []
        body = ["r0 := param 0"]
        local = 1
        for m in range(rng.randint(1, 3)):
            callee = rng.randrange(i)
            call = f"staticinvoke <{owner}: void f{callee}(java.lang.String)>"
            kind = rng.choice(("const", "inline", "param", "copy", "field", "merge"))
            arg = f"r{local}"
            if kind == "const":
                source = ("const", f"c{i}_{m}")
                body.append(f'{arg} = "{source[1]}"')
            elif kind == "inline":
                source = ("const", f"c{i}_{m}")
                arg = f'"{source[1]}"'
            elif kind == "param":
                source = ("param",)
                arg = "r0"
            elif kind == "copy":
                source = ("copy",)
                body.append(f"{arg} = r0")
            elif kind == "field":
                source = ("field", rng.choice(sorted(field_constants)))
                body.append(f"{arg} = <{keys}>.<{source[1]}>")
            else:
                source = ("merge", f"c{i}_{m}a", f"c{i}_{m}b")
                body += [f'{arg} = "{source[1]}"', f"if r0 == null goto M{m}", f'{arg} = "{source[2]}"', f"M{m}:"]
            local += 1
            body.append(f"{call}({arg})")
            calls[i].append((callee, source))
        body.append("return")
        lines.append(f"  static method void f{i}(java.lang.String) {{")
        lines += [f"    {ins}" for ins in body]
        lines.append("  }")
    lines.append("}")

    lines.append(f"class {keys} {{")
    lines += [f"  static field java.lang.String {name}" for name in sorted(field_constants)]
    lines.append("  static method void <clinit>() {")
    lines += [f'    <{keys}>.<{name}> = "{name.lower()}_init"' for name in sorted(field_constants)]
    lines += ["    return", "  }", "  static method void rotate() {"]
    lines += [f'    <{keys}>.<{name}> = "{name.lower()}_rotated"' for name in sorted(rotated)]
    lines += ["    return", "  }", "}"]
    return CallChainCase(seed, "\n".join(lines) + "\n", calls, field_constants)


def oracle_key_constants(case: CallChainCase) -> set[str]:
    """String constants that can reach the key spec argument in `f0`."""
    reaching: dict[int, set[str]] = {}

    def into(callee: int) -> set[str]:
        if callee not in reaching:
            found: set[str] = set()
            for caller, made in case.calls.items():
                for target, source in made:
                    if target != callee:
                        continue
                    if source[0] == "const":
                        found.add(source[1])
                    elif source[0] in ("param", "copy"):
                        found |= into(caller)
                    elif source[0] == "field":
                        found |= case.field_constants[source[1]]
                    else:
                        found |= {source[1], source[2]}
            reaching[callee] = found
        return reaching[callee]

    return into(0)


# ---------------------------------------------------------------------------
# Parser fuzzing
# ---------------------------------------------------------------------------

_FUZZ_ALPHABET = " \"'\\#=()<>[],.:{}-0r\n"
_LITERAL_CHARS = "ab #,=()<>'\"\\\n\t\r\u2028\u2029\x85\x0b\x0c\x1c\x1d\x1e"


def mutated_source(seed: int, edits: int = 3) -> str:
    """A random slice program with a few character and line edits applied."""
    rng = random.Random(seed + 1_000_003)
    text = random_slice_program(seed)
    for _ in range(rng.randint(1, edits)):
        roll = rng.random()
        if roll < 0.4:
            pos = rng.randrange(len(text))
            text = text[:pos] + text[pos + 1:]
        elif roll < 0.8:
            pos = rng.randrange(len(text) + 1)
            text = text[:pos] + rng.choice(_FUZZ_ALPHABET) + text[pos:]
        else:
            lines = text.split("\n")
            a, b = rng.randrange(len(lines)), rng.randrange(len(lines))
            lines[a], lines[b] = lines[b], lines[a]
            text = "\n".join(lines)
    return text


def random_literals(seed: int, count: int = 12) -> list:
    rng = random.Random(seed)
    values = []
    for _ in range(count):
        kind = rng.choice(("string", "char", "int", "long", "bool", "null"))
        if kind == "string":
            values.append(ConstString("".join(rng.choice(_LITERAL_CHARS) for _ in range(rng.randint(0, 8)))))
        elif kind == "char":
            values.append(ConstChar(rng.choice(_LITERAL_CHARS)))
        elif kind == "int":
            values.append(ConstInt(rng.randint(-2**31, 2**31 - 1)))
        elif kind == "long":
            values.append(ConstLong(rng.randint(-2**63, 2**63 - 1)))
        elif kind == "bool":
            values.append(ConstBool(rng.random() < 0.5))
        else:
            values.append(ConstNull())
    return values


# ---------------------------------------------------------------------------
# Scale project
# ---------------------------------------------------------------------------

def _scale_class(index: int, methods: int, per_method: int) -> str:
    name = f"scale.Service{index:02d}"
    previous = f"scale.Service{index - 1:02d}" if index else None
    out = [f"class {name} {{", "  field java.lang.String label"]

    def method(header: str, body: list[str]) -> None:
        padding = per_method - len(body) - 1
        filler = [f"    t{n} = {n} * {index + 1}" for n in range(max(padding, 0))]
        out.append(f"  {header} {{")
        out.extend(body)
        out.extend(filler)
        out.append("    return")
        out.append("  }")

    method("static method void encrypt(java.lang.String)", [
        "    r1 := param 0",
        f"    r2 = r1.{_GET_BYTES}()",
        "    r3 = new javax.crypto.spec.SecretKeySpec",
        f'    specialinvoke r3.{_KEY_SPEC}(r2, "AES")',
        '    r4 = staticinvoke <javax.crypto.Cipher: javax.crypto.Cipher getInstance(java.lang.String)>'
        '("AES/GCM/NoPadding")',
    ])
    method("static method void digest(byte[])", [
        "    r1 := param 0",
        '    r2 = staticinvoke <java.security.MessageDigest: java.security.MessageDigest getInstance'
        '(java.lang.String)>("SHA-256")',
        "    r3 = r2.<java.security.MessageDigest: byte[] digest(byte[])>(r1)",
    ])
    relay = [
        "    r1 := param 0",
        f"    staticinvoke <{name}: void encrypt(java.lang.String)>(r1)",
    ]
    if previous is not None and index % 5:
        relay.append(f"    staticinvoke <{previous}: void relay(java.lang.String)>(r1)")
    method("static method void relay(java.lang.String)", relay)
    for m in range(methods - 3):
        method(f"method void work{m}(int)", [
            "    r1 := param 0",
            "    r2 = newarray int[4]",
            "    r2[0] = r1",
            "    r3 = r2[0]",
            "    if r3 > 100 goto big",
            f"    r3 = r3 + {m}",
            "  big:",
            "    r4 = this.<label>",
            f"    this.<label> = \"w{m}\"",
        ])
    out.append("}")
    return "\n".join(out) + "\n"


def scale_project(classes: int = 50, instructions: int = 5000) -> list[tuple[str, str]]:
    """(file name, TIR text) pairs totalling at least `instructions` instructions."""
    per_class = max(instructions // classes, 40)
    per_method = 10
    methods = max(per_class // per_method, 4)
    return [(f"Service{i:02d}.tir", _scale_class(i, methods, per_method)) for i in range(classes)]


def instruction_count(text: str) -> int:
    """Instructions in a TIR text, labels included."""
    count = 0
    depth = 0
    for raw in source_lines(text):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.endswith("{"):
            depth += 1
            continue
        if line == "}":
            depth -= 1
            continue
        if depth == 2:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Known limitations
# ---------------------------------------------------------------------------

def hex_conversion_program(seed: int) -> tuple[str, int, str]:
    """(text, line, literal): a key literal decoded by a helper called from another helper."""
    rng = random.Random(seed)
    helper = rng.choice(("parseHexBinary", "decodeHex", "fromHex"))
    literal = "".join(rng.choice("0123456789ABCDEF") for _ in range(rng.choice((8, 16, 32))))
    owner = f"synthetic.HexKey{seed}"
    text = (
        f"class {owner} {{\n"
        f"  static method byte[] {helper}(java.lang.String) {{\n"
        "    r1 := param 0\n"
        f"    r2 = r1.{_GET_BYTES}()\n"
        "    return r2\n"
        "  }\n"
        "  static method byte[] loadKey() {\n"
        f'    r1 = staticinvoke <{owner}: byte[] {helper}(java.lang.String)>("{literal}")\n'
        "    return r1\n"
        "  }\n"
        "  method void encrypt() {\n"
        f"    r1 = staticinvoke <{owner}: byte[] loadKey()>()\n"
        "    r2 = new javax.crypto.spec.SecretKeySpec\n"
        f'    specialinvoke r2.{_KEY_SPEC}(r1, "AES")\n'
        "    return\n"
        "  }\n"
        "}\n"
    )
    return text, 8, literal


def infeasible_iteration_program(seed: int) -> tuple[str, int]:
    """(text, line of the zero initialiser)."""
    rng = random.Random(seed)
    fallback = rng.choice((1000, 10000, 65536))
    text = (
        f"class synthetic.Iterations{seed} {{\n"
        "  method void derive(java.lang.String) {\n"
        "    r1 := param 0\n"
        "    r2 = 0\n"
        "    if r1 == null goto check\n"
        "    r2 = staticinvoke <java.lang.Integer: int parseInt(java.lang.String)>(r1)\n"
        "  check:\n"
        "    if r2 >= 1 goto build\n"
        f"    r2 = {fallback}\n"
        "  build:\n"
        "    r3 = new java.security.SecureRandom\n"
        "    specialinvoke r3.<java.security.SecureRandom: void <init>()>()\n"
        "    r4 = newarray byte[8]\n"
        "    virtualinvoke r3.<java.security.SecureRandom: void nextBytes(byte[])>(r4)\n"
        "    r5 = new javax.crypto.spec.PBEParameterSpec\n"
        f"    specialinvoke r5.{_PBE_SPEC}(r4, r2)\n"
        "    return\n"
        "  }\n"
        "}\n"
    )
    return text, 4
