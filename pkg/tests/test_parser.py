import pytest

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
    FieldRef,
    Invoke,
    InvokeKind,
    Label,
    LengthOf,
    Local,
    MethodSig,
    NewArray,
    NewObject,
)
from core.parser import (
    DuplicateClassError,
    DuplicateMemberError,
    TirError,
    TirSyntaxError,
    UndefinedLabelError,
    UseBeforeDefError,
    parse_instruction,
    parse_program,
    parse_signature,
    parse_sources,
    parse_value,
    render_program,
    render_value,
    source_lines,
)


def test_signature():
    sig = parse_signature("<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>")
    assert sig == MethodSig("javax.crypto.spec.SecretKeySpec", "<init>", ("byte[]", "java.lang.String"), "void")
    assert str(sig) == "<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>"


def test_literals():
    assert parse_value('"a \\"q\\" b"') == ConstString('a "q" b')
    assert parse_value("-5") == ConstInt(-5)
    assert parse_value("42L") == ConstLong(42)
    assert parse_value("'\\''") == ConstChar("'")
    assert parse_value("null") == ConstNull()
    assert parse_value("<Crypto>.<ALGO>") == FieldRef("ALGO", None, "Crypto")
    assert parse_value("this.<key>") == FieldRef("key", Local("this"), None)
    assert parse_value("r1[0]") == ArrayRef(Local("r1"), ConstInt(0))


def test_foreign_instance_field_needs_owner():
    with pytest.raises(TirSyntaxError):
        parse_value("r1.<key>")
    assert parse_value("r1.<Holder: key>") == FieldRef("key", Local("r1"), "Holder")


def test_instructions():
    ins = parse_instruction('r2 = r1.<java.lang.String: byte[] getBytes(java.lang.String)>("UTF-8")', 7)
    assert isinstance(ins, Invoke)
    assert ins.kind is InvokeKind.VIRTUAL
    assert ins.assign_target == Local("r2")
    assert ins.args == (ConstString("UTF-8"),)
    assert ins.line == 7

    assert parse_instruction("r4 = newarray byte[16]") == NewArray(Local("r4"), "byte", ConstInt(16))
    assert parse_instruction("r3 = new Crypto") == Assign(Local("r3"), NewObject("Crypto"))
    assert parse_instruction("r9 = r8 + 1") == Assign(Local("r9"), BinOp("+", Local("r8"), ConstInt(1)))
    assert parse_instruction("r8 = lengthof r7") == Assign(Local("r8"), LengthOf(Local("r7")))
    assert parse_instruction("found:") == Label("found")


def test_argument_count_is_checked():
    with pytest.raises(TirSyntaxError):
        parse_instruction("staticinvoke <A: void f(int,int)>(1)")


def test_memory_to_memory_is_rejected():
    with pytest.raises(TirSyntaxError):
        parse_instruction("this.<a> = this.<b>")


def test_comment_stripping_keeps_hashes_in_strings(parse):
    program = parse(
        "class A {  # trailing comment\n"
        "  static method void f() {\n"
        '    r1 = "#not-a-comment"\n'
        "    return\n"
        "  }\n"
        "}\n"
    )
    body = program.classes["A"].methods[0].body
    assert body[0].rhs == ConstString("#not-a-comment")


def test_phantoms_are_registered(load_fixture):
    program = load_fixture("password_encryptor.tir")
    concrete = {name for name, cls in program.classes.items() if not cls.is_phantom}
    assert concrete == {"PasswordEncryptor", "Crypto"}
    assert len(program.classes["PasswordEncryptor"].methods) == 4
    assert len(program.classes["Crypto"].methods) == 3
    assert program.classes["Context"].is_phantom
    assert program.classes["javax.crypto.spec.SecretKeySpec"].is_phantom


def test_render_then_parse_is_identity(load_fixture):
    program = load_fixture("password_encryptor.tir")
    assert parse_program(render_program(program), "rendered.tir") == program


def test_error_positions(parse):
    with pytest.raises(TirSyntaxError) as info:
        parse("class A {\n  method void f() {\n    r1 = = 2\n    return\n  }\n}\n", "bad.tir")
    assert info.value.line == 3
    assert info.value.source == "bad.tir"
    assert str(info.value).startswith("bad.tir:3:")


def test_undefined_label(parse):
    with pytest.raises(UndefinedLabelError):
        parse("class A {\n  static method void f() {\n    goto nowhere\n  }\n}\n")


def test_use_before_def(parse):
    with pytest.raises(UseBeforeDefError) as info:
        parse("class A {\n  static method void f() {\n    return r1\n  }\n}\n")
    assert info.value.line == 3


def test_this_is_bound_only_in_instance_methods(parse):
    parse("class A {\n  field int n\n  method int f() {\n    r1 = this.<n>\n    return r1\n  }\n}\n")
    with pytest.raises(UseBeforeDefError):
        parse("class A {\n  field int n\n  static method int f() {\n    r1 = this.<n>\n    return r1\n  }\n}\n")


def test_duplicates(parse):
    with pytest.raises(DuplicateMemberError):
        parse("class A {\n  field int n\n  field int n\n}\n")
    with pytest.raises(DuplicateClassError):
        parse_sources([("a.tir", "class A {\n}\n"), ("b.tir", "class A {\n}\n")])


def test_unclosed_class(parse):
    with pytest.raises(TirError):
        parse("class A {\n  field int n\n")


ESCAPED = ["\\", '"', "'", "\n", "\t", "\r"]
LITERALS = [
    ConstString(""),
    ConstString("plain"),
    ConstString("".join(ESCAPED)),
    ConstString("a # not a comment, b"),
    ConstString("line\u2028para\u2029next\x85vt\x0bff\x0cfs\x1c\x1d\x1e"),
    *[ConstChar(ch) for ch in ESCAPED],
    ConstChar("a"),
    ConstChar("#"),
    ConstChar("\u2028"),
    ConstInt(-7),
    ConstInt(0),
    ConstLong(9000000000),
    ConstBool(True),
    ConstBool(False),
    ConstNull(),
]


def _literal_method(values) -> str:
    body = "".join(f"    r{i} = {render_value(v)}\n" for i, v in enumerate(values))
    return f"class Lit {{\n  static method void f() {{\n{body}    return\n  }}\n}}\n"


def test_every_literal_round_trips(parse):
    program = parse(_literal_method(LITERALS))
    body = program.classes["Lit"].methods[0].body
    assert [ins.rhs for ins in body if isinstance(ins, Assign)] == LITERALS
    assert parse_program(render_program(program)) == program


@pytest.mark.parametrize("ch", ESCAPED)
def test_escaped_char_renders_on_one_line(ch):
    text = render_value(ConstChar(ch))
    assert "\n" not in text and "\r" not in text
    assert parse_value(text) == ConstChar(ch)


def test_only_newlines_end_lines(parse):
    text = 'class A {\n  static method void f() {\n    r1 = "a\u2028b\x0cc"\n    return r2\n  }\n}\n'
    with pytest.raises(UseBeforeDefError) as info:
        parse(text)
    assert info.value.line == 4
    assert source_lines("a\r\nb\u2028c\n") == ["a", "b\u2028c", ""]


def test_crlf_sources_parse(parse):
    program = parse('class A {\r\n  static method void f() {\r\n    r1 = "x"\r\n    return\r\n  }\r\n}\r\n')
    body = program.classes["A"].methods[0].body
    assert body[0] == Assign(Local("r1"), ConstString("x"))
    assert body[1].line == 4
