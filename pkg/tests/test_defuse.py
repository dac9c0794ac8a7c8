import pytest

from core.defuse import ENTRY, NoBodyError, cells_loc, def_use_graph, local_loc
from core.ir import FieldKey, MethodDef, MethodSig

ARRAYS = """\
class A {
  field int n
  method int f(int) {
    r1 := param 0
    r2 = newarray byte[4]
    r2[0] = r1
    r3 = r2[1]
    if r1 > 0 goto skip
    r3 = 7
  skip:
    r4 = this.<n>
    r5 = r3 + r4
    return r5
  }
}
"""

MUTATION = """\
class B {
  static method void g(byte[]) {
    r1 := param 0
    r2 = new java.security.SecureRandom
    virtualinvoke r2.<java.security.SecureRandom: void nextBytes(byte[])>(r1)
    virtualinvoke r2.<java.security.SecureRandom: void setSeed(long)>(5L)
    r3 = r2.<java.security.SecureRandom: int nextInt()>()
    return
  }
}
"""


def _graph(parse, text, cls):
    program = parse(text)
    method = program.classes[cls].methods[0]
    return def_use_graph(method, program)


def test_array_store_reaches_array_read(parse):
    du = _graph(parse, ARRAYS, "A")
    # 0 param, 1 newarray, 2 store, 3 load
    assert (2, 3) in du.edges
    assert (1, 3) in du.edges
    assert (0, 2) in du.edges


def test_branches_merge(parse):
    du = _graph(parse, ARRAYS, "A")
    # r5 = r3 + r4 sees both definitions of r3
    assert du.defs_reaching(8, [local_loc("r3")]) == [3, 5]
    assert {(3, 8), (5, 8)} <= du.edges


def test_field_read_from_entry_is_a_used_field(parse):
    du = _graph(parse, ARRAYS, "A")
    assert du.used_fields == {FieldKey("A", "n")}
    assert du.defs_reaching(7, [("field", "A", "n")]) == [ENTRY]


def test_invokes_weakly_define_receivers_and_array_args(parse):
    du = _graph(parse, MUTATION, "B")
    # nextBytes fills the cells of r1 without killing the parameter binding
    reaching = du.defs_reaching(5, [local_loc("r2")])
    assert reaching == [1, 2, 3]
    assert 2 in du.defs_reaching(5, [cells_loc("r1")])
    assert 0 in du.defs_reaching(5, [local_loc("r1")])


def test_closures(parse):
    du = _graph(parse, ARRAYS, "A")
    assert du.backward_closure([9]) >= {0, 1, 2, 3, 5, 7, 8, 9}
    forward = du.forward_closure(1)
    assert 1 not in forward
    assert {2, 3, 8, 9} <= forward


def test_phantom_method_has_no_graph():
    phantom = MethodDef(MethodSig("X", "f", (), "void"), None)
    with pytest.raises(NoBodyError):
        def_use_graph(phantom)
