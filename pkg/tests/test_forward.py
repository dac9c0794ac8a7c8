import pytest

from core.backward import BackwardSlicer, SlicingCriterion
from core.callgraph import build_call_graph, call_sites_of
from core.forward import (
    OriginError,
    data_only_bindings,
    intra_forward_slice,
    is_data_only_class,
    track_data_only_constant,
)
from core.parser import parse_signature

SECRET_KEY_SPEC = parse_signature("<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>")
OPEN = parse_signature("<TaxiSocket: void open()>")


def test_socket_factory_flows_into_the_websocket(load_fixture):
    program = load_fixture("ssl_listings.tir")
    method = program.method(OPEN)
    forward = intra_forward_slice(method, 1, program)
    names = [method.body[i].callee.name for i in forward.indices]
    assert names == ["createSocket", "setSocket", "connect"]
    assert forward.origin == (OPEN, 1)


def test_origin_must_define_a_value(load_fixture):
    program = load_fixture("ssl_listings.tir")
    method = program.method(OPEN)
    with pytest.raises(OriginError):
        intra_forward_slice(method, 4, program)
    with pytest.raises(OriginError):
        intra_forward_slice(method, 99, program)


def _data_only_slices(program):
    graph = build_call_graph(program)
    slicer = BackwardSlicer(program, graph)
    site = call_sites_of(graph, SECRET_KEY_SPEC)[0]
    return slicer.inter(SlicingCriterion.inter_param(site, [0]))


def test_setter_constants_need_a_matching_getter(load_fixture):
    slices = _data_only_slices(load_fixture("data_only.tir"))
    consts = {c.text: c for r in slices for c in r.constants}
    assert set(consts) == {"mytext", "mykey"}
    assert consts["mykey"].context.setter.name == "setKey"
    assert track_data_only_constant(slices, consts["mykey"])
    assert not track_data_only_constant(slices, consts["mytext"])


def test_data_only_binding(load_fixture):
    program = load_fixture("data_only.tir")
    slices = _data_only_slices(program)
    consts = [c for r in slices for c in r.constants]
    bindings = data_only_bindings(slices, consts, program)
    assert len(bindings) == 1
    assert (bindings[0].object_local, bindings[0].class_name) == ("r1", "KeyHolder")
    assert bindings[0].tainted_fields == {"key"}


BUSY_HOLDER = """\
class KeyHolder {
  field java.lang.String key
  method void setKey(java.lang.String) {
    r1 := param 0
    this.<key> = r1
    return
  }
  method java.lang.String getKey() {
    r1 = this.<key>
    return r1
  }
  method void rotate() {
    r1 = staticinvoke <lib.Keys: java.lang.String next()>()
    this.<key> = r1
    return
  }
}
class Client {
  method void encrypt() {
    r1 = new KeyHolder
    virtualinvoke r1.<KeyHolder: void setKey(java.lang.String)>("mykey")
    r2 = r1.<KeyHolder: java.lang.String getKey()>()
    r3 = r2.<java.lang.String: byte[] getBytes()>()
    r4 = new javax.crypto.spec.SecretKeySpec
    specialinvoke r4.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>(r3, "AES")
    return
  }
}
"""


def test_holder_with_behaviour_is_not_data_only(parse):
    program = parse(BUSY_HOLDER)
    assert not is_data_only_class(program, "KeyHolder")
    assert is_data_only_class(program, "lib.Keys")
    slices = _data_only_slices(program)
    consts = [c for r in slices for c in r.constants]
    assert [c.text for c in consts] == ["mykey"]
    assert track_data_only_constant(slices, consts[0])
    assert data_only_bindings(slices, consts, program) == []


def test_accessor_only_holder_is_data_only(load_fixture):
    assert is_data_only_class(load_fixture("data_only.tir"), "KeyHolder")
