import itertools

from core import refine
from core.backward import ConstantCandidate, FlowContext, PredictableCall, Site
from core.ir import ConstBool, ConstInt, ConstLong, ConstNull, ConstString, InvokeKind, MethodSig
from core.refine import RI_IDS, RefinementContext, ValueKind, apply_refinements

SITE = Site(MethodSig("A", "f", (), "void"), 0, None, 3, "a.tir")
KEY = RefinementContext(1, ValueKind.BYTE_ARRAY, forbid_null=True, forbid_empty_string=True)
ITERATIONS = RefinementContext(13, ValueKind.INT)


def _const(value, **ctx):
    return ConstantCandidate(value, SITE, FlowContext(**ctx))


def _removed_by(cand, ctx=KEY):
    kept, log = apply_refinements([cand], ctx)
    if kept:
        return None
    return log.entries[0][1]


def test_ri_ids_are_ordered():
    assert RI_IDS == ["RI-I", "RI-II", "RI-III", "RI-IV", "RI-V"]


def test_state_indicator():
    assert _removed_by(_const(ConstString("UTF-8"), invoke_kind=InvokeKind.VIRTUAL, in_assignment=True)) == "RI-I"


def test_unassigned_virtual_argument_is_kept():
    assert _removed_by(_const(ConstString("k"), invoke_kind=InvokeKind.VIRTUAL)) is None


def test_source_identifier():
    for kind in (InvokeKind.STATIC, InvokeKind.INTERFACE):
        assert _removed_by(_const(ConstString("pass.key"), invoke_kind=kind, in_assignment=True)) == "RI-II"


def test_special_invoke_argument_is_kept():
    assert _removed_by(_const(ConstString("k"), invoke_kind=InvokeKind.SPECIAL, in_assignment=True)) is None


def test_bookkeeping():
    for flag in ("via_array_index", "via_array_size", "via_collection_index"):
        assert _removed_by(_const(ConstInt(1), **{flag: True})) == "RI-III"


def test_type_incompatible():
    assert _removed_by(_const(ConstInt(7))) == "RI-IV"
    assert _removed_by(_const(ConstBool(True))) == "RI-IV"
    assert _removed_by(_const(ConstString("1000")), ITERATIONS) == "RI-IV"
    assert _removed_by(_const(ConstLong(0)), ITERATIONS) is None


def test_array_elements_are_not_judged_by_type():
    assert _removed_by(_const(ConstInt(7), array_element=True)) is None


def test_infeasible_initialiser():
    assert _removed_by(_const(ConstNull())) == "RI-V"
    assert _removed_by(_const(ConstString(""))) == "RI-V"
    assert _removed_by(_const(ConstNull()), RefinementContext(7, ValueKind.URL)) is None


def test_first_matching_pass_wins():
    cand = _const(ConstInt(1), invoke_kind=InvokeKind.STATIC, in_assignment=True, via_array_index=True)
    assert _removed_by(cand) == "RI-II"


def test_predictable_calls_survive_type_checks():
    call = PredictableCall("<java.lang.System: long currentTimeMillis()>", SITE)
    kept, log = apply_refinements([call], RefinementContext(8, ValueKind.BYTE_ARRAY))
    assert kept == [call]
    assert len(log) == 0


def test_removal_log_counts():
    cands = [
        _const(ConstString("a"), invoke_kind=InvokeKind.VIRTUAL, in_assignment=True),
        _const(ConstString("b"), invoke_kind=InvokeKind.VIRTUAL, in_assignment=True),
        _const(ConstInt(2), via_array_index=True),
        _const(ConstString("secret")),
    ]
    kept, log = apply_refinements(cands, KEY)
    assert [c.text for c in kept] == ["secret"]
    assert log.counts() == {"RI-I": 2, "RI-III": 1}


MIXED = [
    _const(ConstString("UTF-8"), invoke_kind=InvokeKind.VIRTUAL, in_assignment=True),
    _const(ConstInt(1), invoke_kind=InvokeKind.STATIC, in_assignment=True, via_array_index=True),
    _const(ConstInt(7)),
    _const(ConstNull(), via_array_size=True),
    _const(ConstString("")),
    _const(ConstString("secret")),
    _const(ConstInt(9), array_element=True),
    PredictableCall("<java.lang.System: long currentTimeMillis()>", SITE),
]


def test_refinement_is_idempotent():
    kept, _ = apply_refinements(MIXED, KEY)
    again, log = apply_refinements(kept, KEY)
    assert again == kept
    assert len(log) == 0


def test_kept_set_does_not_depend_on_pass_order(monkeypatch):
    kept, _ = apply_refinements(MIXED, KEY)
    assert [c.text for c in kept] == ["secret", "9", "<java.lang.System: long currentTimeMillis()>"]
    for order in itertools.permutations(refine.REFINEMENTS):
        monkeypatch.setattr(refine, "REFINEMENTS", list(order))
        reordered, log = apply_refinements(MIXED, KEY)
        assert reordered == kept
        assert len(log) == len(MIXED) - len(kept)
