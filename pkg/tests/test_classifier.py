import random

import pytest
from hypothesis import given, settings

from temporal_qcsp.classifier import (
    A_BETWC, A_CYCLC, A_DUALLYOH, CONP_HARD, DUAL_UNVERIFIED, EXIT_CODES, GOH_BOUND, INCONCLUSIVE,
    NP_HARD, P, classify, explain,
)
from temporal_qcsp.config import Bounds
from temporal_qcsp.polymorphisms import CATALOG, closed_under_all_permutations, preserves_language
from temporal_qcsp.relations import Language, TemporalRelation, dual_relation

from strategies import relations


@pytest.mark.parametrize("key, label, branch, flag", [
    ("leq", P, "2", None), ("i", CONP_HARD, "2", GOH_BOUND), ("s", CONP_HARD, "2", GOH_BOUND),
    ("betwc", CONP_HARD, "4d", None), ("cyclc", CONP_HARD, "4e", None),
    ("eqxor", NP_HARD, "4a", None), ("eqor3", NP_HARD, "4a", None),
])
def test_catalog_languages(key, label, branch, flag):
    res = classify(Language.of(key))
    assert (res.label, res.branch) == (label, branch)
    if flag:
        assert flag in res.flags
    assert res.exit_code == EXIT_CODES[label]


def test_leq_certificate_and_explain():
    res = classify(Language.of("leq"))
    assert res.certificates == {"leq": "x<=y"}
    assert "GOH certificate: x<=y" in explain(res)


def test_betwc_report_names_branch_and_violations():
    res = classify(Language.of("betwc"))
    text = explain(res)
    assert A_BETWC in res.anchors and A_BETWC in text
    for op in ("su1", "ic", "ci", "peak", "cyc", "all permutations"):
        assert any(s.check == op and s.outcome.startswith("violated") for s in res.trail), op


def test_cyclc_anchor():
    assert A_CYCLC in classify(Language.of("cyclc")).anchors


def test_i_trail_goes_through_goh_search():
    res = classify(Language.of("i"))
    assert A_DUALLYOH in res.anchors
    assert "bounded guarded Ord-Horn" in explain(res)


def test_less_is_polynomial():
    res = classify(Language.of("less"))
    assert res.label == P and res.certificates["less"] == "x<y"


def test_unverified_dual_closure_warning():
    # x=y<z or x=z<y: its dual (bigger value doubled) is not pp-definable within the bounds
    r = TemporalRelation.from_mask(3, 6, name="odd")
    res = classify(Language([("odd", r)]), Bounds(max_exists=1, max_atoms=2))
    assert DUAL_UNVERIFIED in res.flags
    assert "WARNING: dual closure could not be verified" in explain(res)
    assert res.to_json()["flags"] == res.flags


@pytest.mark.parametrize("mask, label, branch", [
    (7473, CONP_HARD, "2"),   # all equal or pairwise distinct
    (205, NP_HARD, "4a"),     # exactly two equal, or all equal
    (204, NP_HARD, "3"),      # exactly two equal
])
def test_equality_languages(mask, label, branch):
    r = TemporalRelation.from_mask(3, mask, name="r")
    assert closed_under_all_permutations(r)
    res = classify(Language([("r", r)]))
    assert (res.label, res.branch) == (label, branch)


def test_pattern_closed_ternary_singletons_never_need_gadget_search():
    for mask in range(1 << 13):
        r = TemporalRelation.from_mask(3, mask)
        if closed_under_all_permutations(r):
            assert classify(Language([("r", r)])).branch != "4b"


def _check_trail(res, language):
    for step in res.trail:
        if step.check in CATALOG:
            v = preserves_language(CATALOG[step.check], language)
            if step.outcome == "preserved":
                assert v is None, step
            else:
                assert v is not None and step.outcome.startswith("violated"), step
        if step.check == "all permutations":
            ok = all(closed_under_all_permutations(r) for r in language.relations())
            assert ok == (step.outcome == "preserved")


@settings(max_examples=120)
@given(relations(3))
def test_branch_soundness_and_duality(r):
    d = dual_relation(r)
    lang = Language([("R", r), ("D", d)])
    res = classify(lang)
    _check_trail(res, lang)
    other = classify(Language([("R", d), ("D", r)]))
    assert (res.label, res.flags) == (other.label, other.flags)
    assert res.label != INCONCLUSIVE or res.branch == "4b"
    if res.label == P:
        assert set(res.certificates) == {name for name, _ in lang.items()}


def test_step_two_never_hits_inconsistency_on_self_dual_relations():
    for mask in range(1 << 13):
        r = TemporalRelation.from_mask(3, mask)
        if dual_relation(r) == r:
            classify(Language([("R", r)]))


def test_json_shape():
    j = classify(Language.of("i")).to_json()
    assert set(j) >= {"label", "flags", "trail", "certificates", "bounds"}
    assert j["bounds"]["goh_depth"] == 2


def test_gadget_search_helper():
    from temporal_qcsp.classifier import _equality_gadgets, _Run
    from temporal_qcsp.config import DEFAULT_BOUNDS
    res = _equality_gadgets(_Run(Language.of("eqxor"), DEFAULT_BOUNDS))
    assert res.label == NP_HARD and res.certificate_kind == "pp definition"
    res = _equality_gadgets(_Run(Language.of("eq"), Bounds(max_exists=0, max_atoms=1)))
    assert res.label == INCONCLUSIVE and "E=0, A=1" in res.basis
