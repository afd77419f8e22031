from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from temporal_qcsp.orders import WeakOrder, canonicalize, enumerate_weak_orders
from temporal_qcsp.polymorphisms import (
    CATALOG, CONST_OP, CYC, DLELE, DPP, IC, LELE, MINUS, PEAK, PP, WAVE, BinaryComparisonOp,
    UnaryPiecewiseOp, binary_image, binary_images, binary_placements, check, concrete_witness,
    dual_op, dual_unary, get_op, load_unary_op, numeric_binary_images, numeric_unary_images,
    preserved_by_constant, preserved_vector, preserves, preserves_language, preserves_mask,
    su, unary_images, unary_op_from_json,
)
from temporal_qcsp.relations import Language, catalog, dual_relation

from strategies import relations, weak_orders

UNARY = [op for op in CATALOG.values() if isinstance(op, UnaryPiecewiseOp)]
BINARY = [op for op in CATALOG.values() if isinstance(op, BinaryComparisonOp)]


def W(*r):
    return WeakOrder(tuple(r))


# -- image computation against numeric evaluation ----------------------------------------

@pytest.mark.parametrize("op", UNARY, ids=lambda o: o.name)
def test_unary_images_match_numeric(op):
    for n in (1, 2, 3):
        for w in enumerate_weak_orders(n):
            assert unary_images(op, w) == numeric_unary_images(op, w), (op.name, w)


@pytest.mark.parametrize("op", BINARY, ids=lambda o: o.name)
def test_binary_images_match_numeric(op):
    for n in (1, 2):
        for w1 in enumerate_weak_orders(n):
            for w2 in enumerate_weak_orders(n):
                assert binary_images(op, w1, w2) == numeric_binary_images(op, w1, w2)


def test_binary_images_match_numeric_arity3_sample():
    ws = enumerate_weak_orders(3)
    for op in BINARY:
        for w1 in ws[::2]:
            for w2 in ws[::3]:
                assert binary_images(op, w1, w2) == numeric_binary_images(op, w1, w2)


def test_peak_images_of_strict_chain():
    assert unary_images(PEAK, W(0, 1, 2)) == {W(0, 0, 0), W(1, 0, 0), W(0, 1, 0), W(0, 0, 1)}
    # the same images from explicit tuples
    reps = [(-2, -1, 3), (0, 1, 3), (-1, 0, 3), (-3, -1, 0)]
    got = {canonicalize([PEAK.numeric(Fraction(x)) for x in t]) for t in reps}
    assert got == unary_images(PEAK, W(0, 1, 2))


def test_minus_reverses():
    assert unary_images(MINUS, W(0, 1, 1)) == {W(1, 0, 0)}


def test_constant_has_single_image():
    for w in enumerate_weak_orders(3):
        assert unary_images(CONST_OP, w) == {W(0, 0, 0)}


@given(weak_orders(max_n=4), st.integers(1, 4))
def test_su_images_are_monotone_with_bounded_range(w, i):
    for img in unary_images(su(i), w):
        assert img.blocks <= i + 1
        for a in range(w.arity):
            for b in range(w.arity):
                if w.ranks[a] <= w.ranks[b]:
                    assert img.ranks[a] <= img.ranks[b]


def test_binary_placements_count():
    for m in range(1, 5):
        assert len(binary_placements(m)) == 2 * m + 1


@pytest.mark.parametrize("op", BINARY, ids=lambda o: o.name)
def test_comparison_rules_total_and_consistent(op):
    # a point's sign must be the sign its rank gets under one threshold placement
    for signs in binary_placements(3):
        pts = [(a, signs[a], b) for a in range(3) for b in range(3)]
        _check_antisymmetric(op, pts)


def _check_antisymmetric(op, pts):
    for p in pts:
        assert op.compare(p, p) == 0
        for q in pts:
            assert op.compare(p, q) == -op.compare(q, p)


def test_pp_eqxor_witness():
    # t1 = (1,1,-1), t2 = (0,5,0): z goes below, x and y split by the second argument
    t1, t2 = (1, 1, -1), (0, 5, 0)
    out = canonicalize([PP.numeric(Fraction(a), Fraction(b)) for a, b in zip(t1, t2)])
    assert out == W(1, 2, 0)
    assert out not in catalog("eqxor")
    assert canonicalize(t1) in catalog("eqxor") and canonicalize(t2) in catalog("eqxor")
    signs = tuple(1 if r > 0 else -1 for r in sorted(set(t1)))
    assert binary_image(PP, canonicalize(t1), canonicalize(t2), signs) == out
    assert not preserves(PP, catalog("eqxor"))


# -- preservation facts --------------------------------------------------------------------

@pytest.mark.parametrize("op", list(CATALOG.values()), ids=lambda o: o.name)
def test_everything_preserves_eq(op):
    assert preserves(op, catalog("eq"))


@pytest.mark.parametrize("op, key, expected", [
    (MINUS, "betwc", True), (MINUS, "cyclc", False), (CYC, "cyclc", True), (CYC, "betwc", False),
    (MINUS, "i", True), (CYC, "i", True), (MINUS, "s", True), (CYC, "s", True),
    (WAVE, "leq", True), (WAVE, "less", False), (WAVE, "neq", False),
    (LELE, "leq", True), (DLELE, "leq", True), (PP, "leq", True), (DPP, "leq", True),
    (PP, "eqxor", False), (DPP, "eqxor", False), (LELE, "i", True), (DLELE, "i", True),
    (PEAK, "eqxor", True), (PEAK, "less", False), (IC, "less", False),
])
def test_preservation_table(op, key, expected):
    assert preserves(op, catalog(key)) is expected


def test_violation_witness_is_least_and_real():
    v = check(CYC, catalog("betwc"))
    rel = catalog("betwc")
    assert v is not None and v.orbits[0] in rel and v.image not in rel
    inputs, out = concrete_witness(CYC, v, rel)
    assert canonicalize(out) == v.image
    assert "cyc" in v.describe()


def test_binary_violation_concrete():
    rel = catalog("eqxor")
    v = check(PP, rel)
    (t1, t2), out = concrete_witness(PP, v, rel)
    assert canonicalize(t1) in rel and canonicalize(t2) in rel
    assert canonicalize(out) not in rel


def test_preserves_language_names_relation():
    v = preserves_language(CYC, Language.of("eq", "betwc"))
    assert v.relation == "betwc"


def test_preserved_by_constant():
    assert preserved_by_constant(catalog("leq"))
    assert not preserved_by_constant(catalog("less"))


@settings(max_examples=100)
@given(relations(3), st.sampled_from(sorted(CATALOG)))
def test_duality_commutes_with_preservation(r, name):
    op = get_op(name)
    assert preserves(op, r) == preserves(dual_op(op), dual_relation(r))


@given(relations(3), st.sampled_from([MINUS, WAVE, IC, PP, LELE]))
def test_mask_sweep_agrees_with_direct_check(r, op):
    assert preserves_mask(op, 3, r.mask()) == preserves(op, r)
    assert bool(preserved_vector(op, 3)[r.mask()]) == preserves(op, r)


def test_dual_ops_pair_up():
    assert dual_op(IC).name == "ci" and dual_op(PP) is DPP and dual_op(LELE) is DLELE
    dw = dual_unary(WAVE)
    for w in enumerate_weak_orders(3):
        assert unary_images(dw, w) == numeric_unary_images(dw, w)


def test_get_op_unknown():
    with pytest.raises(KeyError, match="unknown operation"):
        get_op("nope")
    assert get_op("su7").name == "su7"


# -- operation spec files ------------------------------------------------------------------

def test_op_from_json_matches_catalog_ic():
    spec = {"name": "myic", "landmarks": ["0"], "cells": [
        {"from": "-inf", "to": "0", "behavior": "inc", "image": ["-inf", "0"]},
        {"at": "0", "image": "0"},
        {"from": "0", "to": "+inf", "behavior": "const", "image": "0"},
    ]}
    op = unary_op_from_json(spec)
    for w in enumerate_weak_orders(3):
        assert unary_images(op, w) == unary_images(IC, w)


@pytest.mark.parametrize("fname", ["wave", "ic", "peak", "reverse_shift", "su2"])
def test_shipped_op_files_load(fname):
    from pathlib import Path
    op = load_unary_op(Path(__file__).parent.parent / "data" / "ops" / f"{fname}.json")
    assert unary_images(op, W(0, 1))


@pytest.mark.parametrize("spec, msg", [
    ({"cells": [{"from": "-inf", "to": "+inf", "behavior": "wobbly", "image": "c"}]}, "behavior"),
    ({"landmarks": [], "cells": [{"from": "-inf", "to": "+inf", "behavior": "const", "image": "c"}]},
     "unknown landmark"),
    ({"cells": [{"from": "-inf", "to": "+inf", "behavior": "inc", "image": ["+inf", "-inf"]}]}, "empty"),
])
def test_bad_op_specs(spec, msg):
    with pytest.raises(ValueError, match=msg):
        unary_op_from_json(spec)
