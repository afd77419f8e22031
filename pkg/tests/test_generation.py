from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from temporal_qcsp.generation import (
    PiecewiseLinear, alpha_for, bounded_generation_check, classify_unary,
    identity_check_su1_from_ic_ci, random_rational_tuples, verify_counterexample,
)
from temporal_qcsp.orders import enumerate_weak_orders
from temporal_qcsp.polymorphisms import CI, IC, SWAP, get_op, preserves, su
from temporal_qcsp.relations import TemporalRelation, catalog

from strategies import rationals


@pytest.mark.parametrize("name, verdict", [
    ("minus", "generates-minus"), ("cyc", "generates-cyc"), ("peak", "generates-peak"),
    ("ic", "generates-ic"), ("ci", "generates-ci"), ("su1", "generates-su1"),
    ("su2", "generates-su1"), ("const", "constant"), ("id", "order-preserving"),
    ("swap", "generates-all-permutations"),
])
def test_canonical_ops_land_in_their_class(name, verdict):
    assert classify_unary(get_op(name)).verdict == verdict


def test_wave_is_mixed():
    c = classify_unary(get_op("wave"))
    assert c.verdict in ("generates-ic", "generates-ci") and c.mixed
    assert {"ic", "ci"} <= set(c.generated)


def test_injective_verdicts_follow_preservation_facts():
    for name in ("minus", "cyc", "swap"):
        c = classify_unary(get_op(name))
        facts = dict(c.evidence)
        if c.verdict == "generates-minus":
            assert facts.get("preserves Betw")
        if c.verdict == "generates-cyc":
            assert facts.get("preserves Cycl")
        assert c.basis


def _brute_counterexample(ops, target, n):
    size = len(enumerate_weak_orders(n))
    for mask in range(1, 1 << size):
        r = TemporalRelation.from_mask(n, mask)
        if all(preserves(o, r) for o in ops) and not preserves(target, r):
            return mask
    return None


@pytest.mark.parametrize("ops, target", [
    (["ic"], "su1"), (["peak"], "minus"), (["minus"], "cyc"), (["wave"], "su1"), (["su1"], "ic"),
])
def test_arity2_search_matches_brute_force(ops, target):
    rep = bounded_generation_check(ops, target, k=2)
    ops_ = [get_op(o) for o in ops]
    expected = next((m for n in (1, 2) if (m := _brute_counterexample(ops_, get_op(target), n))), None)
    if expected is None:
        assert not rep.found
    else:
        assert rep.found and rep.counterexample.mask() == expected
        assert verify_counterexample(rep)


@pytest.mark.parametrize("ops, target", [
    (["ic", "ci"], "su1"), (["su1", "su2", "su3"], "wave"), (["wave"], "su1"), (["wave"], "su2"),
])
def test_known_generation_facts(ops, target):
    rep = bounded_generation_check(ops, target, k=3)
    assert rep.outcome == "no-counterexample-up-to-3"
    assert rep.exhaustive_up_to == 3


def test_ic_alone_does_not_give_su1():
    rep = bounded_generation_check([IC], su(1), k=3)
    assert rep.found and verify_counterexample(rep)


def test_sampled_arity_four_is_seeded():
    a = bounded_generation_check(["ic", "ci"], "su1", k=4, samples=50, seed=3)
    b = bounded_generation_check(["ic", "ci"], "su1", k=4, samples=50, seed=3)
    assert a.to_json() == b.to_json()
    assert a.sampled == 50 and a.exhaustive_up_to == 3


def test_verify_rejects_missing_counterexample():
    rep = bounded_generation_check(["ic", "ci"], "su1", k=2)
    assert not verify_counterexample(rep)


# -- the explicit composition behind {ic, ci} => su1 ---------------------------------------

def test_identity_on_random_tuples():
    rep = identity_check_su1_from_ic_ci(random_rational_tuples(100, 6, seed=1))
    assert rep.passed and len(rep.cases) == 100


@given(st.lists(rationals(), min_size=1, max_size=6))
def test_identity_property(t):
    assert identity_check_su1_from_ic_ci([t]).passed


@given(st.lists(rationals(), min_size=1, max_size=6))
def test_alpha_is_an_automorphism_with_the_right_anchors(vals):
    alpha = alpha_for(vals)
    assert alpha(0) == 1
    for v in vals:
        if v < 0 and v <= max(x for x in vals if x < 0):
            assert alpha(v) == v
    xs = sorted({Fraction(v) for v in vals} | {Fraction(0), Fraction(5)})
    assert all(alpha(a) < alpha(b) for a, b in zip(xs, xs[1:]))


def test_piecewise_linear_rejects_non_monotone_knots():
    with pytest.raises(ValueError):
        PiecewiseLinear([(0, 1), (1, 0)])
