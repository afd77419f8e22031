import pytest
from hypothesis import given, strategies as st

from temporal_qcsp import formulas as fm
from temporal_qcsp.orders import WeakOrder, canonicalize, enumerate_weak_orders


def test_parse_conjunction():
    f = fm.parse("x<y & y<z")
    assert f == fm.And((fm.Atom("x", "<", "y"), fm.Atom("y", "<", "z")))
    assert fm.classify(f) == fm.QF


@pytest.mark.parametrize("text, tag", [
    ("x<y & y<z", fm.QF),
    ("E u. E v. (x=u & u=y)", fm.PP),
    ("A x. E y. x<y", fm.FAE),
    ("A x. (x<y | y<x)", fm.GENERAL),
    ("!(x<y)", fm.QF),
])
def test_tags(text, tag):
    assert fm.classify(fm.parse(text)) == tag


def test_greater_normalized():
    assert fm.parse("x>y") == fm.Atom("y", "<", "x")
    assert fm.parse("x>=y") == fm.Atom("y", "<=", "x")


def test_quantifier_scope_extends_right():
    f = fm.parse("E u. x<u & u<y")
    assert isinstance(f, fm.Exists) and isinstance(f.body, fm.And)


@pytest.mark.parametrize("bad", ["x <", "x < < y", "(x<y", "E . x<y", "x ~ y", ""])
def test_syntax_errors_carry_position(bad):
    with pytest.raises(fm.FormulaSyntaxError) as e:
        fm.parse(bad)
    assert e.value.position >= 0


def test_eval_examples():
    assert fm.eval_on_weak_order(fm.parse("x<y"), WeakOrder((0, 1)), {"x": 0, "y": 1})
    for w in enumerate_weak_orders(2):
        b = {"x": 0, "y": 1}
        assert fm.eval_on_weak_order(fm.parse("x!=y | x=y"), w, b)
        assert not fm.eval_on_weak_order(fm.parse("x<y & y<x"), w, b)


def test_unbound_variable():
    with pytest.raises(fm.UnboundVariable):
        fm.eval_on_weak_order(fm.parse("x<q"), WeakOrder((0, 1)), {"x": 0})


def test_quantified_input_rejected():
    with pytest.raises(ValueError, match="quantifier-free"):
        fm.eval_on_weak_order(fm.parse("E u. x<u"), WeakOrder((0,)), {"x": 0})


VARS = ["x", "y", "z"]
atoms = st.builds(fm.Atom, st.sampled_from(VARS), st.sampled_from(["<", "<=", "=", "!="]), st.sampled_from(VARS))
qf = st.recursive(atoms, lambda c: st.one_of(
    c.map(fm.Not),
    st.lists(c, min_size=2, max_size=3).map(lambda a: fm.And(tuple(a))),
    st.lists(c, min_size=2, max_size=3).map(lambda a: fm.Or(tuple(a))),
), max_leaves=6)
formulas_ = st.recursive(qf, lambda c: st.one_of(
    st.builds(fm.Exists, st.sampled_from(["u", "v"]), c),
    st.builds(fm.Forall, st.sampled_from(["u", "v"]), c),
), max_leaves=3)


@given(formulas_)
def test_text_round_trip(f):
    assert fm.parse(fm.to_text(f)) == f


@given(formulas_)
def test_json_round_trip(f):
    assert fm.from_json(fm.to_json(f)) == f


@given(qf, st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_orbit_eval_matches_value_eval(f, values):
    w = canonicalize(values)
    binding = {v: i for i, v in enumerate(VARS)}
    assert fm.eval_on_weak_order(f, w, binding) == fm.eval_on_values(f, dict(zip(VARS, values)))
