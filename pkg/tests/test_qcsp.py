import random

import pytest
from hypothesis import given, settings, strategies as st

from temporal_qcsp import formulas as fm
from temporal_qcsp.qcsp import (
    InstanceError, QcspInstance, evaluate, evaluate_naive, evaluate_with_stats, load_instance,
    parse_instance,
)
from temporal_qcsp.relations import Language, pp_evaluate

from strategies import GADGET_KEYS, random_instance

LANG = Language.of(*GADGET_KEYS)


@pytest.mark.parametrize("text, keys, truth", [
    ("A x. E y. less(x,y)", ["less"], True),
    ("A x. A y. leq(x,y)", ["leq"], False),
    ("A x. A y. E z. betwc(x,z,y)", ["betwc"], True),
    ("E y. A x. less(x,y)", ["less"], False),
    ("A x. E y. A z. leq(x,y) & leq(z,y)", ["leq"], False),
    ("A x. A y. E z. less(x,z) & less(y,z)", ["less"], True),
    ("A x. A y. E z. less(x,z) & less(z,y)", ["less"], False),
    ("A x. A y. E z. x<z & z<y | x>=y", [], None),
])
def test_small_sentences(text, keys, truth):
    if truth is None:
        with pytest.raises(InstanceError):
            parse_instance(text)
        return
    inst = parse_instance(text)
    lang = Language.of(*keys)
    assert evaluate(inst, lang) is truth
    assert evaluate_naive(inst, lang) is truth


def test_comparison_atoms_in_matrix():
    inst = parse_instance("A x. E y. E z. x<y & y<z & x!=z")
    assert evaluate(inst, Language.of()) is True


def test_shipped_instances():
    from pathlib import Path
    base = Path(__file__).parent.parent / "data" / "instances"
    assert evaluate(load_instance(base / "betwc_forall_forall_exists.txt"), LANG) is True
    assert evaluate(load_instance(base / "leq_chain.txt"), LANG) is False


@pytest.mark.parametrize("text, msg", [
    ("A x. less(x,y)", "unbound"),
    ("A x. A x. less(x,x)", "twice"),
    ("A x. A y. nope(x,y)", "nope"),
    ("A x. A y. less(x,y,x)", "arity"),
])
def test_instance_errors(text, msg):
    with pytest.raises(InstanceError, match=msg):
        evaluate(parse_instance(text), LANG)


def test_memo_agrees_with_naive_on_random_corpus():
    rng = random.Random(7)
    for _ in range(150):
        inst = random_instance(rng)
        assert evaluate(inst, LANG) == evaluate_naive(inst, LANG), inst.text()


def test_exists_only_matches_pp_nonemptiness():
    rng = random.Random(11)
    for _ in range(100):
        inst = random_instance(rng, exists_only=True)
        f = fm.conj(list(inst.atoms))
        used = [v for v in inst.variables if v in fm.free_variables(f)]
        assert evaluate(inst, LANG) == bool(pp_evaluate(f, LANG, used).orbits)


@settings(max_examples=80)
@given(st.integers(0, 10**6))
def test_adding_a_conjunct_never_helps(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, max_atoms=3)
    extra = random_instance(rng, max_vars=1, max_atoms=1).atoms[0]
    args = tuple(rng.choice(inst.variables) for _ in extra.args)
    bigger = QcspInstance(inst.prefix, inst.atoms + (fm.RelAtom(extra.name, args),))
    if not evaluate(inst, LANG):
        assert not evaluate(bigger, LANG)


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_reordering_within_a_quantifier_block(seed):
    rng = random.Random(seed)
    inst = random_instance(rng)
    # shuffle each maximal run of equal quantifiers
    blocks, cur = [], [inst.prefix[0]]
    for q in inst.prefix[1:]:
        if q[0] == cur[-1][0]:
            cur.append(q)
        else:
            blocks.append(cur)
            cur = [q]
    blocks.append(cur)
    for b in blocks:
        rng.shuffle(b)
    shuffled = QcspInstance(tuple(q for b in blocks for q in b), inst.atoms)
    assert evaluate(shuffled, LANG) == evaluate(inst, LANG)


def test_memo_prunes_long_chains():
    n = 14
    names = [f"x{i}" for i in range(n)]
    prefix = " ".join(f"{'A' if i % 2 == 0 else 'E'} {v}." for i, v in enumerate(names))
    body = " & ".join(f"less({names[i]},{names[i + 1]})" for i in range(0, n - 1, 2))
    truth, nodes = evaluate_with_stats(parse_instance(f"{prefix} {body}"), LANG)
    assert truth is True
    assert nodes < 200
