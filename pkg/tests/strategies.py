"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from temporal_qcsp.orders import WeakOrder, canonicalize, enumerate_weak_orders
from temporal_qcsp.relations import TemporalRelation


def weak_orders(min_n: int = 1, max_n: int = 5):
    return st.lists(st.integers(-3, 3), min_size=min_n, max_size=max_n).map(canonicalize)


def rationals():
    return st.fractions(min_value=-10, max_value=10, max_denominator=8)


def relations(n: int):
    size = len(enumerate_weak_orders(n))
    return st.integers(0, (1 << size) - 1).map(lambda m: TemporalRelation.from_mask(n, m))


def ternary_relations():
    return relations(3)


GADGET_KEYS = ("betwc", "cyclc", "eqxor", "i", "s", "leq", "less", "eq", "neq")


def random_instance(rng, keys=GADGET_KEYS, max_vars: int = 5, max_atoms: int = 4, exists_only=False):
    """Random prenex sentence over catalog relations (rng: random.Random)."""
    from temporal_qcsp.formulas import RelAtom
    from temporal_qcsp.qcsp import QcspInstance
    from temporal_qcsp.relations import catalog

    n = rng.randint(1, max_vars)
    names = [f"v{i}" for i in range(n)]
    prefix = tuple(("E" if exists_only or rng.random() < 0.5 else "A", v) for v in names)
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        key = rng.choice(keys)
        atoms.append(RelAtom(key, tuple(rng.choice(names) for _ in range(catalog(key).arity))))
    return QcspInstance(prefix, tuple(atoms))
