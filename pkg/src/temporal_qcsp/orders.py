"""Weak orders (ordered set partitions) on finite index sets.

A weak order stands for one orbit of ``n``-tuples of rationals under the
order automorphisms of (Q; <).  It is stored as a dense rank map: entry ``i``
is the index of the block holding coordinate ``i``, blocks numbered from the
smallest value upwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Hashable, Iterable, Iterator, Sequence

DEFAULT_MAX_ARITY = 7


class ArityBoundExceeded(ValueError):
    pass


@dataclass(frozen=True, order=True)
class WeakOrder:
    ranks: tuple[int, ...]

    def __post_init__(self):
        if not self.ranks:
            raise ValueError("empty tuple")
        seen = set(self.ranks)
        if seen != set(range(len(seen))):
            raise ValueError(f"ranks {self.ranks} are not a dense 0-based rank map")

    @property
    def arity(self) -> int:
        return len(self.ranks)

    @property
    def blocks(self) -> int:
        return max(self.ranks) + 1

    def block_members(self) -> list[tuple[int, ...]]:
        """Coordinates grouped by block, lowest block first."""
        out: list[list[int]] = [[] for _ in range(self.blocks)]
        for i, r in enumerate(self.ranks):
            out[r].append(i)
        return [tuple(b) for b in out]

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(b) for b in self.block_members())

    def to_json(self) -> list[int]:
        return list(self.ranks)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "WeakOrder":
        return canonicalize(data)

    def __repr__(self) -> str:
        return f"WeakOrder{self.ranks}"


def canonicalize(values: Sequence) -> WeakOrder:
    """Orbit of a tuple of comparable values."""
    if len(values) == 0:
        raise ValueError("empty tuple")
    distinct = sorted(set(values))
    index = {v: i for i, v in enumerate(distinct)}
    return WeakOrder(tuple(index[v] for v in values))


def _compress(ranks: Sequence[int]) -> tuple[int, ...]:
    distinct = sorted(set(ranks))
    index = {v: i for i, v in enumerate(distinct)}
    return tuple(index[v] for v in ranks)


def _check_arity(n: int, max_arity: int | None) -> None:
    if n < 1:
        raise ValueError("arity must be positive")
    bound = DEFAULT_MAX_ARITY if max_arity is None else max_arity
    if n > bound:
        raise ArityBoundExceeded(f"arity bound exceeded: {n} > {bound}")


@lru_cache(maxsize=None)
def _all_rank_maps(n: int) -> tuple[tuple[int, ...], ...]:
    if n == 1:
        return ((0,),)
    out = []
    for ranks in _all_rank_maps(n - 1):
        m = max(ranks) + 1
        for pos in range(2 * m + 1):
            out.append(_extend(ranks, pos))
    return tuple(sorted(out))


def enumerate_weak_orders(n: int, max_arity: int | None = None) -> tuple[WeakOrder, ...]:
    """All weak orders on ``n`` indices, in lexicographic rank order."""
    _check_arity(n, max_arity)
    return tuple(WeakOrder(r) for r in _all_rank_maps(n))


@lru_cache(maxsize=None)
def order_index(n: int) -> dict[tuple[int, ...], int]:
    """Position of each rank tuple in ``enumerate_weak_orders(n)``."""
    return {r: i for i, r in enumerate(_all_rank_maps(n))}


def dual_order(w: WeakOrder) -> WeakOrder:
    top = w.blocks - 1
    return WeakOrder(tuple(top - r for r in w.ranks))


def restrict(w: WeakOrder, keep: Sequence[int]) -> WeakOrder:
    """Pattern of the coordinates ``keep`` (0-based, order and repetition kept)."""
    if len(keep) == 0:
        raise ValueError("restriction to an empty index set")
    for i in keep:
        if not 0 <= i < w.arity:
            raise IndexError(f"index {i} out of range for arity {w.arity}")
    return WeakOrder(_compress([w.ranks[i] for i in keep]))


def _extend(ranks: tuple[int, ...], pos: int) -> tuple[int, ...]:
    # pos is a half-rank: even 2g -> new block in gap g, odd 2j+1 -> join block j
    if pos % 2 == 1:
        return ranks + (pos // 2,)
    g = pos // 2
    return tuple(r + 1 if r >= g else r for r in ranks) + (g,)


def extensions(w: WeakOrder) -> list[WeakOrder]:
    """The 2m+1 one-point extensions of ``w``, lowest placement first."""
    return [WeakOrder(_extend(w.ranks, pos)) for pos in range(2 * w.blocks + 1)]


def joins(
    w1: WeakOrder,
    vars1: Sequence[Hashable],
    w2: WeakOrder,
    vars2: Sequence[Hashable],
) -> tuple[tuple[Hashable, ...], list[WeakOrder]]:
    """Weak orders on the union of two variable sets agreeing with both inputs.

    The result variable order is ``vars1`` followed by the variables of
    ``vars2`` not in ``vars1``.  Built by merging the two block chains, pairing
    blocks that must coincide, so no weak order on the union is enumerated
    blindly.
    """
    if len(vars1) != w1.arity or len(vars2) != w2.arity:
        raise ValueError("variable list does not match arity")
    if len(set(vars1)) != len(vars1) or len(set(vars2)) != len(vars2):
        raise ValueError("duplicate variable in join input")
    out_vars = tuple(vars1) + tuple(v for v in vars2 if v not in set(vars1))
    pos = {v: i for i, v in enumerate(out_vars)}
    shared = set(vars1) & set(vars2)
    p_blocks = [frozenset(vars1[i] for i in b) for b in w1.block_members()]
    q_blocks = [frozenset(vars2[i] for i in b) for b in w2.block_members()]
    p_sh = [b & shared for b in p_blocks]
    q_sh = [b & shared for b in q_blocks]

    results: list[WeakOrder] = []
    levels: list[frozenset] = []

    def rec(i: int, j: int) -> None:
        if i == len(p_blocks) and j == len(q_blocks):
            ranks = [0] * len(out_vars)
            for lvl, members in enumerate(levels):
                for v in members:
                    ranks[pos[v]] = lvl
            results.append(WeakOrder(tuple(ranks)))
            return
        if i < len(p_blocks) and not p_sh[i]:
            levels.append(p_blocks[i])
            rec(i + 1, j)
            levels.pop()
        if i < len(p_blocks) and j < len(q_blocks) and p_sh[i] == q_sh[j]:
            levels.append(p_blocks[i] | q_blocks[j])
            rec(i + 1, j + 1)
            levels.pop()
        if j < len(q_blocks) and not q_sh[j]:
            levels.append(q_blocks[j])
            rec(i, j + 1)
            levels.pop()

    rec(0, 0)
    return out_vars, results


def merge_chains(chains: Sequence[Sequence[Hashable]]) -> Iterator[list[list[Hashable]]]:
    """All weak orders (as level lists) of the union of strict chains.

    Items of one chain land on strictly increasing levels; items of
    different chains may share a level in any combination.
    """
    chains = [list(c) for c in chains if c]
    heads = [0] * len(chains)
    levels: list[list[Hashable]] = []

    def rec() -> Iterator[list[list[Hashable]]]:
        live = [k for k in range(len(chains)) if heads[k] < len(chains[k])]
        if not live:
            yield [list(l) for l in levels]
            return
        for mask in range(1, 1 << len(live)):
            picked = [live[b] for b in range(len(live)) if mask >> b & 1]
            levels.append([chains[k][heads[k]] for k in picked])
            for k in picked:
                heads[k] += 1
            yield from rec()
            for k in picked:
                heads[k] -= 1
            levels.pop()

    yield from rec()


def surjection_count_oracle(n: int) -> int:
    """Count weak orders on n points by brute force over surjections.

    Independent of the incremental construction: every map [n] -> [m] for
    m <= n is tried and kept when onto.
    """
    seen = set()
    for m in range(1, n + 1):
        for f in product(range(m), repeat=n):
            if len(set(f)) == m:
                seen.add(f)
    return len(seen)


def all_equal(n: int) -> WeakOrder:
    return WeakOrder((0,) * n)


def from_levels(levels: Iterable[Iterable[int]], n: int) -> WeakOrder:
    ranks = [0] * n
    for lvl, members in enumerate(levels):
        for i in members:
            ranks[i] = lvl
    return WeakOrder(tuple(ranks))
