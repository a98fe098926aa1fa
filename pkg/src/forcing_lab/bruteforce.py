"""Ground-truth oracles: slow, obviously correct, independent of the main code.

Everything here works on plain tuples of ints and reimplements the little
logic it needs (subsequence tests, permutation filters) so that agreement
with the main modules is evidence, not tautology.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceededError


@dataclass(frozen=True)
class EnumerationBudget:
    max_universe: int = 8
    max_length: int = 8
    max_nodes: int = 2_000_000

    def __post_init__(self) -> None:
        if min(self.max_universe, self.max_length, self.max_nodes) <= 0:
            raise ValueError("budget fields must be positive")


DEFAULT_BUDGET = EnumerationBudget()


def _as_tuple(cond) -> tuple[int, ...]:
    return tuple(cond)


def _is_subsequence(small: Sequence[int], big: Sequence[int]) -> bool:
    i = 0
    for x in big:
        if i < len(small) and small[i] == x:
            i += 1
    return i == len(small)


def all_total_orders(
    m: int,
    extending=(),
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Iterator[tuple[int, ...]]:
    """All strict linear orders of [0, m) extending the given condition.

    Yields exactly m!/len(extending)! permutations.
    """
    if m > budget.max_universe:
        raise BudgetExceededError(f"m={m} exceeds max_universe={budget.max_universe}")
    base = _as_tuple(extending)
    for perm in itertools.permutations(range(m)):
        if _is_subsequence(base, perm):
            yield perm


def count_total_orders(m: int, extending=()) -> int:
    """Closed form m!/k! for the order count; used to cross-check streams."""
    return math.factorial(m) // math.factorial(len(_as_tuple(extending)))


def merge_exists(a, b, budget: EnumerationBudget = DEFAULT_BUDGET) -> bool:
    """True iff some interleaving of the combined elements extends both."""
    ta, tb = _as_tuple(a), _as_tuple(b)
    domain = sorted(set(ta) | set(tb))
    if len(domain) > budget.max_length:
        raise BudgetExceededError(
            f"combined domain of size {len(domain)} exceeds "
            f"max_length={budget.max_length}"
        )
    for perm in itertools.permutations(domain):
        if _is_subsequence(ta, perm) and _is_subsequence(tb, perm):
            return True
    return False


def max_pairwise_incompatible(
    candidates: Sequence,
    incompatible,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> int:
    """Exact maximum size of a pairwise-incompatible subset of `candidates`.

    `incompatible(x, y)` must be a symmetric predicate.  Branch and bound
    over the candidate list; raises when the node budget runs out.
    """
    items = list(range(len(candidates)))
    incomp = [
        {j for j in items if j != i and incompatible(candidates[i], candidates[j])}
        for i in items
    ]
    best = 0
    nodes = 0

    def grow(chosen: int, pool: list[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget.max_nodes:
            raise BudgetExceededError(f"max_nodes={budget.max_nodes} exhausted")
        if chosen > best:
            best = chosen
        for k, i in enumerate(pool):
            if chosen + len(pool) - k <= best:
                return
            grow(chosen + 1, [j for j in pool[k + 1 :] if j in incomp[i]])

    grow(0, items)
    return best


def _sequences_over(m: int, length: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(m), length)


def max_antichain(
    o,
    d: int,
    m: int,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> int:
    """Exact max cardinality of a pairwise-incompatible set of length
    (len(o) + d) extensions of o over the universe [0, m)."""
    base = _as_tuple(o)
    if m > budget.max_universe:
        raise BudgetExceededError(f"m={m} exceeds max_universe={budget.max_universe}")
    target = len(base) + d
    candidates = [
        seq for seq in _sequences_over(m, target) if _is_subsequence(base, seq)
    ]

    def clash(x: tuple[int, ...], y: tuple[int, ...]) -> bool:
        return not merge_exists(x, y, budget)

    return max_pairwise_incompatible(candidates, clash, budget)


def extension_orders(
    member, m: int, budget: EnumerationBudget = DEFAULT_BUDGET
) -> list[tuple[int, ...]]:
    """Total orders of [0, m) extending one member; materialized for set math."""
    return list(all_total_orders(m, member, budget))
