"""Order conditions: finite sequences of distinct elements of [0, n).

A condition lists some elements of the ground interval in the order it
imposes on them; everything else is left undecided.  Longer sequences are
stronger conditions.  This module owns the element-level surgery: the
extension test, the compatibility test with its canonical merge witness,
one-point insertions, and restriction to a subset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .errors import CapExceededError, IncompatibleError, UniverseMismatchError


@dataclass(frozen=True)
class Universe:
    """Ground interval [0, n) plus the maximum condition length."""

    n: int
    length_cap: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"universe size must be >= 1, got n={self.n}")
        if not 1 <= self.length_cap <= self.n:
            raise ValueError(
                f"length cap must satisfy 1 <= cap <= n, "
                f"got cap={self.length_cap}, n={self.n}"
            )

    def to_json(self) -> dict:
        return {"n": self.n, "length_cap": self.length_cap}

    @classmethod
    def from_json(cls, data: dict) -> "Universe":
        return cls(int(data["n"]), int(data["length_cap"]))


@dataclass(frozen=True)
class Condition:
    """A sequence of distinct elements of [0, n), read as "listed order wins"."""

    universe: Universe
    seq: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "seq", tuple(self.seq))
        n = self.universe.n
        for x in self.seq:
            if not isinstance(x, int) or not 0 <= x < n:
                raise ValueError(f"element {x!r} outside [0, {n})")
        if len(set(self.seq)) != len(self.seq):
            raise ValueError(f"elements must be distinct, got {self.seq}")
        if len(self.seq) > self.universe.length_cap:
            raise CapExceededError(
                f"condition of length {len(self.seq)} exceeds cap "
                f"{self.universe.length_cap}"
            )

    def __len__(self) -> int:
        return len(self.seq)

    def __iter__(self) -> Iterator[int]:
        return iter(self.seq)

    def __contains__(self, x: int) -> bool:
        return x in self.positions

    @cached_property
    def elements(self) -> frozenset[int]:
        return frozenset(self.seq)

    @cached_property
    def positions(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.seq)}

    def before(self, u: int, v: int) -> Optional[bool]:
        """True/False if the condition orders u against v, None if undecided."""
        pos = self.positions
        if u not in pos or v not in pos:
            return None
        return pos[u] < pos[v]

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.seq), self.seq)

    def to_json(self) -> list[int]:
        return list(self.seq)

    @classmethod
    def from_json(cls, universe: Universe, data: Iterable[int]) -> "Condition":
        return cls(universe, tuple(int(x) for x in data))


@dataclass(frozen=True)
class CompatWitness:
    """Outcome of a compatibility test.

    Either `merged` holds a common extension of both inputs, or `conflict`
    holds a pair (x, y) listed in that order by the first input and in the
    opposite order by the second.
    """

    merged: Optional[Condition]
    conflict: Optional[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return self.merged is not None


def _require_same_universe(a: Condition, b: Condition) -> None:
    if a.universe != b.universe:
        raise UniverseMismatchError(f"{a.universe} vs {b.universe}")


def extends(strong: Condition, weak: Condition) -> bool:
    """True iff `strong` imposes every ordering `weak` does.

    For sequences this is exactly: weak.seq is a (not necessarily
    contiguous) subsequence of strong.seq.
    """
    _require_same_universe(strong, weak)
    it = iter(strong.seq)
    return all(x in it for x in weak.seq)


def are_compatible(a: Condition, b: Condition) -> bool:
    """Verdict-only compatibility test; never builds a witness.

    Two conditions admit a common extension iff they agree on the relative
    order of every element they share, i.e. the shared elements appear in
    the same relative order in both sequences.
    """
    _require_same_universe(a, b)
    bpos = b.positions
    last = -1
    for x in a.seq:
        i = bpos.get(x)
        if i is None:
            continue
        if i < last:
            return False
        last = i
    return True


def _find_conflict(a: Condition, b: Condition) -> tuple[int, int]:
    bpos = b.positions
    common = [x for x in a.seq if x in bpos]
    for i, j in itertools.combinations(range(len(common)), 2):
        x, y = common[i], common[j]
        if bpos[y] < bpos[x]:
            return (x, y)
    raise AssertionError("no conflict in a compatible pair")


def _stable_merge(a: Condition, b: Condition) -> Condition:
    # Insert each new element of b right after its last predecessor-in-b
    # already placed; keeps b's elements in b-order without moving a's.
    result = list(a.seq)
    bpos = b.positions
    for x in b.seq:
        if x in a.positions:
            continue
        at = 0
        for i, y in enumerate(result):
            ypos = bpos.get(y)
            if ypos is not None and ypos < bpos[x]:
                at = i + 1
        result.insert(at, x)
    return Condition(a.universe, tuple(result))


def compatible(a: Condition, b: Condition) -> CompatWitness:
    """Decide compatibility and produce a canonical witness.

    Returns a merged common extension when one exists (requires the merged
    length to fit the cap), otherwise the first conflicting pair in a's
    listed order.
    """
    _require_same_universe(a, b)
    if not are_compatible(a, b):
        return CompatWitness(None, _find_conflict(a, b))
    union_size = len(a.elements | b.elements)
    if union_size > a.universe.length_cap:
        raise CapExceededError(
            f"merged condition would have length {union_size}, "
            f"cap is {a.universe.length_cap}"
        )
    return CompatWitness(_stable_merge(a, b), None)


def one_point_extensions(o: Condition, a: int) -> tuple[Condition, ...]:
    """All conditions obtained by inserting a fresh element at each slot."""
    if a in o.positions:
        raise ValueError(f"element {a} already present in {o.seq}")
    if len(o) + 1 > o.universe.length_cap:
        raise CapExceededError(
            f"inserting into a condition of length {len(o)} exceeds cap "
            f"{o.universe.length_cap}"
        )
    seq = o.seq
    return tuple(
        Condition(o.universe, seq[:i] + (a,) + seq[i:]) for i in range(len(seq) + 1)
    )


def restrict(o: Condition, keep: Iterable[int]) -> Condition:
    """Subsequence of o consisting of the given elements, original order."""
    keep = set(keep)
    return Condition(o.universe, tuple(x for x in o.seq if x in keep))


def empty_condition(universe: Universe) -> Condition:
    return Condition(universe, ())


def iter_conditions(
    universe: Universe,
    max_len: int,
    extending: Optional[Condition] = None,
) -> Iterator[Condition]:
    """All conditions of length <= max_len, shortest first, lexicographic.

    When `extending` is given, only conditions extending it are produced.
    """
    max_len = min(max_len, universe.length_cap)
    start = 0 if extending is None else len(extending)
    for length in range(start, max_len + 1):
        for seq in itertools.permutations(range(universe.n), length):
            cond = Condition(universe, seq)
            if extending is None or extends(cond, extending):
                yield cond
