"""Insertion trees over order conditions and their exact size law.

A tree is stored as its leaf set plus the root and depth; the internal
branching is never needed once the leaves exist.  Uniform trees inserting
d fresh elements into a root of length m have exactly (m+d)!/m! leaves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .conditions import (
    Condition,
    Universe,
    are_compatible,
    iter_conditions,
    one_point_extensions,
)
from .errors import CapExceededError, IncompatibleError


def tree_size(m: int, d: int) -> int:
    """(m+d)!/m! as an exact integer."""
    if m < 0 or d < 0:
        raise ValueError("arguments must be non-negative")
    return math.prod(range(m + 1, m + d + 1))


@dataclass(frozen=True)
class MinTree:
    """Leaf set of an insertion tree: root, depth, pairwise-incompatible leaves."""

    root: Condition
    depth: int
    leaves: frozenset[Condition]

    @property
    def size(self) -> int:
        return len(self.leaves)

    def sorted_leaves(self) -> list[Condition]:
        return sorted(self.leaves, key=Condition.sort_key)

    def to_json(self) -> dict:
        return {
            "root": self.root.to_json(),
            "depth": self.depth,
            "leaves": [leaf.to_json() for leaf in self.sorted_leaves()],
        }

    @classmethod
    def from_json(cls, universe: Universe, data: dict) -> "MinTree":
        return cls(
            root=Condition.from_json(universe, data["root"]),
            depth=int(data["depth"]),
            leaves=frozenset(
                Condition.from_json(universe, leaf) for leaf in data["leaves"]
            ),
        )


def build_uniform_tree(o: Condition, elems: Sequence[int]) -> MinTree:
    """Insert the given fresh elements one at a time, branching over all slots.

    The result is uniform of depth len(elems); its leaf count is exactly
    tree_size(len(o), len(elems)).
    """
    elems = list(elems)
    if len(set(elems)) != len(elems):
        raise ValueError(f"insertion elements must be distinct: {elems}")
    overlap = set(elems) & o.elements
    if overlap:
        raise ValueError(f"elements {sorted(overlap)} already in root {o.seq}")
    if len(o) + len(elems) > o.universe.length_cap:
        raise CapExceededError(
            f"tree leaves of length {len(o) + len(elems)} exceed cap "
            f"{o.universe.length_cap}"
        )
    leaves: list[Condition] = [o]
    for a in elems:
        leaves = [ext for leaf in leaves for ext in one_point_extensions(leaf, a)]
    return MinTree(root=o, depth=len(elems), leaves=frozenset(leaves))


@dataclass(frozen=True)
class Envelope:
    """All extensions of `base` to the combined domain of base and target."""

    base: Condition
    target: Condition
    tree: MinTree


def envelope(q: Condition, s: Condition) -> Envelope:
    """Tree over q whose leaves are all extensions of q to el(q) | el(s).

    Requires q and s compatible.  Missing elements are inserted in
    ascending order; the leaf set does not depend on that order.
    """
    if not are_compatible(q, s):
        raise IncompatibleError(f"{q.seq} is incompatible with {s.seq}")
    missing = sorted(s.elements - q.elements)
    return Envelope(base=q, target=s, tree=build_uniform_tree(q, missing))


@dataclass
class TreeReport:
    """Per-property verdicts from validate_tree."""

    pairwise_incompatible: bool
    incompat_counterexample: Optional[tuple[tuple[int, ...], tuple[int, ...]]]
    covering: bool
    covering_counterexample: Optional[tuple[int, ...]]
    size: int
    size_bound: int
    size_ok: bool
    attains_bound: bool
    uniform: bool

    @property
    def ok(self) -> bool:
        return self.pairwise_incompatible and self.covering and self.size_ok

    def to_json(self) -> dict:
        return {
            "pairwise_incompatible": self.pairwise_incompatible,
            "incompat_counterexample": self.incompat_counterexample,
            "covering": self.covering,
            "covering_counterexample": self.covering_counterexample,
            "size": self.size,
            "size_bound": self.size_bound,
            "size_ok": self.size_ok,
            "attains_bound": self.attains_bound,
            "uniform": self.uniform,
            "ok": self.ok,
        }


def validate_tree(tree: MinTree, sample_cap: int) -> TreeReport:
    """Check the three leaf-set properties a genuine insertion tree must have.

    1. leaves pairwise incompatible;
    2. every condition of length <= sample_cap compatible with the root is
       compatible with some leaf;
    3. leaf count within the factorial bound for the claimed depth, with
       the equality case flagged (equality plus equal leaf lengths is what
       `uniform` reports).
    """
    leaves = sorted(tree.leaves, key=Condition.sort_key)
    incompat_ok = True
    incompat_cx = None
    for i in range(len(leaves)):
        for j in range(i + 1, len(leaves)):
            if are_compatible(leaves[i], leaves[j]):
                incompat_ok = False
                incompat_cx = (leaves[i].seq, leaves[j].seq)
                break
        if not incompat_ok:
            break

    covering_ok = True
    covering_cx = None
    for q in iter_conditions(tree.root.universe, sample_cap):
        if not are_compatible(q, tree.root):
            continue
        if not any(are_compatible(q, leaf) for leaf in leaves):
            covering_ok = False
            covering_cx = q.seq
            break

    bound = tree_size(len(tree.root), tree.depth)
    size = len(leaves)
    attains = size == bound
    expected_len = len(tree.root) + tree.depth
    uniform_lengths = all(len(leaf) == expected_len for leaf in leaves)
    return TreeReport(
        pairwise_incompatible=incompat_ok,
        incompat_counterexample=incompat_cx,
        covering=covering_ok,
        covering_counterexample=covering_cx,
        size=size,
        size_bound=bound,
        size_ok=size <= bound,
        attains_bound=attains,
        uniform=attains and uniform_lengths,
    )
