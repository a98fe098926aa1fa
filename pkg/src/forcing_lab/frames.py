"""Forcing frames beyond plain order conditions.

Each frame packages the same small contract: an extension test, a
compatibility test, a one-step branching rule, and the matching exact
tree-size / antichain-bound formula.  The order frame wires straight into
the core modules; the tournament and partial-function frames carry their
own condition types.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Optional, Sequence

from . import bruteforce
from .conditions import (
    Condition,
    Universe,
    are_compatible,
    empty_condition,
    extends,
    iter_conditions,
    one_point_extensions,
)
from .errors import CapExceededError, QueueExhaustedError
from .trees import tree_size


# ---------------------------------------------------------------------------
# tournament conditions


@dataclass(frozen=True)
class TournamentCondition:
    """A tournament on a vertex subset of [0, n): one directed edge per pair."""

    universe: Universe
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(map(tuple, self.edges)))
        n = self.universe.n
        if any(not 0 <= v < n for v in self.vertices):
            raise ValueError(f"vertices must lie in [0, {n})")
        if len(self.vertices) > self.universe.length_cap:
            raise CapExceededError(
                f"{len(self.vertices)} vertices exceed cap {self.universe.length_cap}"
            )
        for u, v in self.edges:
            if u not in self.vertices or v not in self.vertices or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
        for u, v in itertools.combinations(sorted(self.vertices), 2):
            fwd, back = (u, v) in self.edges, (v, u) in self.edges
            if fwd == back:
                raise ValueError(f"pair ({u}, {v}) needs exactly one orientation")

    def __len__(self) -> int:
        return len(self.vertices)

    def sort_key(self):
        return (len(self.vertices), tuple(sorted(self.vertices)), tuple(sorted(self.edges)))

    def to_json(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "edges": sorted(map(list, self.edges)),
        }

    @classmethod
    def from_json(cls, universe: Universe, data: dict) -> "TournamentCondition":
        return cls(
            universe,
            frozenset(data["vertices"]),
            frozenset((u, v) for u, v in data["edges"]),
        )


def empty_tournament(universe: Universe) -> TournamentCondition:
    return TournamentCondition(universe, frozenset(), frozenset())


def tournament_extends(strong: TournamentCondition, weak: TournamentCondition) -> bool:
    return strong.vertices >= weak.vertices and strong.edges >= weak.edges


def tournament_compatible(a: TournamentCondition, b: TournamentCondition) -> bool:
    return not any((v, u) in b.edges for u, v in a.edges)


def tournament_extensions(
    t: TournamentCondition, v: int
) -> tuple[TournamentCondition, ...]:
    """All 2^|t| ways of adding vertex v, one per orientation vector."""
    if v in t.vertices:
        raise ValueError(f"vertex {v} already present")
    if not 0 <= v < t.universe.n:
        raise ValueError(f"vertex {v} outside [0, {t.universe.n})")
    if len(t.vertices) + 1 > t.universe.length_cap:
        raise CapExceededError("vertex cap exceeded")
    old = sorted(t.vertices)
    out = []
    for bits in itertools.product((False, True), repeat=len(old)):
        new_edges = set(t.edges)
        for w, towards_w in zip(old, bits):
            new_edges.add((v, w) if towards_w else (w, v))
        out.append(
            TournamentCondition(t.universe, t.vertices | {v}, frozenset(new_edges))
        )
    return tuple(out)


def domination_player_move(
    t: TournamentCondition, blocked: frozenset[int] | set[int]
) -> TournamentCondition:
    """Add a fresh vertex that no member of `blocked` beats.

    Edges towards blocked vertices point away from the newcomer; all other
    new edges point towards it.
    """
    fresh = [
        x for x in range(t.universe.n) if x not in blocked and x not in t.vertices
    ]
    if not fresh:
        raise QueueExhaustedError("no vertex outside the blocked set remains")
    x = fresh[0]
    if len(t.vertices) + 1 > t.universe.length_cap:
        raise CapExceededError("vertex cap exceeded")
    new_edges = set(t.edges)
    for w in t.vertices:
        new_edges.add((x, w) if w in blocked else (w, x))
    return TournamentCondition(t.universe, t.vertices | {x}, frozenset(new_edges))


def dominating_set_check(t: TournamentCondition, xs: set[int]) -> bool:
    """True iff every vertex outside xs is beaten by some member of xs."""
    xs = set(xs)
    if not xs <= t.vertices:
        raise ValueError("the candidate set must consist of tournament vertices")
    return all(
        any((v, w) in t.edges for v in xs) for w in t.vertices - xs
    )


def iter_tournaments(
    universe: Universe,
    max_size: int,
    extending: Optional[TournamentCondition] = None,
) -> Iterator[TournamentCondition]:
    max_size = min(max_size, universe.length_cap)
    base_vertices = frozenset() if extending is None else extending.vertices
    start = len(base_vertices)
    for size in range(start, max_size + 1):
        extra_pool = [v for v in range(universe.n) if v not in base_vertices]
        for extra in itertools.combinations(extra_pool, size - start):
            vertices = sorted(base_vertices | set(extra))
            pairs = list(itertools.combinations(vertices, 2))
            for bits in itertools.product((False, True), repeat=len(pairs)):
                edges = frozenset(
                    (u, v) if bit else (v, u) for (u, v), bit in zip(pairs, bits)
                )
                t = TournamentCondition(universe, frozenset(vertices), edges)
                if extending is None or tournament_extends(t, extending):
                    yield t


# ---------------------------------------------------------------------------
# partial-function conditions (pigeons [0, n) to holes [0, 2n))


@dataclass(frozen=True)
class PartialFnCondition:
    """Graph of a partial map from [0, n) into [0, 2n)."""

    universe: Universe
    graph: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(x), int(y)) for x, y in self.graph))
        object.__setattr__(self, "graph", pairs)
        n = self.universe.n
        pigeons = [x for x, _ in pairs]
        if len(set(pigeons)) != len(pigeons):
            raise ValueError("graph must be functional")
        for x, y in pairs:
            if not 0 <= x < n:
                raise ValueError(f"pigeon {x} outside [0, {n})")
            if not 0 <= y < 2 * n:
                raise ValueError(f"hole {y} outside [0, {2 * n})")
        if len(pairs) > self.universe.length_cap:
            raise CapExceededError(
                f"{len(pairs)} pairs exceed cap {self.universe.length_cap}"
            )

    def __len__(self) -> int:
        return len(self.graph)

    @cached_property
    def mapping(self) -> dict[int, int]:
        return dict(self.graph)

    @cached_property
    def holes_used(self) -> frozenset[int]:
        return frozenset(y for _, y in self.graph)

    def sort_key(self):
        return (len(self.graph), self.graph)

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.graph]}

    @classmethod
    def from_json(cls, universe: Universe, data: dict) -> "PartialFnCondition":
        return cls(universe, tuple((x, y) for x, y in data["pairs"]))


def empty_partial_fn(universe: Universe) -> PartialFnCondition:
    return PartialFnCondition(universe, ())


def partial_fn_extends(strong: PartialFnCondition, weak: PartialFnCondition) -> bool:
    return set(strong.graph) >= set(weak.graph)


def partial_fn_compatible(a: PartialFnCondition, b: PartialFnCondition) -> bool:
    bm = b.mapping
    return all(bm.get(x, y) == y for x, y in a.graph)


def partial_fn_branch(
    f: PartialFnCondition, pigeon: int
) -> tuple[PartialFnCondition, ...]:
    """Branch over every possible hole for one unmapped pigeon."""
    if pigeon in f.mapping:
        raise ValueError(f"pigeon {pigeon} already mapped")
    return tuple(
        PartialFnCondition(f.universe, f.graph + ((pigeon, y),))
        for y in range(2 * f.universe.n)
    )


def surjection_player_move(
    f: PartialFnCondition, queue: Sequence[int]
) -> tuple[PartialFnCondition, tuple[int, ...]]:
    """Map the smallest unmapped pigeon onto the next hole missing from the range.

    Returns the condition unchanged once every pigeon is mapped; the caller
    can see saturation by comparing sizes.
    """
    remaining = [y for y in queue if y not in f.holes_used]
    unmapped = [x for x in range(f.universe.n) if x not in f.mapping]
    if not unmapped:
        return f, tuple(remaining)
    if not remaining:
        raise QueueExhaustedError("hole queue ran dry")
    hole, rest = remaining[0], tuple(remaining[1:])
    new = PartialFnCondition(f.universe, f.graph + ((unmapped[0], hole),))
    return new, rest


def iter_partial_fns(
    universe: Universe,
    max_size: int,
    extending: Optional[PartialFnCondition] = None,
) -> Iterator[PartialFnCondition]:
    max_size = min(max_size, universe.length_cap)
    base = () if extending is None else extending.graph
    base_pigeons = {x for x, _ in base}
    pool = [x for x in range(universe.n) if x not in base_pigeons]
    for size in range(len(base), max_size + 1):
        for pigeons in itertools.combinations(pool, size - len(base)):
            for holes in itertools.product(range(2 * universe.n), repeat=len(pigeons)):
                yield PartialFnCondition(
                    universe, base + tuple(zip(pigeons, holes))
                )


# ---------------------------------------------------------------------------
# the shared frame contract


@dataclass(frozen=True)
class FrameContract:
    """Uniform handle on a forcing frame for the generic machinery."""

    name: str
    universe: Universe
    root: object
    extends: Callable
    compatible: Callable
    size: Callable
    branch: Callable
    branch_items: Callable
    iter_conditions: Callable
    uniform_tree_size: Callable[[int, int], int]
    antichain_bound: Callable[[int, int], int]
    sort_key: Callable
    serialize: Callable


def order_frame(universe: Universe) -> FrameContract:
    def branch_items(base: Condition, d: int) -> list[int]:
        fresh = [x for x in range(universe.n) if x not in base.elements]
        if len(fresh) < d:
            raise ValueError(f"need {d} fresh elements, only {len(fresh)} left")
        return fresh[:d]

    return FrameContract(
        name="order",
        universe=universe,
        root=empty_condition(universe),
        extends=extends,
        compatible=are_compatible,
        size=len,
        branch=one_point_extensions,
        branch_items=branch_items,
        iter_conditions=lambda max_size, extending=None: iter_conditions(
            universe, max_size, extending
        ),
        uniform_tree_size=tree_size,
        antichain_bound=tree_size,
        sort_key=Condition.sort_key,
        serialize=Condition.to_json,
    )


def tournament_frame(universe: Universe) -> FrameContract:
    def size_formula(m: int, d: int) -> int:
        return math.prod(2 ** (m + i) for i in range(d))

    def branch_items(base: TournamentCondition, d: int) -> list[int]:
        fresh = [v for v in range(universe.n) if v not in base.vertices]
        if len(fresh) < d:
            raise ValueError(f"need {d} fresh vertices, only {len(fresh)} left")
        return fresh[:d]

    return FrameContract(
        name="tournament",
        universe=universe,
        root=empty_tournament(universe),
        extends=tournament_extends,
        compatible=tournament_compatible,
        size=len,
        branch=tournament_extensions,
        branch_items=branch_items,
        iter_conditions=lambda max_size, extending=None: iter_tournaments(
            universe, max_size, extending
        ),
        uniform_tree_size=size_formula,
        antichain_bound=size_formula,
        sort_key=TournamentCondition.sort_key,
        serialize=TournamentCondition.to_json,
    )


def partialfn_frame(universe: Universe) -> FrameContract:
    def size_formula(m: int, d: int) -> int:
        return (2 * universe.n) ** d

    def branch_items(base: PartialFnCondition, d: int) -> list[int]:
        fresh = [x for x in range(universe.n) if x not in base.mapping]
        if len(fresh) < d:
            raise ValueError(f"need {d} unmapped pigeons, only {len(fresh)} left")
        return fresh[:d]

    return FrameContract(
        name="partialfn",
        universe=universe,
        root=empty_partial_fn(universe),
        extends=partial_fn_extends,
        compatible=partial_fn_compatible,
        size=len,
        branch=partial_fn_branch,
        branch_items=branch_items,
        iter_conditions=lambda max_size, extending=None: iter_partial_fns(
            universe, max_size, extending
        ),
        uniform_tree_size=size_formula,
        antichain_bound=size_formula,
        sort_key=PartialFnCondition.sort_key,
        serialize=PartialFnCondition.to_json,
    )


FRAME_FACTORIES = {
    "order": order_frame,
    "tournament": tournament_frame,
    "partialfn": partialfn_frame,
}


def build_frame_tree(frame: FrameContract, base, d: int) -> list:
    """Leaves of the uniform depth-d tree grown from `base`."""
    items = frame.branch_items(base, d)
    leaves = [base]
    for item in items:
        leaves = [ext for leaf in leaves for ext in frame.branch(leaf, item)]
    return leaves


@dataclass
class FrameBoundReport:
    frame: str
    base_size: int
    depth: int
    formula: int
    tree_leaves: int
    max_antichain: int
    tree_matches_formula: bool
    antichain_within_bound: bool
    antichain_attains_bound: bool

    @property
    def ok(self) -> bool:
        return self.tree_matches_formula and self.antichain_within_bound

    def to_json(self) -> dict:
        return {
            "frame": self.frame,
            "base_size": self.base_size,
            "depth": self.depth,
            "formula": self.formula,
            "tree_leaves": self.tree_leaves,
            "max_antichain": self.max_antichain,
            "tree_matches_formula": self.tree_matches_formula,
            "antichain_within_bound": self.antichain_within_bound,
            "antichain_attains_bound": self.antichain_attains_bound,
            "ok": self.ok,
        }


def frame_bound_check(
    frame: FrameContract,
    base,
    d: int,
    budget: bruteforce.EnumerationBudget = bruteforce.DEFAULT_BUDGET,
) -> FrameBoundReport:
    """Compare the frame's size formula against a built tree and an
    exhaustively found maximal pairwise-incompatible family."""
    m = frame.size(base)
    formula = frame.uniform_tree_size(m, d)
    leaves = build_frame_tree(frame, base, d)
    target = m + d
    candidates = [
        c
        for c in frame.iter_conditions(target, base)
        if frame.size(c) == target
    ]
    best = bruteforce.max_pairwise_incompatible(
        candidates, lambda a, b: not frame.compatible(a, b), budget
    )
    return FrameBoundReport(
        frame=frame.name,
        base_size=m,
        depth=d,
        formula=formula,
        tree_leaves=len(leaves),
        max_antichain=best,
        tree_matches_formula=len(leaves) == formula,
        antichain_within_bound=best <= frame.antichain_bound(m, d),
        antichain_attains_bound=best == frame.antichain_bound(m, d),
    )
