"""Pigeonhole arrays: indexed families of conditions with strong disjointness.

An array over a base condition has p rows and h columns of cells; members
of one cell, of one row, and of one column are pairwise incompatible, and
every row stays reachable from every extension of the base.  Valid arrays
can have their rows blown up into uniform trees of a common depth, which
pins the array size to p * (|o|+d)!/|o|! from below and
h * (|o|+d)!/|o|! from above: arrays exist only when p <= h.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import bruteforce
from .conditions import Condition, Universe, are_compatible, extends
from .errors import (
    ArrayInvariantError,
    BudgetExceededError,
    CapExceededError,
    InternalInvariantError,
)
from .frames import FrameContract, order_frame
from .trees import build_uniform_tree, envelope, tree_size


@dataclass(frozen=True)
class PhpArray:
    """p x h family of condition sets over a common base."""

    base: object
    pigeons: int
    holes: int
    cells: tuple[tuple[frozenset, ...], ...]

    def __post_init__(self) -> None:
        cells = tuple(tuple(frozenset(cell) for cell in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        if self.pigeons < 1 or self.holes < 1:
            raise ValueError("need at least one pigeon and one hole")
        if len(cells) != self.pigeons or any(len(row) != self.holes for row in cells):
            raise ValueError("cell grid shape must be pigeons x holes")

    def cell(self, a: int, b: int) -> frozenset:
        return self.cells[a][b]

    def row(self, a: int) -> set:
        out: set = set()
        for cell in self.cells[a]:
            out |= cell
        return out

    def column(self, b: int) -> set:
        out: set = set()
        for row in self.cells:
            out |= row[b]
        return out

    def members(self) -> Iterable:
        for row in self.cells:
            for cell in row:
                yield from cell

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "p": self.pigeons,
            "h": self.holes,
            "cells": [
                [
                    [m.to_json() for m in sorted(cell, key=lambda c: c.sort_key())]
                    for cell in row
                ]
                for row in self.cells
            ],
        }

    @classmethod
    def from_json(cls, universe: Universe, data: dict) -> "PhpArray":
        return cls(
            base=Condition.from_json(universe, data["base"]),
            pigeons=int(data["p"]),
            holes=int(data["h"]),
            cells=tuple(
                tuple(
                    frozenset(Condition.from_json(universe, m) for m in cell)
                    for cell in row
                )
                for row in data["cells"]
            ),
        )


def _default_frame(array_or_base) -> FrameContract:
    base = array_or_base.base if isinstance(array_or_base, PhpArray) else array_or_base
    if not isinstance(base, Condition):
        raise TypeError("a frame contract is required for non-order conditions")
    return order_frame(base.universe)


@dataclass
class AxiomVerdict:
    axiom: str
    passed: bool
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


@dataclass
class ArrayReport:
    verdicts: list[AxiomVerdict]
    q_bound: int

    @property
    def ok(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "q_bound": self.q_bound,
            "verdicts": [v.to_json() for v in self.verdicts],
            "ok": self.ok,
        }


def validate_array(
    A: PhpArray,
    frame: Optional[FrameContract] = None,
    q_max_len: Optional[int] = None,
) -> ArrayReport:
    """Check the five array axioms; the density axiom by full enumeration
    of conditions extending the base up to the length bound."""
    frame = frame or _default_frame(A)
    ser = frame.serialize
    verdicts: list[AxiomVerdict] = []

    cx = None
    for a in range(A.pigeons):
        for b in range(A.holes):
            for m in A.cell(a, b):
                if not frame.extends(m, A.base):
                    cx = {"a": a, "b": b, "member": ser(m)}
                    break
    verdicts.append(AxiomVerdict("members-extend-base", cx is None, cx))

    def first_compatible_pair(cell_a, cell_b, same: bool):
        pairs = (
            itertools.combinations(sorted(cell_a, key=frame.sort_key), 2)
            if same
            else itertools.product(
                sorted(cell_a, key=frame.sort_key), sorted(cell_b, key=frame.sort_key)
            )
        )
        for x, y in pairs:
            if frame.compatible(x, y):
                return x, y
        return None

    cx = None
    for a in range(A.pigeons):
        for b in range(A.holes):
            hit = first_compatible_pair(A.cell(a, b), A.cell(a, b), same=True)
            if hit:
                cx = {"a": a, "b": b, "pair": [ser(hit[0]), ser(hit[1])]}
                break
        if cx:
            break
    verdicts.append(AxiomVerdict("within-cell-incompatible", cx is None, cx))

    cx = None
    for b in range(A.holes):
        for a1, a2 in itertools.combinations(range(A.pigeons), 2):
            hit = first_compatible_pair(A.cell(a1, b), A.cell(a2, b), same=False)
            if hit:
                cx = {"b": b, "rows": [a1, a2], "pair": [ser(hit[0]), ser(hit[1])]}
                break
        if cx:
            break
    verdicts.append(AxiomVerdict("across-column-incompatible", cx is None, cx))

    cx = None
    for a in range(A.pigeons):
        for b1, b2 in itertools.combinations(range(A.holes), 2):
            hit = first_compatible_pair(A.cell(a, b1), A.cell(a, b2), same=False)
            if hit:
                cx = {"a": a, "columns": [b1, b2], "pair": [ser(hit[0]), ser(hit[1])]}
                break
        if cx:
            break
    verdicts.append(AxiomVerdict("across-row-incompatible", cx is None, cx))

    q_bound = q_max_len if q_max_len is not None else frame.universe.length_cap
    cx = None
    rows = [sorted(A.row(a), key=frame.sort_key) for a in range(A.pigeons)]
    for q in frame.iter_conditions(q_bound, A.base):
        for a in range(A.pigeons):
            if not any(frame.compatible(q, r) for r in rows[a]):
                cx = {"q": ser(q), "a": a}
                break
        if cx:
            break
    verdicts.append(AxiomVerdict("every-extension-meets-every-row", cx is None, cx))

    return ArrayReport(verdicts=verdicts, q_bound=q_bound)


def array_size(A: PhpArray) -> int:
    """Total member count, recomputed three ways which must agree."""
    by_cells = sum(len(A.cell(a, b)) for a in range(A.pigeons) for b in range(A.holes))
    by_rows = sum(len(A.row(a)) for a in range(A.pigeons))
    by_columns = sum(len(A.column(b)) for b in range(A.holes))
    if not by_cells == by_rows == by_columns:
        raise ArrayInvariantError(
            f"size disagreement: cells={by_cells} rows={by_rows} "
            f"columns={by_columns}; members are shared across cells"
        )
    return by_cells


# ---------------------------------------------------------------------------
# row uniformization


@dataclass
class UniformizeResult:
    array: PhpArray
    depth: int
    stages: list[list[tuple[Condition, ...]]]  # per row, per stage, leaves


def _check_stage_invariant(
    base: Condition, stage: int, leaves: Sequence[Condition], members: Sequence[Condition]
) -> None:
    floor = len(base) + stage
    for q in leaves:
        for s in members:
            if are_compatible(q, s):
                need = min(floor, len(s))
                got = len(q.elements & s.elements)
                if got < need:
                    raise InternalInvariantError(
                        f"stage {stage}: leaf {q.seq} meets {s.seq} in {got} "
                        f"elements, needs {need}"
                    )


def uniformize_rows_detailed(
    A: PhpArray, d: Optional[int] = None
) -> UniformizeResult:
    """Extend every row of a valid array to a uniform tree of one depth.

    Stage-by-stage, each leaf not yet over a row member is replaced by the
    envelope towards its smallest compatible member; the intersection
    invariant is asserted after every stage.  Surviving leaves are then
    padded with the smallest unused elements up to length |base| + d and
    inherit the cell of the unique member they extend.
    """
    base = A.base
    if not isinstance(base, Condition):
        raise TypeError("row uniformization is defined for order conditions")
    universe = base.universe

    row_members = [
        sorted(A.row(a), key=Condition.sort_key) for a in range(A.pigeons)
    ]
    member_cell: dict[Condition, int] = {}
    for a in range(A.pigeons):
        for b in range(A.holes):
            for m in A.cell(a, b):
                member_cell[m] = b

    all_stages: list[list[tuple[Condition, ...]]] = []
    settled_rows: list[list[Condition]] = []
    for a in range(A.pigeons):
        members = row_members[a]
        if not members:
            raise ValueError(f"row {a} is empty; not a valid array")
        max_stage = max(len(s) - len(base) for s in members)
        leaves: list[Condition] = [base]
        stages = [tuple(leaves)]
        _check_stage_invariant(base, 0, leaves, members)
        stage = 0
        while not all(
            any(extends(q, s) for s in members) for q in leaves
        ):
            stage += 1
            if stage > max_stage:
                raise InternalInvariantError(
                    f"row {a} did not settle within {max_stage} stages"
                )
            grown: list[Condition] = []
            for q in leaves:
                if any(extends(q, s) for s in members):
                    grown.append(q)
                    continue
                targets = [s for s in members if are_compatible(q, s)]
                if not targets:
                    raise ValueError(
                        f"leaf {q.seq} meets no member of row {a}; "
                        f"input violates the density axiom"
                    )
                grown.extend(
                    sorted(envelope(q, targets[0]).tree.leaves, key=Condition.sort_key)
                )
            leaves = grown
            stages.append(tuple(leaves))
            _check_stage_invariant(base, stage, leaves, members)
        all_stages.append(stages)
        settled_rows.append(leaves)

    needed = max(
        (len(q) - len(base) for leaves in settled_rows for q in leaves),
        default=0,
    )
    member_depth = max(
        (len(s) - len(base) for members in row_members for s in members),
        default=0,
    )
    needed = max(needed, member_depth)
    if d is None:
        d = needed
    if d < needed:
        raise ValueError(f"depth {d} too small, rows need depth {needed}")
    target_len = len(base) + d
    if target_len > universe.length_cap:
        raise CapExceededError(
            f"uniform depth {d} needs length {target_len}, cap is "
            f"{universe.length_cap}"
        )
    if target_len > universe.n:
        raise ValueError(
            f"uniform depth {d} needs {target_len} distinct elements, "
            f"universe has {universe.n}"
        )

    new_cells = [
        [set() for _ in range(A.holes)] for _ in range(A.pigeons)
    ]
    for a in range(A.pigeons):
        members = row_members[a]
        for q in settled_rows[a]:
            owners = [s for s in members if extends(q, s)]
            if len(owners) != 1:
                raise InternalInvariantError(
                    f"leaf {q.seq} extends {len(owners)} members of row {a}"
                )
            b = member_cell[owners[0]]
            fresh = [x for x in range(universe.n) if x not in q.elements]
            pad = fresh[: target_len - len(q)]
            for leaf in build_uniform_tree(q, pad).leaves:
                new_cells[a][b].add(leaf)

    result = PhpArray(
        base=base,
        pigeons=A.pigeons,
        holes=A.holes,
        cells=tuple(tuple(frozenset(c) for c in row) for row in new_cells),
    )
    want = tree_size(len(base), d)
    for a in range(A.pigeons):
        got = len(result.row(a))
        if got != want:
            raise InternalInvariantError(
                f"uniformized row {a} has {got} leaves, expected {want}"
            )
    return UniformizeResult(array=result, depth=d, stages=all_stages)


def uniformize_rows(A: PhpArray, d: Optional[int] = None) -> PhpArray:
    """Uniformize every row to a common depth; see uniformize_rows_detailed."""
    return uniformize_rows_detailed(A, d).array


def array_extends(prime: PhpArray, A: PhpArray, frame=None) -> bool:
    """True iff every member of `prime` extends a member of the matching cell."""
    frame = frame or _default_frame(A)
    for a in range(A.pigeons):
        for b in range(A.holes):
            for q in prime.cell(a, b):
                if not any(frame.extends(q, r) for r in A.cell(a, b)):
                    return False
    return True


# ---------------------------------------------------------------------------
# the counting side


@dataclass
class UpperBoundReport:
    size: int
    bound: int
    pairwise_incompatible: bool
    size_within_bound: bool
    total_orders: int
    expected_total_orders: int
    per_member_expected: int
    per_member_ok: bool
    extension_sets_disjoint: bool

    @property
    def ok(self) -> bool:
        return (
            self.pairwise_incompatible
            and self.size_within_bound
            and self.total_orders == self.expected_total_orders
            and self.per_member_ok
            and self.extension_sets_disjoint
        )

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "bound": self.bound,
            "pairwise_incompatible": self.pairwise_incompatible,
            "size_within_bound": self.size_within_bound,
            "total_orders": self.total_orders,
            "expected_total_orders": self.expected_total_orders,
            "per_member_expected": self.per_member_expected,
            "per_member_ok": self.per_member_ok,
            "extension_sets_disjoint": self.extension_sets_disjoint,
            "ok": self.ok,
        }


def antichain_upper_bound_check(
    S: Iterable[Condition],
    o: Condition,
    d: int,
    m: Optional[int] = None,
    budget: bruteforce.EnumerationBudget = bruteforce.DEFAULT_BUDGET,
) -> UpperBoundReport:
    """Verify the antichain bound and the order-counting identity behind it.

    Every strict linear order of [0, m) extending o is enumerated; each
    member of S must own exactly m!/(|o|+d)! of them, and no order may be
    owned twice.
    """
    members = sorted(S, key=Condition.sort_key)
    want_len = len(o) + d
    for s in members:
        if len(s) != want_len:
            raise ValueError(f"member {s.seq} has length {len(s)}, want {want_len}")
        if not extends(s, o):
            raise ValueError(f"member {s.seq} does not extend {o.seq}")
    if m is None:
        m = o.universe.n
    top = max((max(s.seq, default=-1) for s in members), default=-1)
    if max(top, max(o.seq, default=-1)) >= m:
        raise ValueError(f"members mention elements outside [0, {m})")

    pairwise = all(
        not are_compatible(x, y) for x, y in itertools.combinations(members, 2)
    )
    bound = tree_size(len(o), d)

    totals = list(bruteforce.all_total_orders(m, o, budget))
    expected_totals = bruteforce.count_total_orders(m, o)
    per_member_expected = bruteforce.count_total_orders(m, tuple(range(want_len)))

    owners_ok = True
    disjoint = True
    counts = [0] * len(members)
    for tau in totals:
        hit = [
            i
            for i, s in enumerate(members)
            if bruteforce._is_subsequence(s.seq, tau)
        ]
        if len(hit) > 1:
            disjoint = False
        for i in hit:
            counts[i] += 1
    owners_ok = all(c == per_member_expected for c in counts)

    return UpperBoundReport(
        size=len(members),
        bound=bound,
        pairwise_incompatible=pairwise,
        size_within_bound=len(members) <= bound,
        total_orders=len(totals),
        expected_total_orders=expected_totals,
        per_member_expected=per_member_expected,
        per_member_ok=owners_ok,
        extension_sets_disjoint=disjoint,
    )


# ---------------------------------------------------------------------------
# exhaustive array search


@dataclass
class SearchVerdict:
    exists: bool
    witness: Optional[PhpArray]
    certificate: dict

    def to_json(self) -> dict:
        return {
            "exists": self.exists,
            "witness": self.witness.to_json() if self.witness else None,
            "certificate": self.certificate,
        }


def search_array(
    base,
    p: int,
    h: int,
    max_len: int,
    frame: Optional[FrameContract] = None,
    budget: bruteforce.EnumerationBudget = bruteforce.DEFAULT_BUDGET,
    q_max_len: Optional[int] = None,
) -> SearchVerdict:
    """Exhaustively search for an array over `base` with members up to max_len.

    Rows of any valid array are covering antichains whose members carry a
    column each, with same-column members of different rows incompatible.
    The search fills rows one at a time, backtracking over candidate
    members; a row member never constrains its own row's columns, so the
    per-member column choices at one level are independent.  Pruning uses
    suffix coverage masks and is sound, so an exhausted search is a
    nonexistence proof; the certificate records the enumeration counts.
    """
    frame = frame or _default_frame(base)
    candidates = sorted(frame.iter_conditions(max_len, base), key=frame.sort_key)
    q_bound = q_max_len if q_max_len is not None else frame.universe.length_cap
    qs = list(frame.iter_conditions(q_bound, base))
    full_mask = (1 << len(qs)) - 1
    ncand = len(candidates)

    compat = [[frame.compatible(x, y) for y in candidates] for x in candidates]
    coverage = []
    for c in candidates:
        mask = 0
        for qi, q in enumerate(qs):
            if frame.compatible(q, c):
                mask |= 1 << qi
        coverage.append(mask)

    nodes = 0
    rows_level0 = 0
    witness_rows: Optional[list[list[tuple[int, int]]]] = None

    def place(level: int, columns: list[list[int]],
              placed: list[list[tuple[int, int]]]) -> bool:
        nonlocal nodes, rows_level0, witness_rows
        if level == p:
            witness_rows = [list(row) for row in placed]
            return True

        # columns each member of this level's row could take, given the
        # members already sitting in each column from earlier rows
        allowed: list[tuple[int, ...]] = []
        for i in range(ncand):
            cols = tuple(
                col
                for col in range(h)
                if all(not compat[i][j] for j in columns[col])
            )
            allowed.append(cols)
        eligible = [i for i in range(ncand) if allowed[i]]
        suffix = [0] * (len(eligible) + 1)
        for k in range(len(eligible) - 1, -1, -1):
            suffix[k] = suffix[k + 1] | coverage[eligible[k]]

        def try_colorings(members: list[int], k: int) -> bool:
            nonlocal nodes
            if k == len(members):
                return place(level + 1, columns, placed)
            nodes += 1
            if nodes > budget.max_nodes:
                raise BudgetExceededError("array search budget exhausted")
            m = members[k]
            for col in allowed[m]:
                columns[col].append(m)
                placed[level].append((m, col))
                if try_colorings(members, k + 1):
                    return True
                placed[level].pop()
                columns[col].pop()
            return False

        def grow(members: list[int], mask: int, start: int) -> bool:
            nonlocal nodes, rows_level0
            nodes += 1
            if nodes > budget.max_nodes:
                raise BudgetExceededError("array search budget exhausted")
            if members and mask == full_mask:
                if level == 0:
                    rows_level0 += 1
                if try_colorings(members, 0):
                    return True
            for k in range(start, len(eligible)):
                if mask | suffix[k] != full_mask:
                    return False
                i = eligible[k]
                if all(not compat[i][j] for j in members):
                    members.append(i)
                    if grow(members, mask | coverage[i], k + 1):
                        return True
                    members.pop()
            return False

        placed.append([])
        found = grow([], 0, 0)
        if not found:
            placed.pop()
        return found

    found = place(0, [[] for _ in range(h)], [])
    certificate = {
        "candidates": ncand,
        "q_conditions": len(qs),
        "covering_antichains_first_row": rows_level0,
        "search_nodes": nodes,
        "max_len": max_len,
        "q_bound": q_bound,
        "exhausted": not found,
    }
    if found:
        cells: list[list[set]] = [[set() for _ in range(h)] for _ in range(p)]
        for a, row in enumerate(witness_rows):
            for m, col in row:
                cells[a][col].add(candidates[m])
        witness = PhpArray(
            base=base,
            pigeons=p,
            holes=h,
            cells=tuple(tuple(frozenset(cell) for cell in row) for row in cells),
        )
        return SearchVerdict(exists=True, witness=witness, certificate=certificate)
    return SearchVerdict(exists=False, witness=None, certificate=certificate)
