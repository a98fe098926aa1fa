import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcing_lab import bruteforce
from forcing_lab.conditions import (
    Condition,
    Universe,
    are_compatible,
    compatible,
    empty_condition,
    extends,
    iter_conditions,
    one_point_extensions,
    restrict,
)
from forcing_lab.errors import CapExceededError, UniverseMismatchError

U8 = Universe(8, 8)


def cond(*seq, universe=U8):
    return Condition(universe, tuple(seq))


class TestConstruction:
    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            cond(1, 1)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            cond(8)
        with pytest.raises(ValueError):
            cond(-1)

    def test_rejects_over_cap(self):
        u = Universe(5, 2)
        with pytest.raises(CapExceededError):
            Condition(u, (0, 1, 2))

    def test_universe_validation(self):
        with pytest.raises(ValueError):
            Universe(0, 1)
        with pytest.raises(ValueError):
            Universe(3, 4)
        with pytest.raises(ValueError):
            Universe(3, 0)

    def test_json_roundtrip(self):
        c = cond(3, 0, 5)
        assert Condition.from_json(U8, c.to_json()) == c
        assert Universe.from_json(U8.to_json()) == U8


class TestExtends:
    def test_subsequence_preserved(self):
        assert extends(cond(3, 0, 1), cond(0, 1))

    def test_reflexive(self):
        o = cond(2, 5, 1)
        assert extends(o, o)

    def test_reversed_pair(self):
        assert not extends(cond(1, 0), cond(0, 1))

    def test_universe_mismatch(self):
        with pytest.raises(UniverseMismatchError):
            extends(cond(0), cond(0, universe=Universe(4, 4)))

    def test_partial_order_exhaustive_small(self):
        # reflexive / antisymmetric / transitive over all conditions of
        # length <= 3 in a universe of size 5
        u = Universe(5, 3)
        conds = list(iter_conditions(u, 3))
        for a in conds:
            assert extends(a, a)
        for a, b in itertools.permutations(conds, 2):
            if extends(a, b) and extends(b, a):
                assert a == b
        for a, b, c in itertools.product(conds, repeat=3):
            if extends(a, b) and extends(b, c):
                assert extends(a, c)


class TestCompatible:
    def test_conflict_pair(self):
        w = compatible(cond(1, 2), cond(2, 3, 1))
        assert not w.ok
        assert w.conflict == (1, 2)

    def test_empty_compatible_with_all(self):
        w = compatible(empty_condition(U8), cond(4, 2))
        assert w.ok
        assert w.merged == cond(4, 2)

    def test_merge_example(self):
        # brute-force interleaving search confirms a common extension exists
        assert bruteforce.merge_exists((0, 2), (0, 1, 2))
        w = compatible(cond(0, 2), cond(0, 1, 2))
        assert w.ok
        assert w.merged == cond(0, 1, 2)

    def test_merged_extends_both_exhaustive(self):
        u = Universe(4, 4)
        conds = list(iter_conditions(u, 3))
        for a, b in itertools.product(conds, repeat=2):
            w = compatible(a, b)
            if w.ok:
                assert extends(w.merged, a)
                assert extends(w.merged, b)

    def test_agrees_with_bruteforce_oracle(self):
        # the agreement criterion is a derived fact; the interleaving
        # search is the ground truth it must match
        u = Universe(6, 6)
        conds = [c for c in iter_conditions(u, 3)]
        for a, b in itertools.product(conds, repeat=2):
            if len(a.elements | b.elements) > 6:
                continue
            assert are_compatible(a, b) == bruteforce.merge_exists(a, b)

    def test_symmetric_outcome(self):
        u = Universe(5, 5)
        conds = list(iter_conditions(u, 3))
        for a, b in itertools.combinations(conds, 2):
            assert are_compatible(a, b) == are_compatible(b, a)

    def test_cap_blocks_witness(self):
        u = Universe(6, 3)
        a = Condition(u, (0, 1, 2))
        b = Condition(u, (4, 5))
        with pytest.raises(CapExceededError):
            compatible(a, b)
        # verdict-only test does not need the room
        assert are_compatible(a, b)


class TestOnePointExtensions:
    def test_three_slots(self):
        got = {c.seq for c in one_point_extensions(cond(5, 7), 2)}
        assert got == {(2, 5, 7), (5, 2, 7), (5, 7, 2)}

    def test_single_slot(self):
        got = one_point_extensions(empty_condition(U8), 0)
        assert [c.seq for c in got] == [(0,)]

    def test_count_is_length_plus_one(self):
        o = cond(1, 2, 3)
        got = one_point_extensions(o, 0)
        assert len(got) == len(o) + 1
        for c in got:
            assert extends(c, o)

    def test_outputs_pairwise_incompatible(self):
        got = one_point_extensions(cond(1, 2, 3), 0)
        for a, b in itertools.combinations(got, 2):
            assert not are_compatible(a, b)

    def test_rejects_present_element(self):
        with pytest.raises(ValueError):
            one_point_extensions(cond(1, 2), 1)

    def test_rejects_cap_overflow(self):
        u = Universe(4, 2)
        with pytest.raises(CapExceededError):
            one_point_extensions(Condition(u, (0, 1)), 2)


class TestRestrict:
    def test_filter_preserving_order(self):
        assert restrict(cond(3, 1, 4), {1, 4}).seq == (1, 4)

    def test_empty_filter(self):
        assert restrict(cond(3, 1, 4), set()).seq == ()

    def test_two_survivors(self):
        assert restrict(cond(0, 2, 5, 1), {5, 0}).seq == (0, 5)


class TestIterConditions:
    def test_counts(self):
        u = Universe(3, 3)
        assert sum(1 for _ in iter_conditions(u, 3)) == 1 + 3 + 6 + 6

    def test_extending_filter(self):
        u = Universe(4, 4)
        base = Condition(u, (1, 0))
        got = list(iter_conditions(u, 3, extending=base))
        assert all(extends(c, base) for c in got)
        # lengths 2 and 3: the base itself plus 2 slots x 2 elements... count by oracle
        want = {
            seq
            for length in (2, 3)
            for seq in itertools.permutations(range(4), length)
            if bruteforce._is_subsequence((1, 0), seq)
        }
        assert {c.seq for c in got} == want


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_merge_witness_property(data):
    u = Universe(7, 7)
    pool = list(range(7))
    sa = data.draw(st.permutations(pool)).copy()
    sb = data.draw(st.permutations(pool)).copy()
    a = Condition(u, tuple(sa[: data.draw(st.integers(0, 4))]))
    b = Condition(u, tuple(sb[: data.draw(st.integers(0, 4))]))
    w_ok = are_compatible(a, b)
    assert w_ok == bruteforce.merge_exists(a, b)
    if w_ok and len(a.elements | b.elements) <= 7:
        merged = compatible(a, b).merged
        assert extends(merged, a) and extends(merged, b)
        assert merged.elements == (a.elements | b.elements)
