import itertools

import pytest

from forcing_lab import bruteforce
from forcing_lab.conditions import (
    Condition,
    Universe,
    are_compatible,
    empty_condition,
    extends,
    iter_conditions,
)
from forcing_lab.errors import CapExceededError, IncompatibleError
from forcing_lab.trees import (
    MinTree,
    build_uniform_tree,
    envelope,
    tree_size,
    validate_tree,
)

U6 = Universe(6, 6)


def cond(*seq, universe=U6):
    return Condition(universe, tuple(seq))


class TestTreeSize:
    def test_paper_instance(self):
        assert tree_size(0, 3) == 6
        assert tree_size(1, 2) == 6

    def test_zero_depth(self):
        for m in range(5):
            assert tree_size(m, 0) == 1

    def test_direct_product(self):
        assert tree_size(2, 3) == 3 * 4 * 5


class TestBuildUniformTree:
    def test_six_leaves(self):
        t = build_uniform_tree(cond(5), [0, 1])
        assert t.size == 6
        assert t.depth == 2

    def test_trivial(self):
        t = build_uniform_tree(empty_condition(U6), [])
        assert t.leaves == frozenset({empty_condition(U6)})

    def test_all_permutations(self):
        t = build_uniform_tree(empty_condition(U6), [0, 1, 2])
        assert {leaf.seq for leaf in t.leaves} == set(itertools.permutations((0, 1, 2)))

    def test_leaf_count_matches_formula(self):
        for base_len in range(4):
            for d in range(4):
                u = Universe(8, 8)
                o = Condition(u, tuple(range(base_len)))
                elems = list(range(base_len, base_len + d))
                t = build_uniform_tree(o, elems)
                assert t.size == tree_size(base_len, d)

    def test_leaves_extend_root_pairwise_incompatible(self):
        o = cond(2, 0)
        t = build_uniform_tree(o, [1, 3])
        for leaf in t.leaves:
            assert extends(leaf, o)
        for a, b in itertools.combinations(t.leaves, 2):
            assert not are_compatible(a, b)

    def test_rejects_stale_element(self):
        with pytest.raises(ValueError):
            build_uniform_tree(cond(1), [1])

    def test_rejects_cap_overflow(self):
        u = Universe(6, 2)
        with pytest.raises(CapExceededError):
            build_uniform_tree(Condition(u, (0,)), [1, 2])

    def test_json_roundtrip(self):
        t = build_uniform_tree(cond(3), [0, 1])
        assert MinTree.from_json(U6, t.to_json()) == t


class TestEnvelope:
    def test_insert_one_missing(self):
        e = envelope(cond(0, 1), cond(0, 2))
        assert {leaf.seq for leaf in e.tree.leaves} == {
            (2, 0, 1),
            (0, 2, 1),
            (0, 1, 2),
        }

    def test_already_extends(self):
        q = cond(2, 0, 1)
        e = envelope(q, cond(0, 1))
        assert e.tree.leaves == frozenset({q})
        assert e.tree.depth == 0

    def test_two_missing(self):
        e = envelope(cond(0), cond(1, 2))
        assert e.tree.size == 6
        assert all(len(leaf) == 3 for leaf in e.tree.leaves)

    def test_rejects_incompatible(self):
        with pytest.raises(IncompatibleError):
            envelope(cond(0, 1), cond(1, 0))

    def test_leaves_are_all_extensions_to_union(self):
        q, s = cond(1, 0), cond(1, 3)
        e = envelope(q, s)
        union = q.elements | s.elements
        want = {
            c.seq
            for c in iter_conditions(U6, len(union))
            if c.elements == union and extends(c, q)
        }
        assert {leaf.seq for leaf in e.tree.leaves} == want


class TestValidateTree:
    def test_built_tree_passes_with_equality(self):
        t = build_uniform_tree(cond(5), [0, 1])
        report = validate_tree(t, sample_cap=3)
        assert report.ok
        assert report.attains_bound
        assert report.uniform
        assert report.size_bound == tree_size(1, 2)

    def test_singleton_strict_bound(self):
        t = MinTree(
            root=empty_condition(U6), depth=2, leaves=frozenset({cond(0, 1)})
        )
        report = validate_tree(t, sample_cap=2)
        assert report.size_ok
        assert not report.attains_bound
        assert not report.uniform

    def test_compatible_leaves_fail(self):
        t = MinTree(
            root=cond(0), depth=2, leaves=frozenset({cond(0, 1), cond(0, 2)})
        )
        assert bruteforce.merge_exists((0, 1), (0, 2))
        report = validate_tree(t, sample_cap=2)
        assert not report.pairwise_incompatible
        assert report.incompat_counterexample is not None

    def test_covering_failure_detected(self):
        # drop one leaf from a genuine tree: the lost branch shows up as a
        # condition no remaining leaf can live with
        t = build_uniform_tree(empty_condition(U6), [0, 1])
        leaves = t.sorted_leaves()
        broken = MinTree(root=t.root, depth=t.depth, leaves=frozenset(leaves[1:]))
        report = validate_tree(broken, sample_cap=2)
        assert not report.covering
        assert report.covering_counterexample is not None


class TestEnvelopeGrowthLemma:
    def test_exhaustive_small(self):
        # for q || s and any s' incompatible with s but compatible with q,
        # every envelope leaf r compatible with s' picks up at least one
        # new element of s'
        u = Universe(4, 4)
        conds = list(iter_conditions(u, 3))
        for q, s in itertools.product(conds, repeat=2):
            if not are_compatible(q, s):
                continue
            if len(q.elements | s.elements) > u.length_cap:
                continue
            leaves = envelope(q, s).tree.leaves
            for leaf in leaves:
                assert leaf.elements == q.elements | s.elements
            for sp in conds:
                if are_compatible(sp, s) or not are_compatible(sp, q):
                    continue
                for r in leaves:
                    if are_compatible(r, sp):
                        assert len(r.elements & sp.elements) >= (
                            len(q.elements & sp.elements) + 1
                        )
