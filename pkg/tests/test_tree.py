import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndtree import NdList, NdTree, RebalancePolicy, point, same_sets, segment
from ndtree.tree import Mode, Node, NodeNotInTree
from walkthrough import (
    EXPECTED_FINAL,
    INSERT_ORDER,
    build,
    feed,
    leaf,
    list_result,
    same_shape,
    shape,
)

ALL_MODES = list(Mode)


def attach(parent, child, left):
    child.parent = parent
    if left:
        parent.left = child
    else:
        parent.right = child


def fix_sizes(node):
    if node is None:
        return 0
    node.size = 1 + fix_sizes(node.left) + fix_sizes(node.right)
    return node.size


def in_order(tree):
    return [tuple(n.elem) for n in tree.nodes()]


# --- basic insertion --------------------------------------------------------


def test_insert_into_empty_tree():
    t = NdTree()
    rep = t.insert(segment(6, 16, 7, 10))
    assert rep.added_any and rep.pieces_added == 1
    assert t.stats() == (1, 1)
    assert t.root.elem == segment(6, 16, 7, 10)


def test_point_clips_root_and_goes_left():
    t = NdTree()
    t.insert(segment(6, 16, 7, 10))
    t.insert(point(5, 11))
    assert tuple(t.root.elem) == pytest.approx((41 / 6, 11, 7, 10), abs=1e-9)
    assert t.root.left.elem == point(5, 11)
    assert t.stats() == (2, 2)
    got = t.nondominated_set()
    assert got[0] == point(5, 11)
    assert tuple(got[1]) == pytest.approx((41 / 6, 11, 7, 10), abs=1e-9)


def test_repeated_point_is_discarded():
    t = NdTree()
    t.insert(point(5, 11))
    rep = t.insert(point(5, 11))
    assert not rep.added_any and rep.pieces_added == 0
    assert len(t) == 1


def test_empty_and_single_stats():
    t = NdTree()
    assert t.stats() == (0, 0)
    assert t.nondominated_set() == []
    t.insert(point(1, 1))
    assert t.stats() == (1, 1)


def test_dominating_insert_evicts_everything():
    t = NdTree()
    for e in [point(1, 9), segment(2, 8, 5, 4), point(6, 3), point(8, 1)]:
        t.insert(e)
    t.insert(point(0, 0))
    assert t.nondominated_set() == [point(0, 0)]
    assert t.validate() == []


def test_split_keeps_left_subtree_and_hands_right_subtree_to_twin():
    t = NdTree()
    t.insert(segment(0, 10, 10, 0))
    t.insert(point(-1, 12))
    t.insert(point(11, -1))
    old_left, old_right = t.root.left, t.root.right
    t.insert(point(4, 4))  # cuts the middle out of the root segment
    root = t.root
    assert root.left is old_left
    assert tuple(root.elem) == pytest.approx((0, 10, 4, 6))
    twin = root.right
    assert tuple(twin.elem) == pytest.approx((6, 4, 10, 0))
    assert twin.right is old_right
    assert twin.left.elem == point(4, 4)
    assert t.validate() == []


# --- the five-set worked example --------------------------------------------


def test_walkthrough_final_set_matches_hand_derivation():
    for mode in ALL_MODES:
        t = feed(NdTree(RebalancePolicy(mode)), INSERT_ORDER)
        assert same_sets(t.nondominated_set(), EXPECTED_FINAL, tol=1e-9), mode
        assert t.validate() == []
    assert same_sets(list_result(), EXPECTED_FINAL, tol=1e-9)


def test_walkthrough_final_set_with_pruning():
    t = feed(NdTree(subtree_prune_enabled=True), INSERT_ORDER)
    assert same_sets(t.nondominated_set(), EXPECTED_FINAL, tol=1e-9)
    assert t.validate() == []


ROOT = segment(41 / 6, 11, 7, 10)
RIGHT_CHAIN = (tuple(segment(7, 10, 10, 5)), None, leaf(segment(10, 5, 11, 4)))


def example_tree():
    # these shapes need delta in [0.5, 2/3): a three-node chain must
    # survive and a four-node subtree with three on one side must not
    return NdTree(RebalancePolicy(Mode.A1, delta=0.5))


def test_walkthrough_shape_after_point():
    t = build(example_tree(), "iv")
    want = (tuple(ROOT), leaf(point(5, 11)), RIGHT_CHAIN)
    assert same_shape(shape(t.root), want)


def test_walkthrough_shape_before_and_after_left_rebalance():
    t = build(example_tree(), "ii")
    unbalanced_left = (
        tuple(point(5, 11)),
        (
            tuple(segment(1, 17, 2, 15)),
            None,
            (tuple(segment(2, 15, 4, 14)), None, leaf(segment(4, 14, 5, 13.8))),
        ),
        None,
    )
    assert same_shape(shape(t.root), (tuple(ROOT), unbalanced_left, RIGHT_CHAIN))
    assert [n.elem for n in t.balance_violations()] == [point(5, 11)]
    t.rebalance_full()
    balanced_left = (
        tuple(segment(4, 14, 5, 13.8)),
        (tuple(segment(1, 17, 2, 15)), None, leaf(segment(2, 15, 4, 14))),
        leaf(point(5, 11)),
    )
    assert same_shape(shape(t.root), (tuple(ROOT), balanced_left, RIGHT_CHAIN))


def test_walkthrough_final_shape():
    t = build(example_tree(), "i")
    t.rebalance_full()
    left = (
        tuple(segment(4, 14, 5, 13.8)),
        (tuple(segment(1, 17, 2, 15)), None, leaf(segment(2, 15, 4, 14))),
        leaf(point(5, 11)),
    )
    right = (
        tuple(segment(28 / 3, 55 / 9, 10, 5)),
        (tuple(segment(7, 10, 8, 25 / 3)), None, leaf(segment(8, 7, 28 / 3, 55 / 9))),
        (
            tuple(segment(10, 5, 11, 4)),
            None,
            (tuple(segment(12.5, 4, 14, 3)), None, leaf(segment(14, 3, 17, 2))),
        ),
    )
    assert same_shape(shape(t.root), (tuple(ROOT), left, right))
    assert t.balance_violations() == []


def test_walkthrough_without_rebalancing_splits_right_child():
    t = build(NdTree(), "v")
    first = t.root.right
    assert tuple(first.elem) == pytest.approx((7, 10, 8, 25 / 3))
    twin = first.right
    assert tuple(twin.elem) == pytest.approx((28 / 3, 55 / 9, 10, 5))
    assert twin.left.elem == pytest.approx(segment(8, 7, 28 / 3, 55 / 9))
    assert tuple(twin.right.elem) == pytest.approx((10, 5, 11, 4))


def test_default_delta_rotates_three_chain_before_next_root_insert():
    t = build(NdTree(RebalancePolicy(Mode.A1)), "iii")
    t.insert(point(5, 11))
    assert tuple(t.root.elem) == pytest.approx((7, 10, 10, 5))
    assert tuple(t.root.left.elem) == pytest.approx(tuple(ROOT))
    assert t.root.left.left.elem == point(5, 11)


# --- removal ----------------------------------------------------------------


def test_remove_only_node():
    t = NdTree()
    t.insert(point(1, 1))
    t.remove_node(t.root)
    assert t.root is None and t.stats() == (0, 0)


def test_remove_root_of_left_chain_takes_left_child():
    t = NdTree()
    for e in [point(5, 5), point(4, 6), point(3, 7)]:
        t.insert(e)
    before = in_order(t)
    t.remove_node(t.root)
    assert t.root.elem == point(4, 6)
    assert t.root.left.elem == point(3, 7)
    assert in_order(t) == [x for x in before if x != tuple(point(5, 5))]
    assert t.validate() == []


def test_remove_root_with_equal_sides_takes_leftmost_of_right():
    t = NdTree()
    for e in [point(5, 5), point(4, 6), point(6, 4)]:
        t.insert(e)
    t.remove_node(t.root)
    assert t.root.elem == point(6, 4)
    assert t.root.left.elem == point(4, 6)
    assert t.stats() == (2, 2)


def test_remove_foreign_node_raises():
    t = NdTree()
    t.insert(point(1, 1))
    with pytest.raises(NodeNotInTree):
        t.remove_node(Node(point(2, 0)))


# --- rebalancing ------------------------------------------------------------


def test_right_chain_rotates():
    t = NdTree()
    a, b, c = point(1, 3), point(2, 2), point(3, 1)
    for e in (a, b, c):
        t.insert(e)
    assert t.depth() == 3
    t.rebalance_full()
    assert t.root.elem == b and t.root.left.elem == a and t.root.right.elem == c
    assert t.depth() == 2


def test_balanced_tree_is_unchanged():
    t = NdTree()
    for e in (point(2, 2), point(1, 3), point(3, 1)):
        t.insert(e)
    before = shape(t.root)
    t.rebalance_full()
    assert shape(t.root) == before


@pytest.mark.parametrize("delta", [0.1, 0.3, 0.6, 0.9])
def test_rebalance_on_long_chain(delta):
    t = NdTree(RebalancePolicy(Mode.A0, delta))
    for i in range(200):
        t.insert(point(i, 200 - i))
    order = in_order(t)
    t.rebalance_full()
    assert in_order(t) == order
    assert t.balance_violations() == []
    assert t.depth() <= math.log(len(t), 2 - delta) + 2
    assert t.validate() == []


# --- validate ---------------------------------------------------------------


def test_validate_flags_size_mismatch():
    t = NdTree()
    for e in (point(2, 2), point(1, 3), point(3, 1)):
        t.insert(e)
    assert t.validate() == []
    t.root.left.size = 5
    kinds = [v.kind for v in t.validate()]
    assert "SizeMismatch" in kinds


def test_validate_flags_dominated_pair():
    t = NdTree()
    root = Node(point(1, 1))
    attach(root, Node(point(2, 2)), left=False)
    t.root = root
    fix_sizes(root)
    # (2, 2) also sits on the wrong side of its ancestor
    assert "DominatedPair" in [v.kind for v in t.validate()]


def test_validate_flags_wrong_side():
    t = NdTree()
    root = Node(point(2, 2))
    attach(root, Node(point(3, 1)), left=True)
    t.root = root
    fix_sizes(root)
    assert [v.kind for v in t.validate()] == ["Property1"]


# --- policies ---------------------------------------------------------------


def test_policy_growth_defaults():
    assert RebalancePolicy(Mode.A2).growth_ratio == pytest.approx(1.01)
    assert RebalancePolicy(Mode.A4).growth_ratio == pytest.approx(8.0)
    with pytest.raises(ValueError):
        RebalancePolicy(Mode.A1, delta=1.0)


def test_a1_keeps_criterion_after_every_insert():
    rng = random.Random(3)
    t = NdTree(RebalancePolicy(Mode.A1))
    for _ in range(400):
        x = rng.uniform(0, 10)
        t.insert(point(x, (10.5 - x) ** 2 / 5 + rng.uniform(0, 0.2)))
        # the rebalance runs before the insert, so check the state it left
        t.rebalance_full()
        assert t.balance_violations() == []


def test_periodic_policy_triggers_and_tracks_count():
    t = NdTree(RebalancePolicy(Mode.A2))
    for i in range(150):
        t.insert(point(i, 1000 - i))
    assert t.last_periodic_count is not None and t.last_periodic_count >= 100
    assert t.depth() < 60


# --- randomized agreement with the list -------------------------------------

coord = st.integers(0, 12).map(float)


@st.composite
def elements(draw):
    x1, y2 = draw(coord), draw(coord)
    if draw(st.booleans()):
        return point(x1, y2)
    dx = draw(st.integers(1, 6))
    dy = draw(st.integers(1, 6))
    return segment(x1, y2 + dy, x1 + dx, y2)


@settings(max_examples=300, deadline=None)
@given(
    st.lists(elements(), max_size=40),
    st.sampled_from(ALL_MODES),
    st.booleans(),
    st.sampled_from([0.2, 0.3, 0.5]),
)
def test_tree_matches_list(seq, mode, prune, delta):
    t = NdTree(RebalancePolicy(mode, delta, initial_trigger=4), subtree_prune_enabled=prune)
    t.removal_stats.check_depth = True
    lst = NdList()
    for e in seq:
        t.insert(e)
        lst.insert(e)
        assert t.validate() == []
    assert same_sets(t.nondominated_set(), lst.nondominated_set())
    assert t.removal_stats.over_depth == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(elements(), max_size=30), st.randoms(use_true_random=False))
def test_stored_set_ignores_insertion_order(seq, rnd):
    a = NdTree()
    for e in seq:
        a.insert(e)
    shuffled = list(seq)
    rnd.shuffle(shuffled)
    b = NdTree()
    for e in shuffled:
        b.insert(e)
    assert same_sets(a.nondominated_set(), b.nondominated_set())


@settings(max_examples=100, deadline=None)
@given(st.lists(elements(), max_size=40), st.sampled_from([0.1, 0.3, 0.7]))
def test_explicit_rebalance_gives_log_depth(seq, delta):
    t = NdTree(RebalancePolicy(Mode.A0, delta))
    for e in seq:
        t.insert(e)
    order = in_order(t)
    t.rebalance_full()
    assert in_order(t) == order
    assert t.balance_violations() == []
    if len(t) > 0:
        assert t.depth() <= math.log(len(t), 2 - delta) + 2
    assert t.validate() == []
