import math
import random

import pytest
from hypothesis import given, strategies as st

from spinrecouple.trees import (
    LabeledTree,
    Rotation,
    TreeError,
    TreeShape,
    apply_rotations,
    count_labelings,
    count_tree_shapes,
    enumerate_labelings,
    enumerate_shapes,
    invert_rotation_plan,
    rotation_plan,
    rotation_plan_to_caterpillar,
    tree_from_json,
    tree_to_json,
    validate_labeling,
)


def random_shape(rng: random.Random, leaves):
    leaves = list(leaves)
    if len(leaves) == 1:
        return leaves[0]
    cut = rng.randint(1, len(leaves) - 1)
    return (random_shape(rng, leaves[:cut]), random_shape(rng, leaves[cut:]))


def test_count_examples():
    assert count_tree_shapes(4) == 5
    assert count_tree_shapes(2) == 1
    assert count_tree_shapes(6) == 42
    for n in range(1, 9):
        catalan = math.factorial(2 * (n - 1)) // (math.factorial(n) * math.factorial(n - 1))
        assert count_tree_shapes(n) == catalan


def test_node_ids_are_in_order():
    shape = TreeShape(((1, 2), (3, 4)))
    assert shape.root == 2
    assert shape.span(1) == (1, 2) and shape.span(3) == (3, 4)
    assert shape.parent(1) == 2 and shape.parent(3) == 2


def test_validate_examples():
    comb3 = TreeShape.caterpillar((1, 2, 3))
    assert validate_labeling(LabeledTree(comb3, (0, 1)))
    assert not validate_labeling(LabeledTree(comb3, (0, 3)))
    assert validate_labeling(LabeledTree(TreeShape((1, 2)), (2,)))


def test_enumerate_examples():
    comb3 = TreeShape.caterpillar((1, 2, 3))
    assert [t.labels for t in enumerate_labelings(comb3, None, 1)] == [(0, 1), (2, 1)]
    assert enumerate_labelings(TreeShape((1, 2)), None, 5) == []
    assert len(enumerate_labelings(TreeShape.caterpillar((1, 2, 3, 4)), None, 0)) == 2


def test_labels_bounded_for_spin_half_leaves():
    for shape in enumerate_shapes(range(1, 6)):
        for root in (1, 3, 5):
            for t in enumerate_labelings(shape, None, root):
                assert all(0 <= x <= 5 for x in t.labels)


def test_rotation_plan_examples():
    comb = TreeShape.caterpillar((1, 2, 3))
    assert rotation_plan_to_caterpillar(comb) == []
    right = TreeShape((1, (2, 3)))
    plan = rotation_plan_to_caterpillar(right)
    assert plan == [Rotation(right.root, "left")]
    assert apply_rotations(right, plan) == comb
    rng = random.Random(8)
    for _ in range(20):
        shape = TreeShape(random_shape(rng, range(1, 9)))
        plan = rotation_plan_to_caterpillar(shape)
        assert apply_rotations(shape, plan).is_caterpillar()
        assert len(plan) <= 6


@given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=10**6))
def test_rotation_plans_between_shapes(n, seed):
    rng = random.Random(seed)
    a = TreeShape(random_shape(rng, range(1, n + 1)))
    b = TreeShape(random_shape(rng, range(1, n + 1)))
    assert apply_rotations(a, rotation_plan(a, b)) == b
    plan = rotation_plan_to_caterpillar(a)
    comb = apply_rotations(a, plan)
    assert apply_rotations(comb, invert_rotation_plan(a, plan)) == a


def test_shape_enumeration_distinct():
    for n in range(1, 8):
        shapes = list(enumerate_shapes(range(1, n + 1)))
        assert len(set(shapes)) == len(shapes) == count_tree_shapes(n)


def test_dimension_sum_is_hilbert_dimension():
    # sum over J of (2J+1) * #labelings = 2^n, for every shape
    for n in range(1, 8):
        for shape in enumerate_shapes(range(1, n + 1)):
            total = sum((root + 1) * count_labelings(shape, None, root) for root in range(n % 2, n + 1, 2))
            assert total == 2**n


def test_labeling_count_shape_independent():
    spins = (1, 2, 1, 3, 2)
    for root in range(0, 10):
        counts = {count_labelings(s, spins, root) for s in enumerate_shapes(range(1, 6))}
        assert len(counts) == 1
        assert counts.pop() == len(enumerate_labelings(TreeShape.caterpillar(range(1, 6)), spins, root))


def test_enumeration_is_lexicographic():
    found = [t.labels for t in enumerate_labelings(TreeShape(((1, 2), (3, 4))), (1, 2, 1, 2), 2)]
    assert found == sorted(found)
    assert all(validate_labeling(LabeledTree(TreeShape(((1, 2), (3, 4))), x, (1, 2, 1, 2))) for x in found)


def test_json_round_trip():
    for shape in enumerate_shapes(range(1, 5)):
        for t in enumerate_labelings(shape, (1, 2, 1, 1), 1):
            assert tree_from_json(tree_to_json(t)) == t


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ({"leaves": [1, 2], "shape": [1, 2], "leaf_spins": {"1": 1, "2": 1}, "labels": {}, "root": 5}, "root"),
        ({"leaves": [1, 1], "shape": [1, 1], "leaf_spins": {"1": 1}, "labels": {}, "root": 0}, "duplicate"),
        ({"leaves": [1, 2], "shape": [1, 2], "leaf_spins": {"1": 1, "2": 1}, "labels": {}, "root": 0, "x": 1},
         "unknown"),
    ],
)
def test_json_rejections(doc, fragment):
    with pytest.raises(TreeError, match=fragment):
        tree_from_json(doc)


def test_nested_error_names_path():
    doc = {"leaves": [1, 2, 3], "shape": [[1, 2], 3], "leaf_spins": {"1": 1, "2": 1, "3": 1},
           "labels": {"1": 4}, "root": 1}
    with pytest.raises(TreeError, match="root.left"):
        tree_from_json(doc)
