import itertools
import random
from fractions import Fraction

import pytest

from generators import random_be_tuple
from oracles import closed_sum_direct
from spinrecouple.engine import Permutation, evaluate_amplitude
from spinrecouple.exact import ONE, ZERO, surd_normalize
from spinrecouple.ponzano_regge import (
    ClosedTriangulation,
    CobordismError,
    FlipCobordism,
    TetLabels,
    closed_amplitude_truncated,
    flip_cobordism_amplitude,
    flip_cobordism_matrix,
    flip_rotations,
    genus,
    pachner_2_3,
    tet_matrix_element,
    two_tetrahedron_sphere,
)
from spinrecouple.recoupling import sixj, tetrahedral_images
from spinrecouple.symrep import matmul
from spinrecouple.trees import LabeledTree, TreeShape, enumerate_labelings, enumerate_shapes


def test_tet_examples():
    assert tet_matrix_element(TetLabels(1, 1, 2, 1, 1, 0)) == surd_normalize(Fraction(1, 2), 3)
    assert tet_matrix_element(TetLabels(0, 0, 0, 0, 0, 0)) == ONE
    assert tet_matrix_element(TetLabels(1, 1, 6, 1, 1, 0)) == ZERO


def test_tet_symmetry_through_sixj():
    t = (2, 3, 3, 4, 1, 3)
    assert all(sixj(*img) == sixj(*t) for img in tetrahedral_images(*t))


def test_empty_flip_sequence():
    shape = TreeShape(((1, 2), 3))
    a, b = LabeledTree(shape, (0, 1)), LabeledTree(shape, (2, 1))
    assert flip_cobordism_amplitude(FlipCobordism(a, (), a)) == ONE
    assert flip_cobordism_amplitude(FlipCobordism(a, (), b)) == ZERO


def test_single_flip_three_leaves():
    shape = TreeShape(((1, 2), 3))
    start = LabeledTree(shape, (0, 1))
    end = LabeledTree(TreeShape((1, (2, 3))), (1, 2))
    assert flip_cobordism_amplitude(FlipCobordism(start, (1,), end)) == tet_matrix_element(TetLabels(1, 1, 0, 1, 1, 2))


def test_malformed_cobordisms():
    shape = TreeShape(((1, 2), 3))
    start = LabeledTree(shape, (0, 1))
    with pytest.raises(CobordismError):
        flip_cobordism_amplitude(FlipCobordism(start, (2,), start))  # root edge is not flippable
    with pytest.raises(CobordismError):
        flip_cobordism_amplitude(FlipCobordism(start, (1,), start))  # wrong end shape


def _random_flips(rng, shape, count):
    flips = []
    for _ in range(count):
        edge = rng.choice([k for k in shape.node_ids() if k != shape.root])
        flips.append(edge)
        _, shape = flip_rotations(shape, [edge])
    return flips, shape


@pytest.mark.parametrize("n", [4, 5])
def test_functoriality(n):
    rng = random.Random(n)
    shapes = list(enumerate_shapes(range(1, n + 1)))
    for _ in range(8):
        shape = rng.choice(shapes)
        first, middle = _random_flips(rng, shape, rng.randint(1, 3))
        second, _ = _random_flips(rng, middle, rng.randint(1, 3))
        for root in range(n % 2, n + 1, 2):
            _, _, m1 = flip_cobordism_matrix(shape, first, None, root)
            _, _, m2 = flip_cobordism_matrix(middle, second, None, root)
            _, _, m12 = flip_cobordism_matrix(shape, first + second, None, root)
            assert m12 == matmul(m2, m1)


def test_matches_identity_permutation_amplitude():
    rng = random.Random(5)
    shape = TreeShape.caterpillar(range(1, 6))
    ident = Permutation.identity(5)
    for _ in range(10):
        flips, end_shape = _random_flips(rng, shape, rng.randint(1, 4))
        for start in enumerate_labelings(shape, (1, 2, 1, 1, 2), 3):
            for end in enumerate_labelings(end_shape, (1, 2, 1, 1, 2), 3):
                assert flip_cobordism_amplitude(FlipCobordism(start, flips, end)) == evaluate_amplitude(start, ident, end)


def test_closed_sum_cutoff_zero():
    result = closed_amplitude_truncated(two_tetrahedron_sphere(), 0)
    assert result.value == ONE and result.touched_cutoff


@pytest.mark.parametrize("cutoff", [1, 2, 3])
def test_closed_sum_against_direct(cutoff):
    m = two_tetrahedron_sphere()
    result = closed_amplitude_truncated(m, cutoff)
    oracle = closed_sum_direct(m.tets, m.num_edges, m.faces(), cutoff)
    assert abs(float(result.value) - oracle) <= 1e-12 * max(1.0, abs(oracle))


def test_closed_validation():
    tet = (0, 1, 2, 3, 4, 5)
    with pytest.raises(CobordismError, match="unglued"):
        ClosedTriangulation((tet, tet), 6, [(0, 0, 1, 0)])
    with pytest.raises(CobordismError, match="different edges"):
        ClosedTriangulation((tet, tet), 6, [(0, 0, 1, 1), (0, 1, 1, 0), (0, 2, 1, 2), (0, 3, 1, 3)])
    with pytest.raises(CobordismError, match="out of range"):
        ClosedTriangulation(((0, 1, 2, 3, 4, 9),), 6, [])


def test_pachner_2_3():
    rng = random.Random(23)
    exercised = 0
    for _ in range(300):
        args = random_be_tuple(rng, 6)
        cmp = pachner_2_3(*args, cutoff=6)
        if cmp.closed_below_cutoff:
            assert cmp.two_tets == cmp.three_tets
            exercised += bool(cmp.two_tets)
    assert exercised > 20


def _seven_vertex_torus():
    faces = set()
    for i in range(7):
        faces.add(frozenset({i, (i + 1) % 7, (i + 3) % 7}))
        faces.add(frozenset({i, (i + 2) % 7, (i + 3) % 7}))
    edges = {frozenset(e) for f in faces for e in itertools.combinations(f, 2)}
    return faces, edges


def test_genus_examples():
    assert genus(4, 6, 4) == 0
    assert genus(6, 12, 8) == 0
    faces, edges = _seven_vertex_torus()
    # every edge borders exactly two triangles, so this is a closed surface
    assert all(sum(e <= f for f in faces) == 2 for e in edges)
    assert (7, len(edges), len(faces)) == (7, 21, 14)
    assert genus(7, 21, 14) == 1
    with pytest.raises(ValueError):
        genus(4, 6, 3)
    with pytest.raises(ValueError):
        genus(10, 2, 0)
