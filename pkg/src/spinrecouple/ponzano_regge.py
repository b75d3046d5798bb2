"""Ponzano-Regge amplitudes.

Tetrahedron edges are listed in 6j layout ``(j1, j2, j3, j4, j5, j6)`` for the
symbol ``{j1 j2 j3; j4 j5 j6}``: the column pairs ``(j1, j4)``, ``(j2, j5)``,
``(j3, j6)`` are opposite edges, and the four faces are the triads
``(j1, j2, j3)``, ``(j1, j5, j6)``, ``(j4, j2, j6)``, ``(j4, j5, j3)``.

Boundary-to-boundary amplitudes are evaluated only for flip cobordisms:
gluing a tetrahedron on two adjacent boundary triangles flips one edge,
which on the dual coupling tree is a rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import Rotate, Superposition, apply_move
from .exact import ONE, ZERO, SurdSum, sign_power, surd_sum
from .recoupling import coupled_range, recoupling_tensor, sixj, triangle_admissible
from .trees import LabeledTree, TreeShape, enumerate_labelings

TET_FACES = ((0, 1, 2), (0, 4, 5), (3, 1, 5), (3, 4, 2))


class CobordismError(ValueError):
    """Malformed flip sequence or triangulation."""


@dataclass(frozen=True)
class TetLabels:
    a: int
    b: int
    f: int
    c: int
    e: int
    d: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.a, self.b, self.f, self.c, self.e, self.d)


def tet_matrix_element(t: TetLabels) -> SurdSum:
    """Boundary-to-boundary matrix element of one tetrahedron glued on two faces.

    The sign and dimension square roots attached to the shared boundary
    collapse to the recoupling tensor ``[a b f; c e d]``.
    """
    return recoupling_tensor(*t.as_tuple())


def flip_rotation(shape: TreeShape, edge: int) -> Rotate:
    """The dual-tree rotation induced by flipping internal edge ``edge``."""
    if edge not in shape.node_ids() or edge == shape.root:
        raise CobordismError(f"edge {edge} is not an internal edge of the dual tree")
    parent = shape.parent(edge)
    return Rotate(parent, "right" if shape.left(parent) == edge else "left")


def induced_tet_labels(shape: TreeShape, edge: int, before: LabeledTree, new_label: int) -> TetLabels:
    """6j labels of the tetrahedron glued by flipping ``edge`` from ``before``.

    The flipped edge carries its old and new spin in the ``d``/``f`` slots,
    the four surrounding triangle edges fill ``a, b, c, e``.
    """
    rot = flip_rotation(shape, edge)
    k = rot.node
    if rot.direction == "left":
        refs = (shape.left(k), shape.left(edge), shape.right(edge))
        a, b, c = (before.spin_of(x) for x in refs)
        return TetLabels(a, b, new_label, c, before.labels[k - 1], before.labels[edge - 1])
    refs = (shape.left(edge), shape.right(edge), shape.right(k))
    a, b, c = (before.spin_of(x) for x in refs)
    return TetLabels(a, b, before.labels[edge - 1], c, before.labels[k - 1], new_label)


@dataclass(frozen=True)
class FlipCobordism:
    start_tree: LabeledTree
    flips: tuple[int, ...]
    end_tree: LabeledTree

    def __post_init__(self):
        object.__setattr__(self, "flips", tuple(self.flips))


def flip_rotations(shape: TreeShape, flips: Sequence[int]) -> tuple[list[Rotate], TreeShape]:
    moves = []
    for edge in flips:
        rot = flip_rotation(shape, edge)
        moves.append(rot)
        shape = shape.rotate(rot.node, rot.direction)
    return moves, shape


def evolve_flips(start: LabeledTree, flips: Sequence[int]) -> Superposition:
    moves, _ = flip_rotations(start.shape, flips)
    state = Superposition.basis(start)
    for m in moves:
        state = apply_move(state, m)
    return state


def flip_cobordism_amplitude(c: FlipCobordism) -> SurdSum:
    """Exact transition amplitude between the two labeled boundaries."""
    start, end = c.start_tree, c.end_tree
    for tree in (start, end):
        bad = tree.violations()
        if bad:
            raise CobordismError(f"inadmissible boundary labeling at {bad[0]}")
    _, final_shape = flip_rotations(start.shape, c.flips)
    if final_shape != end.shape:
        raise CobordismError("flip sequence does not reach the end triangulation")
    if start.root_label != end.root_label or start.leaf_spins != end.leaf_spins:
        return ZERO
    if not c.flips:
        return ONE if start.labels == end.labels else ZERO
    return evolve_flips(start, c.flips).amplitude(end.labels)


def flip_cobordism_matrix(
    shape: TreeShape, flips: Sequence[int], leaf_spins: Sequence[int] | None, root_label: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]], list[list[SurdSum]]]:
    """All amplitudes of a flip sequence: (end labelings, start labelings, matrix[end][start])."""
    _, end_shape = flip_rotations(shape, flips)
    cols = enumerate_labelings(shape, leaf_spins, root_label)
    rows = [t.labels for t in enumerate_labelings(end_shape, leaf_spins, root_label)]
    matrix = [[ZERO] * len(cols) for _ in rows]
    index = {labels: i for i, labels in enumerate(rows)}
    for j, start in enumerate(cols):
        for labels, amp in evolve_flips(start, flips).amplitudes.items():
            matrix[index[labels]][j] = amp
    return rows, [t.labels for t in cols], matrix


# --- closed manifolds --------------------------------------------------------

@dataclass(frozen=True)
class ClosedTriangulation:
    tets: tuple[tuple[int, ...], ...]
    num_edges: int
    face_gluings: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "tets", tuple(tuple(t) for t in self.tets))
        object.__setattr__(self, "face_gluings", tuple(tuple(g) for g in self.face_gluings))
        self.validate()

    def face_edges(self, tet: int, face: int) -> tuple[int, int, int]:
        return tuple(self.tets[tet][i] for i in TET_FACES[face])

    def validate(self) -> None:
        used = set()
        for i, tet in enumerate(self.tets):
            if len(tet) != 6:
                raise CobordismError(f"tetrahedron {i} must list six edges")
            for e in tet:
                if not 0 <= e < self.num_edges:
                    raise CobordismError(f"tetrahedron {i}: edge id {e} out of range")
            if len(set(tet)) != 6:
                raise CobordismError(f"tetrahedron {i} repeats an edge")
            used.update(tet)
        if used != set(range(self.num_edges)):
            raise CobordismError("some edge ids are not used by any tetrahedron")
        seen = set()
        for g in self.face_gluings:
            if len(g) != 4:
                raise CobordismError(f"gluing {g} must be [tet, face, tet, face]")
            t1, f1, t2, f2 = g
            for t, f in ((t1, f1), (t2, f2)):
                if not (0 <= t < len(self.tets) and 0 <= f < 4):
                    raise CobordismError(f"gluing {g} names a nonexistent face")
                if (t, f) in seen:
                    raise CobordismError(f"face {f} of tetrahedron {t} is glued twice")
                seen.add((t, f))
            if sorted(self.face_edges(t1, f1)) != sorted(self.face_edges(t2, f2)):
                raise CobordismError(f"gluing {g} identifies faces with different edges")
        if len(seen) != 4 * len(self.tets):
            raise CobordismError("triangulation is not closed: some faces are unglued")

    def faces(self) -> list[tuple[int, int, int]]:
        """One edge triple per glued face pair."""
        return [self.face_edges(t, f) for t, f, _, _ in self.face_gluings]


@dataclass(frozen=True)
class TruncatedSum:
    value: SurdSum
    touched_cutoff: bool
    admissible_labelings: int


def closed_amplitude_truncated(m: ClosedTriangulation, cutoff: int) -> TruncatedSum:
    """State sum over labelings with every twice-spin at most ``cutoff``.

    ``touched_cutoff`` is set when an admissible labeling reaches the cutoff,
    i.e. the truncation may have dropped terms.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    edges = m.num_edges
    faces = m.faces()
    # check each face / tet as soon as its last edge is assigned
    face_due: list[list[tuple[int, int, int]]] = [[] for _ in range(edges)]
    for face in faces:
        face_due[max(face)].append(face)
    tet_due: list[list[tuple[int, ...]]] = [[] for _ in range(edges)]
    for tet in m.tets:
        tet_due[max(tet)].append(tet)

    labels = [0] * edges
    terms: list[SurdSum] = []
    touched = False
    count = 0

    def descend(pos: int, weight: SurdSum) -> None:
        nonlocal touched, count
        if pos == edges:
            count += 1
            if cutoff in labels:
                touched = True
            terms.append(weight)
            return
        for x in range(cutoff + 1):
            labels[pos] = x
            w = weight * (sign_power(x) * (x + 1))
            ok = True
            for face in face_due[pos]:
                j1, j2, j3 = (labels[i] for i in face)
                if not triangle_admissible(j1, j2, j3):
                    ok = False
                    break
                w = w * sign_power((j1 + j2 + j3) // 2)
            if not ok:
                continue
            for tet in tet_due[pos]:
                w = w * sixj(*(labels[i] for i in tet))
            descend(pos + 1, w)

    descend(0, ONE)
    return TruncatedSum(surd_sum(t for t in terms if t), touched, count)


def two_tetrahedron_sphere() -> ClosedTriangulation:
    """Two tetrahedra glued face to face along all four faces (a 3-sphere)."""
    tet = (0, 1, 2, 3, 4, 5)
    return ClosedTriangulation((tet, tet), 6, tuple((0, f, 1, f) for f in range(4)))


@dataclass(frozen=True)
class PachnerComparison:
    two_tets: SurdSum
    three_tets: SurdSum
    closed_below_cutoff: bool


def pachner_2_3(a: int, b: int, c: int, d: int, e: int, f: int, g: int, h: int, j: int,
                cutoff: int | None = None) -> PachnerComparison:
    """Both sides of a 2-3 move with boundary spins ``a..j``.

    The three-tetrahedron side sums over the new internal edge ``x``
    (truncated at ``cutoff``); equality of the two sides is the
    Biedenharn-Elliott identity.
    """
    xs = sorted(set(coupled_range(a, b)) & set(coupled_range(c, d)) & set(coupled_range(e, f)))
    closed = cutoff is None or not xs or max(xs) <= cutoff
    base = a + b + c + d + e + f + g + h + j
    terms = []
    for x in xs:
        if cutoff is not None and x > cutoff:
            continue
        prod = sixj(a, b, x, c, d, g) * sixj(c, d, x, e, f, h) * sixj(e, f, x, b, a, j)
        if prod:
            terms.append(prod * (sign_power((base + x) // 2) * (x + 1)))
    return PachnerComparison(sixj(g, h, j, e, a, d) * sixj(g, h, j, f, b, c), surd_sum(terms), closed)


def genus(v: int, e: int, f: int) -> int:
    """Genus of a closed orientable triangulated surface from its counts."""
    chi = v - e + f
    if chi % 2 or chi > 2:
        raise ValueError(f"Euler characteristic {chi} is not that of a closed orientable surface")
    return (2 - chi) // 2
