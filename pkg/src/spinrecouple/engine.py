"""Exact evaluation of permutational amplitudes <lambda'|U_p|lambda>.

``U_p`` acts on product states as ``U_p |z_1..z_n> = |z_p(1)..z_p(n)>``.
On a coupling-tree state that is a pure relabeling of the leaves (particle
``k`` moves to slot ``p^-1(k)``), so the work is all in *untangling*:
rotating the relabeled tree to the left comb, sorting its leaves with
adjacent exchanges, and rotating into the target shape.  Each step is a
sparse real-orthogonal map on labelings, applied exactly.

Permutation products compose left to right, ``(p * q)(i) = q(p(i))``; with
that convention ``U_{p*q} = U_p U_q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .exact import ONE, ZERO, SurdSum, surd_sum
from .recoupling import coupled_range, recoupling_tensor, triangle_admissible, twist_phase
from .trees import (
    LabeledTree,
    Rotation,
    TreeError,
    TreeShape,
    invert_rotation_plan,
    rotation_plan_to_caterpillar,
)

Rotate = Rotation


class ResourceError(RuntimeError):
    """A request exceeds a configured size guard."""


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..n: {list(images)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def adjacent(cls, n: int, i: int) -> "Permutation":
        """The transposition of ``i`` and ``i + 1``."""
        images = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        images = list(range(1, n + 1))
        for cyc in cycles:
            for x, y in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[x - 1] = y
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return Permutation(tuple(inv))

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise ValueError("permutations of different degree")
        return Permutation(tuple(other(self(i)) for i in range(1, self.n + 1)))

    def inversions(self) -> int:
        im = self.images
        return sum(1 for i in range(len(im)) for j in range(i + 1, len(im)) if im[i] > im[j])


def compose_adjacent(n: int, word: Iterable[int]) -> Permutation:
    """The product ``s_{w1} * s_{w2} * ...`` of adjacent transpositions."""
    p = Permutation.identity(n)
    for i in word:
        p = p * Permutation.adjacent(n, i)
    return p


def decompose_bubblesort(p: Permutation) -> list[int]:
    """Adjacent transpositions ``[i1, ..., im]`` with ``p = s_i1 * ... * s_im``.

    These are exactly the exchanges bubblesort performs on the image array,
    so ``m`` is the inversion number of ``p``.
    """
    arr = list(p.images)
    word = []
    for end in range(len(arr) - 1, 0, -1):
        for i in range(end):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                word.append(i + 1)
    return word


@dataclass(frozen=True)
class SiblingSwap:
    node: int


Move = Union[Rotation, SiblingSwap]


def move_to_json(m: Move) -> dict:
    if isinstance(m, SiblingSwap):
        return {"move": "swap", "node": m.node}
    return {"move": "rotate", "node": m.node, "direction": m.direction}


@dataclass(frozen=True)
class MovePlan:
    """Moves taking the relabeled start tree ``start`` to the target shape ``end``."""

    start: TreeShape
    moves: tuple[Move, ...]
    end: TreeShape

    def __len__(self) -> int:
        return len(self.moves)

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "moves": [move_to_json(m) for m in self.moves],
            "end": self.end.to_json(),
        }


def apply_shape_move(shape: TreeShape, m: Move) -> TreeShape:
    if isinstance(m, SiblingSwap):
        return shape.swap_children(m.node)[0]
    return shape.rotate(m.node, m.direction)


def caterpillar_swap_moves(i: int) -> list[Move]:
    """Exchange the leaves at positions ``i, i+1`` of a left comb, keeping it a left comb."""
    if i == 1:
        return [SiblingSwap(1)]
    return [Rotate(i, "right"), SiblingSwap(i), Rotate(i - 1, "left")]


def twisted_shape(shape: TreeShape, p: Permutation) -> TreeShape:
    inv = p.inverse()
    return shape.relabel_leaves({k: inv(k) for k in shape.leaves})


def compile_plan(start: TreeShape, swaps: Sequence[int], end: TreeShape) -> MovePlan:
    """Rotate ``start`` to the comb, apply the adjacent leaf exchanges, rotate to ``end``."""
    moves: list[Move] = list(rotation_plan_to_caterpillar(start))
    comb = TreeShape.caterpillar(start.leaves)
    for i in swaps:
        moves.extend(caterpillar_swap_moves(i))
        for m in caterpillar_swap_moves(i):
            comb = apply_shape_move(comb, m)
    if comb.leaves != end.leaves:
        raise TreeError("leaf exchanges do not reach the target leaf order")
    moves.extend(invert_rotation_plan(end, rotation_plan_to_caterpillar(end)))
    return MovePlan(start, tuple(moves), end)


def sorting_word(order: Sequence[int], target: Sequence[int]) -> list[int]:
    """Bubblesort exchanges (in application order) taking ``order`` to ``target``."""
    rank = {x: i for i, x in enumerate(target, start=1)}
    return decompose_bubblesort(Permutation(tuple(rank[x] for x in order)))


def plan_moves(start_shape: TreeShape, p: Permutation, end_shape: TreeShape) -> MovePlan:
    if start_shape.n != end_shape.n or p.n != start_shape.n:
        raise TreeError(f"size mismatch: {start_shape.n} leaves, p on {p.n}, target {end_shape.n} leaves")
    start = twisted_shape(start_shape, p)
    return compile_plan(start, sorting_word(start.leaves, end_shape.leaves), end_shape)


@dataclass(frozen=True)
class Superposition:
    """Sparse real amplitudes over labelings of one shape with fixed leaves and root."""

    shape: TreeShape
    leaf_spins: tuple[int, ...]
    amplitudes: dict[tuple[int, ...], SurdSum] = field(default_factory=dict)

    @classmethod
    def basis(cls, tree: LabeledTree) -> "Superposition":
        return cls(tree.shape, tree.leaf_spins, {tree.labels: ONE})

    def amplitude(self, labels: Sequence[int]) -> SurdSum:
        return self.amplitudes.get(tuple(labels), ZERO)

    def norm_squared(self) -> SurdSum:
        return surd_sum(a * a for a in self.amplitudes.values())

    def __len__(self) -> int:
        return len(self.amplitudes)


@lru_cache(maxsize=None)
def _rotation_column(a: int, b: int, c: int, e: int, old: int, direction: str) -> tuple[tuple[int, SurdSum], ...]:
    out = []
    if direction == "left":
        # |a,(b c)old; e>  ->  sum_f [a b f; c e old] |(a b)f, c; e>
        for f in coupled_range(a, b):
            if triangle_admissible(f, c, e):
                coef = recoupling_tensor(a, b, f, c, e, old)
                if coef:
                    out.append((f, coef))
    else:
        # |(a b)old, c; e>  ->  sum_g [a b old; c e g] |a,(b c)g; e>
        for g in coupled_range(b, c):
            if triangle_admissible(a, g, e):
                coef = recoupling_tensor(a, b, old, c, e, g)
                if coef:
                    out.append((g, coef))
    return tuple(out)


def _spin(ref: int, labels: Sequence[int], leaf_spins: Sequence[int]) -> int:
    return labels[ref - 1] if ref > 0 else leaf_spins[-ref - 1]


def apply_move(state: Superposition, m: Move) -> Superposition:
    shape, spins = state.shape, state.leaf_spins
    try:
        new_shape = apply_shape_move(shape, m)
    except (KeyError, TypeError, TreeError) as exc:
        raise TreeError(f"move {m} does not apply to shape {shape.to_json()}") from exc
    acc: dict[tuple[int, ...], SurdSum] = {}

    if isinstance(m, SiblingSwap):
        k = m.node
        _, idmap = shape.swap_children(k)
        l, r = shape.left(k), shape.right(k)
        for labels, amp in state.amplitudes.items():
            phase = twist_phase(_spin(l, labels, spins), _spin(r, labels, spins), labels[k - 1])
            new = [0] * len(labels)
            for x, y in idmap.items():
                new[y - 1] = labels[x - 1]
            acc[tuple(new)] = amp * phase
        return Superposition(new_shape, spins, dict(sorted(acc.items())))

    k = m.node
    if m.direction == "right":
        mid = shape.left(k)
        refs = (shape.left(mid), shape.right(mid), shape.right(k))
    else:
        mid = shape.right(k)
        refs = (shape.left(k), shape.left(mid), shape.right(mid))
    for labels, amp in state.amplitudes.items():
        a, b, c = (_spin(x, labels, spins) for x in refs)
        e, old = labels[k - 1], labels[mid - 1]
        base = list(labels)
        base[mid - 1] = e
        for value, coef in _rotation_column(a, b, c, e, old, m.direction):
            base[k - 1] = value
            key = tuple(base)
            prev = acc.get(key)
            acc[key] = amp * coef if prev is None else prev + amp * coef
    return Superposition(new_shape, spins, {key: v for key, v in sorted(acc.items()) if v})


def run_plan(state: Superposition, plan: MovePlan | Sequence[Move]) -> Superposition:
    moves = plan.moves if isinstance(plan, MovePlan) else plan
    for m in moves:
        state = apply_move(state, m)
    return state


def _check_pair(lam: LabeledTree, p: Permutation, target: TreeShape) -> None:
    bad = lam.violations()
    if bad:
        raise TreeError(f"inadmissible coupling at {bad[0]}")
    if lam.n != p.n or target.n != lam.n:
        raise TreeError("trees and permutation must act on the same number of particles")


def evolve(lam: LabeledTree, p: Permutation, target: TreeShape, plan: MovePlan | None = None) -> Superposition:
    """``U_p |lam>`` expanded in the labelings of ``target``."""
    _check_pair(lam, p, target)
    inv = p.inverse()
    spins = [0] * lam.n
    for k in range(1, lam.n + 1):
        spins[inv(k) - 1] = lam.leaf_spins[k - 1]
    start = Superposition(twisted_shape(lam.shape, p), tuple(spins), {lam.labels: ONE})
    if plan is None:
        plan = plan_moves(lam.shape, p, target)
    final = run_plan(start, plan)
    if final.shape != target:
        raise TreeError("plan does not end in the target shape")
    return final


def evaluate_amplitude(lam: LabeledTree, p: Permutation, lam2: LabeledTree, plan: MovePlan | None = None) -> SurdSum:
    """Exact ``<lam2| U_p |lam>``."""
    bad = lam2.violations()
    if bad:
        raise TreeError(f"inadmissible coupling at {bad[0]}")
    _check_pair(lam, p, lam2.shape)
    if lam.root_label != lam2.root_label:
        return ZERO
    moved = tuple(lam.leaf_spins[p(i) - 1] for i in range(1, lam.n + 1))
    if moved != lam2.leaf_spins:
        return ZERO
    if lam.n == 1:
        return ONE
    return evolve(lam, p, lam2.shape, plan).amplitude(lam2.labels)


# --- dense Clebsch-Gordan oracle -------------------------------------------

DENSE_MAX_N = 14


@lru_cache(maxsize=None)
def _cg(j1: int, m1: int, j2: int, m2: int, j: int, m: int) -> float:
    from sympy import Rational
    from sympy.physics.wigner import clebsch_gordan

    h = lambda x: Rational(x, 2)  # noqa: E731
    return float(clebsch_gordan(h(j1), h(j2), h(j), h(m1), h(m2), h(m)))


def _coupled_states(tree: LabeledTree, ref: int) -> dict[int, np.ndarray]:
    """Vectors ``|j m>`` of a subtree for every twice-m, over its leaves in order."""
    if ref < 0:
        s = tree.leaf_spins[-ref - 1]
        out = {}
        for idx, m in enumerate(range(s, -s - 1, -2)):
            v = np.zeros(s + 1)
            v[idx] = 1.0
            out[m] = v
        return out
    shape = tree.shape
    left = _coupled_states(tree, shape.left(ref))
    right = _coupled_states(tree, shape.right(ref))
    ja = tree.spin_of(shape.left(ref))
    jb = tree.spin_of(shape.right(ref))
    j = tree.labels[ref - 1]
    size = next(iter(left.values())).size * next(iter(right.values())).size
    out = {}
    for m in range(j, -j - 1, -2):
        v = np.zeros(size)
        for ma, va in left.items():
            mb = m - ma
            if mb in right:
                c = _cg(ja, ma, jb, mb, j, m)
                if c:
                    v += c * np.kron(va, right[mb])
        out[m] = v
    return out


def dense_state(tree: LabeledTree) -> np.ndarray:
    """Tree state in the ``m = J`` sector as a tensor with one axis per slot ``1..n``."""
    if tree.n > DENSE_MAX_N:
        raise ResourceError(f"dense oracle limited to n <= {DENSE_MAX_N}")
    shape = tree.shape
    if tree.n == 1:
        vec = _coupled_states(tree, -shape.leaves[0])[tree.root_label]
    else:
        vec = _coupled_states(tree, shape.root)[tree.root_label]
    dims = [tree.leaf_spins[x - 1] + 1 for x in shape.leaves]
    tensor = vec.reshape(dims)
    return np.transpose(tensor, axes=np.argsort(shape.leaves))


def dense_oracle_amplitude(lam: LabeledTree, p: Permutation, lam2: LabeledTree) -> float:
    """``<lam2|U_p|lam>`` from explicit Clebsch-Gordan vectors (independent check)."""
    if max(lam.n, lam2.n) > DENSE_MAX_N:
        raise ResourceError(f"dense oracle limited to n <= {DENSE_MAX_N}")
    if lam.root_label != lam2.root_label:
        return 0.0
    psi = dense_state(lam)
    moved = np.transpose(psi, axes=[p(i) - 1 for i in range(1, p.n + 1)])
    phi = dense_state(lam2)
    if moved.shape != phi.shape:
        return 0.0
    return float(np.vdot(phi, moved))
