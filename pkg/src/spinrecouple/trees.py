"""Binary coupling trees: shapes, labelings, enumeration and rotations.

A shape is a full binary tree written as nested pairs whose leaves are the
particle (tensor-slot) indices ``1..n``; left-to-right leaf order matters.
Internal nodes are identified by their in-order index: node ``k`` is the
one sitting between the ``k``-th and ``(k+1)``-th leaf, so ids run over
``1..n-1`` and do not depend on labels.  A labeling is a tuple indexed by
node id (entry ``k-1`` for node ``k``), the root's entry being the total
spin ``J``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Literal, Mapping, Sequence, Union

from .exact import TwiceSpin, check_twice_spin
from .recoupling import coupled_range, triangle_admissible

Nested = Union[int, tuple]
Direction = Literal["left", "right"]


class TreeError(ValueError):
    """Malformed shape, labeling or tree document."""


def _freeze(obj) -> Nested:
    if isinstance(obj, bool):
        raise TreeError("leaf index must be an integer")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return (_freeze(obj[0]), _freeze(obj[1]))
    raise TreeError(f"tree node must be a leaf index or a pair, got {obj!r}")


@dataclass(frozen=True)
class _Index:
    leaves: tuple[int, ...]
    root: int
    left: dict[int, int]  # child refs: node id if > 0, -particle if < 0
    right: dict[int, int]
    parent: dict[int, int]  # 0 for the root
    span: dict[int, tuple[int, int]]  # 1-based leaf positions covered
    nested: dict[int, Nested]


@dataclass(frozen=True)
class TreeShape:
    nested: Nested

    def __post_init__(self):
        object.__setattr__(self, "nested", _freeze(self.nested))
        leaves = self.leaves
        if sorted(leaves) != list(range(1, len(leaves) + 1)):
            raise TreeError(f"leaf indices must be a permutation of 1..n, got {list(leaves)}")

    @cached_property
    def _ix(self) -> _Index:
        leaves: list[int] = []
        left, right, parent, span, nested = {}, {}, {}, {}, {}

        def walk(node) -> int:
            if isinstance(node, int):
                leaves.append(node)
                return -node
            lo = len(leaves) + 1
            lref = walk(node[0])
            k = len(leaves)
            rref = walk(node[1])
            left[k], right[k] = lref, rref
            span[k] = (lo, len(leaves))
            nested[k] = node
            for ref in (lref, rref):
                if ref > 0:
                    parent[ref] = k
            return k

        root = walk(self.nested)
        if root > 0:
            parent[root] = 0
        return _Index(tuple(leaves), max(root, 0), left, right, parent, span, nested)

    @property
    def leaves(self) -> tuple[int, ...]:
        return self._ix.leaves

    @property
    def n(self) -> int:
        return len(self._ix.leaves)

    @property
    def root(self) -> int:
        """Id of the root node (0 for the single-leaf tree)."""
        return self._ix.root

    def node_ids(self) -> range:
        return range(1, self.n)

    def left(self, k: int) -> int:
        return self._ix.left[k]

    def right(self, k: int) -> int:
        return self._ix.right[k]

    def parent(self, k: int) -> int:
        return self._ix.parent[k]

    def span(self, k: int) -> tuple[int, int]:
        return self._ix.span[k]

    def subtree(self, k: int) -> Nested:
        return self._ix.nested[k]

    def node_path(self, k: int) -> str:
        steps = []
        while self.parent(k):
            p = self.parent(k)
            steps.append("left" if self.left(p) == k else "right")
            k = p
        return ".".join(["root"] + steps[::-1])

    def _replace_subtree(self, k: int, new: Nested) -> "TreeShape":
        path = []
        while self.parent(k):
            p = self.parent(k)
            path.append(0 if self.left(p) == k else 1)
            k = p

        def rebuild(node, steps):
            if not steps:
                return new
            i = steps[-1]
            child = rebuild(node[i], steps[:-1])
            return (child, node[1]) if i == 0 else (node[0], child)

        return TreeShape(rebuild(self.nested, path))

    def rotate(self, k: int, direction: Direction) -> "TreeShape":
        """Re-associate at node ``k``: right is ((A,B),C) -> (A,(B,C)), left the inverse.

        The rotated pair of nodes exchange ids; every other id is unchanged.
        """
        node = self.subtree(k)
        if direction == "right":
            if isinstance(node[0], int):
                raise TreeError(f"cannot rotate right at node {k}: left child is a leaf")
            (a, b), c = node
            return self._replace_subtree(k, (a, (b, c)))
        if direction == "left":
            if isinstance(node[1], int):
                raise TreeError(f"cannot rotate left at node {k}: right child is a leaf")
            a, (b, c) = node
            return self._replace_subtree(k, ((a, b), c))
        raise TreeError(f"unknown rotation direction {direction!r}")

    def swap_children(self, k: int) -> tuple["TreeShape", dict[int, int]]:
        """Exchange the two children of node ``k``; returns the shape and the node-id map."""
        lo, hi = self.span(k)
        node = self.subtree(k)
        shifted = {}
        for m in self.node_ids():
            if lo <= m < k:
                shifted[m] = m + (hi - k)
            elif k < m < hi:
                shifted[m] = m - (k - lo + 1)
            else:
                shifted[m] = m
        shifted[k] = lo + hi - k - 1
        return self._replace_subtree(k, (node[1], node[0])), shifted

    def relabel_leaves(self, mapping: Mapping[int, int]) -> "TreeShape":
        def walk(node):
            if isinstance(node, int):
                return mapping[node]
            return (walk(node[0]), walk(node[1]))

        return TreeShape(walk(self.nested))

    def is_caterpillar(self) -> bool:
        return all(self.right(k) < 0 for k in self.node_ids())

    def to_json(self):
        def walk(node):
            return node if isinstance(node, int) else [walk(node[0]), walk(node[1])]

        return walk(self.nested)

    @classmethod
    def caterpillar(cls, leaves: Sequence[int]) -> "TreeShape":
        """Left comb ``((..((l1, l2), l3)..), ln)``: the first leaf is deepest."""
        node: Nested = leaves[0]
        for leaf in leaves[1:]:
            node = (node, leaf)
        return cls(node)


@dataclass(frozen=True)
class Rotation:
    node: int
    direction: Direction


def apply_rotations(shape: TreeShape, plan: Sequence[Rotation]) -> TreeShape:
    for r in plan:
        shape = shape.rotate(r.node, r.direction)
    return shape


def rotation_plan_to_caterpillar(shape: TreeShape) -> list[Rotation]:
    """Left rotations taking ``shape`` to the left comb on the same leaf order.

    Every rotation moves one internal node onto the left spine, so the plan
    has at most ``n - 2`` steps.
    """
    plan: list[Rotation] = []
    cur = shape
    k = cur.root
    while k > 0:
        r = cur.right(k)
        if r > 0:
            plan.append(Rotation(k, "left"))
            cur = cur.rotate(k, "left")
            k = r  # the former right child now sits on top
        else:
            k = cur.left(k)
    return plan


def invert_rotation_plan(shape: TreeShape, plan: Sequence[Rotation]) -> list[Rotation]:
    """Plan undoing ``plan`` (which must apply to ``shape``)."""
    inverse = []
    cur = shape
    for r in plan:
        child = cur.left(r.node) if r.direction == "right" else cur.right(r.node)
        inverse.append(Rotation(child, "left" if r.direction == "right" else "right"))
        cur = cur.rotate(r.node, r.direction)
    return inverse[::-1]


def rotation_plan(src: TreeShape, dst: TreeShape) -> list[Rotation]:
    """Rotations taking ``src`` to ``dst``; both must have the same leaf order."""
    if src.leaves != dst.leaves:
        raise TreeError("rotations cannot change the leaf order")
    to_comb = rotation_plan_to_caterpillar(src)
    from_comb = invert_rotation_plan(dst, rotation_plan_to_caterpillar(dst))
    return to_comb + from_comb


def count_tree_shapes(n: int) -> int:
    """Number of coupling schemes for ``n`` leaves in a fixed order: the Catalan number C_{n-1}."""
    if n < 1:
        raise ValueError("n must be positive")
    m = n - 1
    return math.factorial(2 * m) // (math.factorial(m + 1) * math.factorial(m))


def enumerate_shapes(leaves: Sequence[int]) -> Iterator[TreeShape]:
    """Every full binary tree with the given left-to-right leaves."""
    for nested in _shapes(tuple(leaves)):
        yield TreeShape(nested)


@lru_cache(maxsize=None)
def _shapes(leaves: tuple[int, ...]) -> tuple[Nested, ...]:
    if len(leaves) == 1:
        return (leaves[0],)
    out = []
    for cut in range(1, len(leaves)):
        for a in _shapes(leaves[:cut]):
            for b in _shapes(leaves[cut:]):
                out.append((a, b))
    return tuple(out)


def default_spins(n: int) -> tuple[int, ...]:
    return (1,) * n


@dataclass(frozen=True)
class LabeledTree:
    """A coupling tree with a twice-spin on every edge.

    ``labels[k-1]`` is the spin on the edge above internal node ``k`` (the
    root edge carries the total spin); ``leaf_spins[i-1]`` is the spin of
    particle ``i``.
    """

    shape: TreeShape
    labels: tuple[int, ...]
    leaf_spins: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = self.shape.n
        if not self.leaf_spins:
            object.__setattr__(self, "leaf_spins", default_spins(n))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "leaf_spins", tuple(self.leaf_spins))
        if len(self.labels) != n - 1:
            raise TreeError(f"expected {n - 1} internal labels, got {len(self.labels)}")
        if len(self.leaf_spins) != n:
            raise TreeError(f"expected {n} leaf spins, got {len(self.leaf_spins)}")
        for x in self.labels + self.leaf_spins:
            check_twice_spin(x)

    @property
    def n(self) -> int:
        return self.shape.n

    @property
    def root_label(self) -> int:
        if self.shape.n == 1:
            return self.leaf_spins[0]
        return self.labels[self.shape.root - 1]

    def spin_of(self, ref: int) -> int:
        return self.labels[ref - 1] if ref > 0 else self.leaf_spins[-ref - 1]

    def violations(self) -> list[str]:
        """Paths of nodes whose (left, right, out) triple is inadmissible."""
        return _violations(self.shape, self.labels, self.leaf_spins)


def _violations(shape: TreeShape, labels: Sequence[int], leaf_spins: Sequence[int]) -> list[str]:
    bad = []
    for k in shape.node_ids():
        l, r = shape.left(k), shape.right(k)
        a = labels[l - 1] if l > 0 else leaf_spins[-l - 1]
        b = labels[r - 1] if r > 0 else leaf_spins[-r - 1]
        if not triangle_admissible(a, b, labels[k - 1]):
            bad.append(shape.node_path(k))
    return bad


def validate_labeling(tree: LabeledTree) -> bool:
    return not tree.violations()


def enumerate_labelings(
    shape: TreeShape, leaf_spins: Sequence[int] | None = None, root_label: TwiceSpin = 0
) -> list[LabeledTree]:
    """All admissible labelings with the given total spin, lexicographic in the label tuple."""
    n = shape.n
    spins = tuple(leaf_spins) if leaf_spins else default_spins(n)
    if n == 1:
        return [LabeledTree(shape, (), spins)] if root_label == spins[0] else []
    reach: dict[int, set[int]] = {}

    def reachable(ref: int) -> set[int]:
        if ref < 0:
            return {spins[-ref - 1]}
        if ref not in reach:
            ls, rs = reachable(shape.left(ref)), reachable(shape.right(ref))
            reach[ref] = {c for a in ls for b in rs for c in coupled_range(a, b)}
        return reach[ref]

    if root_label not in reachable(shape.root):
        return []

    def fill(k: int, value: int) -> Iterator[dict[int, int]]:
        l, r = shape.left(k), shape.right(k)
        for a in sorted(reachable(l)):
            for b in sorted(reachable(r)):
                if not triangle_admissible(a, b, value):
                    continue
                for left_part in (fill(l, a) if l > 0 else [{}]):
                    for right_part in (fill(r, b) if r > 0 else [{}]):
                        yield {k: value, **left_part, **right_part}

    found = sorted(tuple(d[k] for k in shape.node_ids()) for d in fill(shape.root, root_label))
    return [LabeledTree(shape, labels, spins) for labels in found]


def count_labelings(shape: TreeShape, leaf_spins: Sequence[int] | None = None, root_label: TwiceSpin = 0) -> int:
    """Number of admissible labelings, by dynamic programming over subtrees."""
    spins = tuple(leaf_spins) if leaf_spins else default_spins(shape.n)
    if shape.n == 1:
        return int(root_label == spins[0])

    def counts(ref: int) -> dict[int, int]:
        if ref < 0:
            return {spins[-ref - 1]: 1}
        ls, rs = counts(shape.left(ref)), counts(shape.right(ref))
        out: dict[int, int] = {}
        for a, x in ls.items():
            for b, y in rs.items():
                for c in coupled_range(a, b):
                    out[c] = out.get(c, 0) + x * y
        return out

    return counts(shape.root).get(root_label, 0)


# --- JSON document format -------------------------------------------------

_TREE_KEYS = ("leaves", "shape", "leaf_spins", "labels", "root")


def tree_to_json(tree: LabeledTree) -> dict:
    shape = tree.shape
    return {
        "leaves": list(shape.leaves),
        "shape": shape.to_json(),
        "leaf_spins": {str(i + 1): s for i, s in enumerate(tree.leaf_spins)},
        "labels": {str(k): tree.labels[k - 1] for k in shape.node_ids() if k != shape.root},
        "root": tree.root_label,
    }


def _as_twice(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise TreeError(f"{where}: twice-spin must be a non-negative integer, got {value!r}")
    return value


def tree_from_json(doc: Mapping) -> LabeledTree:
    """Parse and validate a tree document; inadmissible nodes are reported by path."""
    if not isinstance(doc, Mapping):
        raise TreeError("tree document must be a JSON object")
    unknown = sorted(set(doc) - set(_TREE_KEYS))
    if unknown:
        raise TreeError(f"unknown fields: {', '.join(unknown)}")
    if "shape" not in doc:
        raise TreeError("missing field: shape")
    nested = _freeze(doc["shape"])
    leaves: list[int] = []

    def collect(node):
        if isinstance(node, int):
            leaves.append(node)
        else:
            collect(node[0])
            collect(node[1])

    collect(nested)
    dupes = sorted({x for x in leaves if leaves.count(x) > 1})
    if dupes:
        raise TreeError(f"duplicate leaf index: {dupes[0]}")
    shape = TreeShape(nested)
    if "leaves" in doc and list(doc["leaves"]) != list(shape.leaves):
        raise TreeError("field 'leaves' disagrees with the leaf order of 'shape'")
    n = shape.n

    spins = list(default_spins(n))
    for key, value in (doc.get("leaf_spins") or {}).items():
        leaf = int(key)
        if not 1 <= leaf <= n:
            raise TreeError(f"leaf_spins: unknown leaf {key}")
        spins[leaf - 1] = _as_twice(value, f"leaf_spins[{key}]")

    if "root" not in doc:
        raise TreeError("missing field: root")
    root = _as_twice(doc["root"], "root")
    if n == 1:
        if root != spins[0]:
            raise TreeError("root: single-leaf tree must carry the leaf's spin")
        return LabeledTree(shape, (), tuple(spins))

    labels = [None] * (n - 1)
    labels[shape.root - 1] = root
    given = doc.get("labels") or {}
    for key, value in given.items():
        k = int(key)
        if k == shape.root:
            if _as_twice(value, f"labels[{key}]") != root:
                raise TreeError(f"labels[{key}] is the root edge and disagrees with 'root'")
            continue
        if not 1 <= k < n:
            raise TreeError(f"labels: unknown edge id {key}")
        labels[k - 1] = _as_twice(value, f"labels[{key}]")
    missing = [str(k) for k in shape.node_ids() if labels[k - 1] is None]
    if missing:
        raise TreeError(f"labels: missing edge ids {', '.join(missing)}")
    tree = LabeledTree(shape, tuple(labels), tuple(spins))
    bad = tree.violations()
    if bad:
        raise TreeError(f"inadmissible coupling at {bad[0]}")
    return tree
