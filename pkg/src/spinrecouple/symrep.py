"""Two-row irreducible representations of S_n in Young's orthogonal form.

A standard tableau is stored as its row word ``row_of`` (``row_of[k-1]`` is
the row, 1 or 2, holding ``k``).  Reading the word left to right traces a
ballot path of overhangs ``o_k = #row1 - #row2``; the caterpillar coupling
tree whose ``k``-th cumulative edge carries spin ``o_k / 2`` is the spin
basis state matching the tableau.  Tableaux of a diagram are ordered
lexicographically by row word.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .engine import Permutation, ResourceError, decompose_bubblesort, evaluate_amplitude, evolve
from .exact import ONE, ZERO, SurdSum, sqrt_rational, surd_sum
from .trees import LabeledTree, TreeShape

MAX_DIMENSION = 5000


@dataclass(frozen=True)
class TwoRowDiagram:
    row1: int
    row2: int

    def __post_init__(self):
        if self.row2 < 0 or self.row1 < self.row2:
            raise ValueError(f"not a two-row diagram: [{self.row1},{self.row2}]")

    @classmethod
    def from_spin(cls, n: int, twice_j: int) -> "TwoRowDiagram":
        if (n - twice_j) % 2 or not 0 <= twice_j <= n:
            raise ValueError(f"no two-row diagram with n={n}, 2J={twice_j}")
        return cls((n + twice_j) // 2, (n - twice_j) // 2)

    @property
    def n(self) -> int:
        return self.row1 + self.row2

    @property
    def twice_j(self) -> int:
        return self.row1 - self.row2

    def __str__(self) -> str:
        return f"[{self.row1},{self.row2}]" if self.row2 else f"[{self.row1}]"


@dataclass(frozen=True)
class TwoRowTableau:
    row_of: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "row_of", tuple(self.row_of))
        height = 0
        for r in self.row_of:
            if r not in (1, 2):
                raise ValueError(f"row entries must be 1 or 2, got {r}")
            height += 1 if r == 1 else -1
            if height < 0:
                raise ValueError(f"not a standard tableau: {self.row_of}")

    @property
    def n(self) -> int:
        return len(self.row_of)

    @property
    def diagram(self) -> TwoRowDiagram:
        top = self.row_of.count(1)
        return TwoRowDiagram(top, self.n - top)

    def overhangs(self) -> list[int]:
        """``o_1 .. o_n``; ``o_k`` is the overhang after placing ``k``."""
        path, o = [], 0
        for r in self.row_of:
            o += 1 if r == 1 else -1
            path.append(o)
        return path

    def rows(self) -> tuple[list[int], list[int]]:
        top = [k for k, r in enumerate(self.row_of, 1) if r == 1]
        bottom = [k for k, r in enumerate(self.row_of, 1) if r == 2]
        return top, bottom

    def __str__(self) -> str:
        return ",".join(map(str, self.row_of))


def tableau_to_tree(t: TwoRowTableau) -> LabeledTree:
    """Caterpillar labeling whose cumulative spins are the halved overhangs."""
    path = t.overhangs()
    return LabeledTree(TreeShape.caterpillar(range(1, t.n + 1)), tuple(path[1:]))


def tree_to_tableau(tree: LabeledTree) -> TwoRowTableau:
    """Inverse of :func:`tableau_to_tree` on spin-1/2 left combs in natural leaf order."""
    if tree.shape != TreeShape.caterpillar(range(1, tree.n + 1)) or set(tree.leaf_spins) != {1}:
        raise ValueError("only spin-1/2 left combs in natural order correspond to tableaux")
    path = [1, *tree.labels]
    rows, prev = [], 0
    for o in path:
        if abs(o - prev) != 1:
            raise ValueError("labels do not form an overhang path")
        rows.append(1 if o > prev else 2)
        prev = o
    return TwoRowTableau(tuple(rows))


@lru_cache(maxsize=None)
def _paths_to_end(n: int, target: int, k: int, o: int) -> int:
    # ballot paths from overhang o after k steps to overhang target after n steps
    if o < 0:
        return 0
    if k == n:
        return int(o == target)
    return _paths_to_end(n, target, k + 1, o + 1) + _paths_to_end(n, target, k + 1, o - 1)


def dimension_two_row(d: TwoRowDiagram) -> int:
    """Number of standard tableaux of shape ``d`` (ballot-path count)."""
    if d.n == 0:
        return 1
    return _paths_to_end(d.n, d.twice_j, 0, 0)


def standard_tableaux(d: TwoRowDiagram) -> list[TwoRowTableau]:
    out = []

    def grow(prefix: list[int], top: int, bottom: int):
        if top == d.row1 and bottom == d.row2:
            out.append(TwoRowTableau(tuple(prefix)))
            return
        if top < d.row1:
            grow(prefix + [1], top + 1, bottom)
        if bottom < d.row2 and bottom < top:
            grow(prefix + [2], top, bottom + 1)

    grow([], 0, 0)
    return out


def _guard(d: TwoRowDiagram) -> int:
    dim = dimension_two_row(d)
    if dim > MAX_DIMENSION:
        raise ResourceError(f"dimension {dim} of {d} exceeds the limit {MAX_DIMENSION}")
    return dim


def _check_tableau(d: TwoRowDiagram, t: TwoRowTableau) -> None:
    if t.diagram != d:
        raise ValueError(f"tableau {t} does not have shape {d}")


def yof_matrix_element(d: TwoRowDiagram, p: Permutation, row_t: TwoRowTableau, col_t: TwoRowTableau) -> SurdSum:
    """Entry ``(row_t, col_t)`` of the permutation's matrix, computed exactly."""
    _check_tableau(d, row_t)
    _check_tableau(d, col_t)
    if p.n != d.n:
        raise ValueError(f"permutation degree {p.n} does not match diagram size {d.n}")
    return evaluate_amplitude(tableau_to_tree(col_t), p, tableau_to_tree(row_t))


def _column(args) -> list[SurdSum]:
    d, p, col, tableaux = args
    state = evolve(tableau_to_tree(col), p, TreeShape.caterpillar(range(1, d.n + 1)))
    return [state.amplitude(tableau_to_tree(row).labels) for row in tableaux]


def yof_full_matrix(d: TwoRowDiagram, p: Permutation, workers: int = 1) -> list[list[SurdSum]]:
    """The full orthogonal matrix, rows and columns in tableau order."""
    _guard(d)
    if p.n != d.n:
        raise ValueError(f"permutation degree {p.n} does not match diagram size {d.n}")
    tableaux = standard_tableaux(d)
    if d.n <= 1:
        return [[ONE]]
    jobs = [(d, p, col, tableaux) for col in tableaux]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            columns = list(pool.map(_column, jobs))
    else:
        columns = [_column(job) for job in jobs]
    return [[columns[c][r] for c in range(len(tableaux))] for r in range(len(tableaux))]


def sample_tableau_uniform(d: TwoRowDiagram, rng: random.Random | int | None = None) -> TwoRowTableau:
    """Exactly uniform standard tableau by sequential conditional sampling."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    n, target = d.n, d.twice_j
    if _paths_to_end(n, target, 0, 0) == 0:
        raise ValueError(f"no standard tableaux of shape {d}")
    rows, o = [], 0
    for k in range(n):
        total = _paths_to_end(n, target, k, o)
        up = _paths_to_end(n, target, k + 1, o + 1)
        if rng.randrange(total) < up:
            rows.append(1)
            o += 1
        else:
            rows.append(2)
            o -= 1
    return TwoRowTableau(tuple(rows))


def character_exact(d: TwoRowDiagram, p: Permutation, workers: int = 1) -> SurdSum:
    """Trace of the representation matrix; always a rational integer."""
    _guard(d)
    if d.n <= 1:
        return ONE
    if workers > 1:
        m = yof_full_matrix(d, p, workers)
        return surd_sum(m[i][i] for i in range(len(m)))
    return surd_sum(yof_matrix_element(d, p, t, t) for t in standard_tableaux(d))


def hoeffding_samples(epsilon: float, delta: float) -> int:
    if not (0 < epsilon < 1 and 0 < delta < 1):
        raise ValueError("epsilon and delta must lie in (0, 1)")
    return math.ceil(math.log(2 / delta) / (2 * epsilon**2))


def character_estimate(
    d: TwoRowDiagram, p: Permutation, epsilon: float, delta: float, seed: int | random.Random | None = None
) -> float:
    """Monte Carlo estimate of ``chi(p) / dim``.

    Averages exact diagonal entries at uniformly random tableaux, i.e. the
    mean outcome of a Hadamard test on the maximally mixed spin-J state.
    Each entry lies in [-1, 1], so Hoeffding gives ``|err| <= epsilon`` with
    probability at least ``1 - delta``.
    """
    samples = hoeffding_samples(epsilon, delta)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    diagonal: dict[TwoRowTableau, Fraction] = {}
    total = Fraction(0)
    for _ in range(samples):
        t = sample_tableau_uniform(d, rng)
        if t not in diagonal:
            value = yof_matrix_element(d, p, t, t)
            diagonal[t] = value.rational_part() if value.is_rational() else Fraction(float(value))
        total += diagonal[t]
    return float(total / samples)


# --- independent construction from axial distances -------------------------

def _contents(t: TwoRowTableau) -> list[int]:
    """Content (column - row) of the box holding each of ``1..n``."""
    counts = [0, 0]
    out = []
    for r in t.row_of:
        counts[r - 1] += 1
        out.append(counts[r - 1] - r)
    return out


def yof_generator_axial(d: TwoRowDiagram, k: int) -> list[list[SurdSum]]:
    """Matrix of ``(k, k+1)`` from the axial-distance rule of Young's orthogonal form."""
    tableaux = standard_tableaux(d)
    index = {t: i for i, t in enumerate(tableaux)}
    size = len(tableaux)
    m = [[ZERO] * size for _ in range(size)]
    for t in tableaux:
        i = index[t]
        c = _contents(t)
        r = c[k] - c[k - 1]
        m[i][i] = SurdSum.rational(Fraction(1, r))
        if abs(r) > 1:
            swapped = list(t.row_of)
            swapped[k - 1], swapped[k] = swapped[k], swapped[k - 1]
            j = index[TwoRowTableau(tuple(swapped))]
            m[j][i] = sqrt_rational(1 - Fraction(1, r * r))
    return m


def matmul(a: Sequence[Sequence[SurdSum]], b: Sequence[Sequence[SurdSum]]) -> list[list[SurdSum]]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[surd_sum(a[i][t] * b[t][j] for t in range(inner) if a[i][t] and b[t][j]) for j in range(cols)]
            for i in range(len(a))]


def identity_matrix(size: int) -> list[list[SurdSum]]:
    return [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]


def transpose(a: Sequence[Sequence[SurdSum]]) -> list[list[SurdSum]]:
    return [list(row) for row in zip(*a)]


def yof_matrix_axial(d: TwoRowDiagram, p: Permutation) -> list[list[SurdSum]]:
    """Young's orthogonal form of ``p`` as the product of axial-distance generators."""
    m = identity_matrix(dimension_two_row(d))
    for k in decompose_bubblesort(p):
        m = matmul(m, yof_generator_axial(d, k))
    return m
