"""Exact simulation of permutational quantum computation on spin networks."""

from .engine import Permutation, dense_oracle_amplitude, evaluate_amplitude, plan_moves
from .exact import SurdSum, surd_normalize
from .recoupling import recoupling_tensor, sixj, triangle_admissible, twist_phase
from .trees import LabeledTree, TreeShape, enumerate_labelings

__all__ = [
    "LabeledTree",
    "Permutation",
    "SurdSum",
    "TreeShape",
    "dense_oracle_amplitude",
    "enumerate_labelings",
    "evaluate_amplitude",
    "plan_moves",
    "recoupling_tensor",
    "sixj",
    "surd_normalize",
    "triangle_admissible",
    "twist_phase",
]
