"""Finite-scale lab for order-forcing combinatorics.

Conditions over a finite interval, insertion trees and envelopes,
pigeonhole arrays with row uniformization and exact counting bounds,
oracle decision-tree compilation, a round-based game engine with
pluggable players, and brute-force oracles that double-check all of it.
"""

from .conditions import (
    CompatWitness,
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
from .trees import Envelope, MinTree, build_uniform_tree, envelope, tree_size, validate_tree

__all__ = [
    "CompatWitness",
    "Condition",
    "Envelope",
    "MinTree",
    "Universe",
    "are_compatible",
    "build_uniform_tree",
    "compatible",
    "empty_condition",
    "envelope",
    "extends",
    "iter_conditions",
    "one_point_extensions",
    "restrict",
    "tree_size",
    "validate_tree",
]
