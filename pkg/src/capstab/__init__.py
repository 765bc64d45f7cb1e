"""Stability and stabilizers for capacitated matching games.

The main entry points are :func:`is_stable`, :func:`capacity_stabilizer`,
:func:`edge_stabilizer_approx` and :func:`min_cycle_optimum`; brute-force
reference implementations live in :mod:`capstab.oracle`.
"""

from .families import generate_family
from .gamma import gamma_exact, min_cycle_optimum, to_unit_capacity, translate_from_unit
from .graph import CapGraph, GraphError, WalkRecord, classify_walk, make_walk
from .instance import (
    emit_certificate, parse_instance, serialize_instance, verify_certificate,
)
from .lp import DualCover, HalfVector, OddCycle, solve_fractional
from .matching import (
    alternate_round, find_feasible_augmenting_walk, find_proper_augmenting_trail,
    max_weight_c_matching,
)
from .stabilize import (
    apply_stabilizer, capacity_stabilizer, edge_stabilizer_approx, is_stable,
    minimalize_stabilizer,
)

__all__ = [
    "CapGraph", "GraphError", "WalkRecord", "classify_walk", "make_walk",
    "DualCover", "HalfVector", "OddCycle", "solve_fractional",
    "alternate_round", "find_feasible_augmenting_walk", "find_proper_augmenting_trail",
    "max_weight_c_matching",
    "gamma_exact", "min_cycle_optimum", "to_unit_capacity", "translate_from_unit",
    "apply_stabilizer", "capacity_stabilizer", "edge_stabilizer_approx", "is_stable",
    "minimalize_stabilizer",
    "emit_certificate", "parse_instance", "serialize_instance", "verify_certificate",
    "generate_family",
]
