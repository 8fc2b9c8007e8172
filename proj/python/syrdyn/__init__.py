"""Exact orbit, preimage and measure analysis of Collatz and Syracuse-type maps.

Integers cross the boundary as Python ints of any size; measure values come
back as fractions.Fraction.
"""

from ._syrdyn import (
    ChainError,
    ForestError,
    Map,
    MapError,
    Measure,
    Partition,
    Trajectory,
    VerificationFailure,
    chain,
    chain_criterion,
    chain_dot,
    check_power_cycle,
    classify,
    collatz,
    decompose,
    family,
    find_cycles,
    general_map,
    iterate,
    measure,
    partition,
    preimage_tree,
    pxr,
    structured_preimage,
    tree_dot,
    two_preimage_class,
    verify_family_connection,
    verify_family_identity,
)

__all__ = [
    "ChainError",
    "ForestError",
    "Map",
    "MapError",
    "Measure",
    "Partition",
    "Trajectory",
    "VerificationFailure",
    "chain",
    "chain_criterion",
    "chain_dot",
    "check_power_cycle",
    "classify",
    "collatz",
    "decompose",
    "family",
    "find_cycles",
    "general_map",
    "iterate",
    "measure",
    "partition",
    "preimage_tree",
    "pxr",
    "structured_preimage",
    "tree_dot",
    "two_preimage_class",
    "verify_family_connection",
    "verify_family_identity",
]

__version__ = "0.1.0"
