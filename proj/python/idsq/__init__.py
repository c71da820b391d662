"""Integral distinguisher workbench for SKINNY."""

from ._idsq import (
    ResourceExhausted,
    attack_table,
    backward_extend,
    complexity,
    decrypt,
    encrypt,
    enum_linear,
    enum_nonlinear,
    generate_dataset,
    reachable,
    search,
    search_prob,
    verify,
)

__all__ = [
    "ResourceExhausted",
    "attack_table",
    "backward_extend",
    "complexity",
    "decrypt",
    "encrypt",
    "enum_linear",
    "enum_nonlinear",
    "generate_dataset",
    "reachable",
    "search",
    "search_prob",
    "verify",
]
