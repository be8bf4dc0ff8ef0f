"""Exact means of spatially dependent Parrondo games on a ring of N players."""

from ._parrondo import (
    ContractViolation,
    SolverFailure,
    UnsupportedBoundary,
    class_count,
    classify_point,
    cli,
    closed_form_n3,
    ergodicity_conditions,
    full_state_mean,
    mean,
    scan,
    simulate,
    slln_check,
    symmetry_map,
)

__all__ = [
    "ContractViolation",
    "SolverFailure",
    "UnsupportedBoundary",
    "class_count",
    "classify_point",
    "cli",
    "closed_form_n3",
    "ergodicity_conditions",
    "full_state_mean",
    "mean",
    "scan",
    "simulate",
    "slln_check",
    "symmetry_map",
]
