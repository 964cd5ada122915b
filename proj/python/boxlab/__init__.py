"""Exact analysis of two-input two-output correlation boxes."""

from fractions import Fraction

from ._boxlab import (
    Box,
    analyze_json,
    canonical,
    canonical_names,
    chsh_values,
    communication_cost,
    fuzz_json,
    isotropic,
    lambda_max,
    nearest_rational,
    quantum_box,
    repro_json,
    run_cli,
    sample,
    signal,
    uncertainty,
    unpredictability,
)

__all__ = [
    "Box",
    "Fraction",
    "analyze_json",
    "canonical",
    "canonical_names",
    "chsh_values",
    "communication_cost",
    "fuzz_json",
    "isotropic",
    "lambda_max",
    "nearest_rational",
    "quantum_box",
    "repro_json",
    "run_cli",
    "sample",
    "signal",
    "uncertainty",
    "unpredictability",
]
