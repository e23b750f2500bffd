from ._core import (
    __version__,
    big_green,
    bottcher_value,
    convergence_gap,
    counting_report,
    goldberg_solve,
    green_value,
    holomorphic_index,
    kneading,
    per_roots,
    sample_portrait,
    unicritical_potential,
    validate_portrait,
)

__all__ = [
    "big_green",
    "bottcher_value",
    "convergence_gap",
    "counting_report",
    "goldberg_solve",
    "green_value",
    "holomorphic_index",
    "kneading",
    "per_roots",
    "sample_portrait",
    "unicritical_potential",
    "validate_portrait",
]
