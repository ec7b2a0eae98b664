"""Convergent cross mapping over (E, tau, L) grids, backed by the C++ engine."""

from ._pyccm import (
    CcmError,
    coupled_logistic,
    embed,
    pearson,
    run_sweep,
    simplex_weights,
    summarize,
)

__all__ = [
    "CcmError",
    "coupled_logistic",
    "embed",
    "pearson",
    "run_sweep",
    "simplex_weights",
    "summarize",
]
