"""Eigenvalues in spectral gaps of self-adjoint operators via the
Schur-complement min-max principle, specialized to radial Dirac-Coulomb
channels in a B-spline basis."""

from ._core import (
    BracketError,
    HypothesisError,
    analytic_energy,
    check_hypotheses,
    dense_oracle,
    gap_constant,
    load_split_operator,
    oracle_fuzz,
    save_split_operator,
    solve_channel,
    solve_level,
)

__all__ = [
    "BracketError",
    "HypothesisError",
    "analytic_energy",
    "check_hypotheses",
    "dense_oracle",
    "gap_constant",
    "load_split_operator",
    "oracle_fuzz",
    "save_split_operator",
    "solve_channel",
    "solve_level",
]
