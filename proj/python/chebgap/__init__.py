"""Chebyshev polynomials and Widom minimizers on finite unions of intervals."""

from ._core import (
    CapabilityError,
    ChebgapError,
    ChebyshevSolution,
    Equilibrium,
    InvariantError,
    NumericalError,
    RealFiniteGapSet,
    ValidationError,
    WidomSolution,
    character_match,
    chebyshev,
    comb,
    diagnostics,
    h_n_check,
    make_set,
    run,
    solve_equilibrium,
    widom,
    widom_minimizer_n,
)

__all__ = [name for name in dir() if not name.startswith("_")]
