"""Exact classification of three-dimensional real Lie bialgebras, their
r-matrices, Poisson-Lie brackets and r-bracket Lax flows."""
from .algebra_core import LieAlgebra, bianchi, jacobi_check
from .bialgebra import Bialgebra, build_double, cocycle_check, dual_from_r
from .catalog import load_catalog
from .dynamics import convergence_ratio, lax_residual, r_bracket
from .poisson import invariant_fields, linearization_check, sklyanin
from .rmatrix import classify, parse_r, schouten, solve_coboundary

__all__ = ["LieAlgebra", "bianchi", "jacobi_check", "Bialgebra", "build_double", "cocycle_check",
           "dual_from_r", "load_catalog", "convergence_ratio", "lax_residual", "r_bracket",
           "invariant_fields", "linearization_check", "sklyanin", "classify", "parse_r", "schouten",
           "solve_coboundary"]
