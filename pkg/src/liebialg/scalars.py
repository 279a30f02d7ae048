"""Exact scalars: rationals and rational functions of the named parameters.

Everything that decides a classification (ranks, consistency, Jacobi
identities) goes through these helpers, so no floating point ever enters.
"""
from __future__ import annotations

from fractions import Fraction

import sympy as sp

# Bianchi parameter a (VI_a, VII_a) and dual scale b ("|b" entries). alpha is
# the abbreviation (a+1)/(a-1) used in the VI_{1/a} rows of the field tables.
a = sp.Symbol("a", positive=True)
b = sp.Symbol("b", real=True)
alpha = sp.Symbol("alpha", real=True)

PARAMETERS = {"a": a, "b": b, "alpha": alpha}
ALPHA_VALUE = (a + 1) / (a - 1)


def canon(x) -> sp.Expr:
    """Canonical form of a rational function: numerator/denominator, cancelled."""
    x = sp.sympify(x)
    if x.is_Rational or x.is_Symbol:
        return x
    return sp.cancel(sp.together(x))


def is_zero(x) -> bool:
    x = sp.sympify(x)
    if x.is_Number:
        return x == 0
    return canon(x) == 0


def domain_for(exprs):
    """Fraction field Q(symbols) holding all the given expressions, plus converter.

    Arithmetic on domain elements is much faster than on expression trees and
    zero testing is exact, which is what the identity checks need.
    """
    syms = sorted(set().union(*(sp.sympify(e).free_symbols for e in exprs)), key=str)
    K = sp.QQ.frac_field(*syms) if syms else sp.QQ
    return K, lambda e: K.from_sympy(sp.sympify(e))


def to_scalar(value) -> sp.Expr:
    """Parse ``3``, ``"p/q"`` or an expression in the parameters into a Scalar."""
    if isinstance(value, sp.Basic):
        return canon(value)
    if isinstance(value, (int, Fraction)):
        return sp.Rational(value)
    if isinstance(value, float):
        raise TypeError(f"floating point scalar {value!r} rejected; use 'p/q'")
    from .symbolic import parse  # local import: symbolic depends on this module

    return canon(parse(str(value)))


def serialize(x) -> str:
    """``p/q`` for rationals, a plain infix string otherwise."""
    x = canon(x)
    if x.is_Rational:
        return str(x)
    return sp.sstr(x)


def evaluate(x, values: dict | None = None) -> sp.Rational:
    """Substitute rational parameter values and return the exact rational."""
    values = values or {}
    subs = {PARAMETERS.get(str(k), k): sp.Rational(v) for k, v in values.items()}
    out = canon(sp.sympify(x).subs(alpha, ALPHA_VALUE).subs(subs))
    if not out.is_Rational:
        raise ValueError(f"unassigned parameters in {x}: {sorted(map(str, out.free_symbols))}")
    return out


def parameters_of(*things) -> set[sp.Symbol]:
    out = set()
    for t in things:
        out |= set(sp.sympify(t).free_symbols) if not hasattr(t, "free_symbols") else set(t.free_symbols)
    return out
