"""Symbolic expressions over coordinates x1..x3 and parameters a, b, alpha.

Expressions are sympy trees restricted to the grammar used in the field and
bracket tables: rationals, +, *, integer powers, exp and the six circular and
hyperbolic functions.  This module adds a whitelisting parser, numeric
evaluation with range guards, and a closed-form exponential of 3x3 matrices.
"""
from __future__ import annotations

import math

import sympy as sp
from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication,
                                        parse_expr, standard_transformations)

from .scalars import ALPHA_VALUE, PARAMETERS, alpha, canon

x1, x2, x3 = COORDS = sp.symbols("x1 x2 x3", real=True)

FUNCTIONS = {"exp": sp.exp, "sin": sp.sin, "cos": sp.cos, "tan": sp.tan,
             "sinh": sp.sinh, "cosh": sp.cosh, "tanh": sp.tanh}
NAMESPACE = {**FUNCTIONS, **PARAMETERS, "x1": x1, "x2": x2, "x3": x3}
_TRANSFORMS = standard_transformations + (convert_xor, implicit_multiplication)
_ALLOWED = (sp.Add, sp.Mul, sp.Pow, sp.Symbol, sp.Rational, sp.Integer,
            sp.exp, sp.sin, sp.cos, sp.tan, sp.sinh, sp.cosh, sp.tanh)


class UnsupportedSpectrum(ValueError):
    pass


def check_grammar(e, extra=()):
    if not isinstance(e, sp.Expr):
        raise ValueError(f"not a scalar expression: {e}")
    known = set(NAMESPACE.values()) | set(extra)
    for node in sp.preorder_traversal(e):
        if not isinstance(node, _ALLOWED) and not node.is_Rational:
            raise ValueError(f"{type(node).__name__} is outside the expression grammar: {e}")
        if isinstance(node, sp.Pow) and not node.exp.is_Integer and node.base != sp.E:
            raise ValueError(f"non-integer power in {e}")
        if isinstance(node, sp.Symbol) and node not in known:
            raise ValueError(f"unknown symbol {node}")
    return e


def parse(text: str, extra=()) -> sp.Expr:
    """Parse the infix syntax of the fixture files, e.g. ``-b*tanh(x2)*(2*cosh(x1)^2 - 1)``.

    ``extra`` admits further symbols (free constants of r-matrix families)."""
    if not isinstance(text, str):
        return sp.sympify(text)
    local = {**NAMESPACE, **{str(s): s for s in extra}}
    try:
        e = parse_expr(text, local_dict=local, global_dict={"Integer": sp.Integer,
                       "Rational": sp.Rational, "Symbol": sp.Symbol, "Float": _no_float},
                       transformations=_TRANSFORMS, evaluate=True)
    except Exception as exc:  # parse_expr evaluates, so any error type can surface
        raise ValueError(f"cannot parse {text!r}: {exc}") from exc
    return check_grammar(sp.sympify(e), extra)


def _no_float(*args, **kwargs):
    raise ValueError("decimal literals are not allowed; write p/q")


def diff(e, coordinate) -> sp.Expr:
    return sp.diff(e, coordinate)


def expand_alpha(e):
    return sp.sympify(e).subs(alpha, ALPHA_VALUE)


def evaluate(e, point, params=None) -> float:
    """Evaluate in double precision; ``point`` maps coordinate index/name to a rational."""
    subs = {}
    for k, v in (point.items() if isinstance(point, dict) else enumerate(point)):
        subs[COORDS[k] if isinstance(k, int) else NAMESPACE[str(k)]] = v
    for k, v in (params or {}).items():
        subs[PARAMETERS[str(k)]] = v
    e = expand_alpha(e)
    missing = e.free_symbols - set(subs)
    if missing:
        raise ValueError(f"unassigned symbols {sorted(map(str, missing))}")
    val = complex(sp.N(e.subs(subs), 17))
    if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)) or not math.isfinite(val.real):
        raise ArithmeticError(f"{e} is out of range at {subs}")
    return val.real


def compile_matrix(M, params=None):
    """numpy-callable f(x1, x2, x3) for a matrix of expressions, parameters fixed."""
    subs = {PARAMETERS[str(k)]: v for k, v in (params or {}).items()}
    M = sp.Matrix(M).applyfunc(lambda e: expand_alpha(e).subs(subs))
    free = set().union(*(e.free_symbols for e in M)) - set(COORDS)
    if free:
        raise ValueError(f"unassigned symbols {sorted(map(str, free))}")
    return sp.lambdify(COORDS, M.tolist(), "numpy")


def latex(e) -> str:
    return sp.latex(e)


def simplify(e):
    """Light simplification: rational-function normal form plus trig/hyperbolic fusion."""
    e = sp.sympify(e)
    if not e.free_symbols & set(COORDS):
        return canon(e)
    return sp.simplify(e)


# --- closed-form exponential ------------------------------------------------

def _group_roots(charpoly, s):
    roots = sp.roots(sp.Poly(charpoly, s))
    if sum(roots.values()) != 3:
        raise UnsupportedSpectrum(f"cannot split characteristic polynomial {sp.factor(charpoly)}")
    nodes = []
    for r, m in roots.items():
        r = canon(r)
        im = canon(sp.im(r))
        if im.free_symbols or any(isinstance(n, sp.Pow) and not n.exp.is_Integer
                                  for n in sp.preorder_traversal(r)):
            raise UnsupportedSpectrum(f"eigenvalue {r} of {sp.factor(charpoly)} is not rational in the parameters")
        nodes += [r] * m
    # equal nodes adjacent so the divided differences below can spot confluence
    nodes.sort(key=lambda z: sp.default_sort_key(z))
    return nodes


def _divided_difference(nodes, t):
    """Divided difference of z -> exp(t z) on the given (possibly repeated) nodes."""
    if len(nodes) == 1:
        return sp.exp(nodes[0] * t)
    if canon(nodes[0] - nodes[-1]) == 0:
        k = len(nodes) - 1
        return t**k * sp.exp(nodes[0] * t) / sp.factorial(k)
    return (_divided_difference(nodes[1:], t) - _divided_difference(nodes[:-1], t)) / (nodes[-1] - nodes[0])


def _realify(e):
    e = sp.expand(sp.expand_complex(sp.expand(e)))
    e = sp.re(e) if e.has(sp.I) else e
    return sp.simplify(sp.powsimp(e))


def exp_adjoint(M, t) -> sp.Matrix:
    """exp(t M) in closed form by Putzer's algorithm.

    With eigenvalues l1, l2, l3 ordered so repeated values are adjacent,
    exp(tM) = r1 I + r2 (M - l1) + r3 (M - l2)(M - l1) where r_k are divided
    differences of exp(t z).  Complex pairs are folded back into real
    exp * cos/sin form.  Eigenvalues must be rational in the parameters
    (possibly times i); anything else raises UnsupportedSpectrum.
    """
    M = sp.Matrix(M)
    s = sp.Symbol("s")
    if all(canon(x) == 0 for x in M):
        return sp.eye(3)
    nodes = _group_roots(M.charpoly(s).as_expr(), s)
    I3 = sp.eye(3)
    P = [I3, M - nodes[0] * I3, (M - nodes[1] * I3) * (M - nodes[0] * I3)]
    out = sp.zeros(3, 3)
    for k in range(3):
        if all(canon(x) == 0 for x in P[k]):
            continue
        out += _divided_difference(nodes[:k + 1], t) * P[k]
    complex_spectrum = any(sp.im(z) != 0 for z in nodes)
    return out.applyfunc(_realify if complex_spectrum else lambda e: sp.simplify(sp.expand(e)))
