"""Fraction-free Gaussian elimination over Q(parameters).

Rows are cleared of denominators, eliminated by cross multiplication and
divided by their content, so entries stay polynomial.  Every non-constant
pivot is recorded: the elimination, and therefore the rank, is only valid
where those polynomials do not vanish.
"""
from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

from .scalars import canon


@dataclass(frozen=True)
class LinearSolution:
    consistent: bool
    particular: tuple = ()
    basis: tuple = ()               # homogeneous solutions
    free_columns: tuple = ()
    exceptional: tuple = ()         # pivot polynomials assumed nonzero
    obstruction: tuple = ()         # nonzero right-hand sides of 0 = rhs rows

    def general(self, names):
        """particular + sum names[k] * basis[k] as a sympy column."""
        out = sp.Matrix(self.particular)
        for c, h in zip(names, self.basis):
            out += c * sp.Matrix(h)
        return out.applyfunc(canon)


def _poly_row(row, removed):
    row = [canon(x) for x in row]
    dens = [sp.fraction(x)[1] for x in row]
    lcm = sp.lcm(dens) if dens else 1
    row = [sp.expand(x * lcm) for x in row]
    return _primitive(row, removed)


def _primitive(row, removed):
    """Divide out the content; a non-constant content is a factor whose zeros
    make the row vacuous, so it goes on the exceptional list."""
    nz = [x for x in row if x != 0]
    if not nz:
        return row
    g = sp.gcd_list(nz) if len(nz) > 1 else nz[0]
    if g != 0 and g != 1:
        row = [sp.cancel(x / g) for x in row]
        if not sp.sympify(g).is_number:
            removed.extend(_factors(g))
    # fix the overall sign so the leading entry has positive leading coefficient
    lead = next(x for x in row if x != 0)
    if sp.Poly(lead, *sorted(lead.free_symbols, key=str) or [sp.Symbol("_")]).LC() < 0:
        row = [-x for x in row]
    return [sp.expand(x) for x in row]


def _factors(p):
    """Irreducible non-constant factors, normalised to positive leading coefficient."""
    out = []
    for fac, _ in sp.factor_list(p)[1]:
        poly = sp.Poly(fac, *sorted(fac.free_symbols, key=str))
        out.append(-fac if poly.LC() < 0 else fac)
    return out


def _cost(p):
    p = sp.expand(p)
    return (0 if p.is_number else 1, sp.Poly(p, *sorted(p.free_symbols, key=str)).total_degree()
            if not p.is_number else 0, len(sp.Add.make_args(p)))


def solve(A, rhs) -> LinearSolution:
    """Solve A x = rhs exactly with A, rhs over Q(params)."""
    A = sp.Matrix(A)
    rhs = sp.Matrix(rhs)
    m, n = A.shape
    exceptional = []
    rows = [_poly_row(list(A.row(i)) + [rhs[i]], exceptional) for i in range(m)]
    pivots = []
    r = 0
    for col in range(n):
        cand = [i for i in range(r, m) if rows[i][col] != 0]
        if not cand:
            continue
        p = min(cand, key=lambda i: _cost(rows[i][col]))
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][col]
        if not piv.is_number:
            exceptional.extend(_factors(piv))
        for i in range(m):
            if i != r and rows[i][col] != 0:
                e = rows[i][col]
                rows[i] = _primitive([sp.expand(piv * x - e * y) for x, y in zip(rows[i], rows[r])],
                                     exceptional)
        pivots.append(col)
        r += 1
        if r == m:
            break
    obstruction = [sp.factor(rows[i][n]) for i in range(r, m) if rows[i][n] != 0]
    if obstruction:
        return LinearSolution(False, exceptional=tuple(dict.fromkeys(exceptional)),
                              obstruction=tuple(obstruction))
    free = [c for c in range(n) if c not in pivots]
    part = [sp.Integer(0)] * n
    for k, col in enumerate(pivots):
        part[col] = canon(rows[k][n] / rows[k][col])
    basis = []
    for fc in free:
        h = [sp.Integer(0)] * n
        h[fc] = sp.Integer(1)
        for k, col in enumerate(pivots):
            h[col] = canon(-rows[k][fc] / rows[k][col])
        basis.append(tuple(h))
    return LinearSolution(True, tuple(part), tuple(basis), tuple(free),
                          tuple(dict.fromkeys(exceptional)))
