"""Left/right invariant vector fields and Poisson brackets on 3-dim groups.

The group is parameterized as g = exp(x1 X1) exp(x2 X2) exp(x3 X3).  With
E_i(t) = exp(t X_i) (X_i the adjoint matrices), the one-form matrices are

    R: rows  e_1,  E_1(-x1)[1],  (E_2(-x2) E_1(-x1))[2]
    L: rows  (E_2(x2) E_3(x3))[0],  E_3(x3)[1],  e_3

(row j is the dx_j coefficient, column k the X_k component) and the fields are
their inverses.  This sign pairing reproduces the II.i, V and VII_o field rows
verbatim; with it [X_i^L, X_j^L] = f_ij^k X_k^L and [X_i^R, X_j^R] = -f_ij^k X_k^R.
"""
from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass

import sympy as sp

from .algebra_core import IDX, LieAlgebra
from .rmatrix import FAMILY, schouten
from .scalars import PARAMETERS, canon
from .symbolic import COORDS, exp_adjoint, expand_alpha

FLAVORS = ("sklyanin", "left", "right")
PAIRS = ((0, 1), (0, 2), (1, 2))
# sign s in [X_i, X_j] = s f_ij^k X_k for the two frames
STRUCTURE_SIGN = {"left": 1, "right": -1}


class NotCYBE(ValueError):
    """One-sided bracket requested for an r with nonzero Schouten bracket."""


@dataclass(frozen=True)
class VectorFieldFrame:
    algebra: str
    left: sp.Matrix   # row i: components of X_i^L on d/dx1..d/dx3
    right: sp.Matrix
    L: sp.Matrix      # L[i, j]: dx_j coefficient of the one-form L^i
    R: sp.Matrix

    def fields(self, side):
        return self.left if side == "left" else self.right


def _frame_from_tensor(name, f):
    g = LieAlgebra(name, f)
    x1, x2, x3 = COORDS
    E = [exp_adjoint(g.X(i), s) for i, s in zip(IDX, COORDS)]
    e = sp.eye(3)
    Rm = sp.Matrix.vstack(e[0, :], E[0].subs(x1, -x1)[1, :],
                          (E[1].subs(x2, -x2) * E[0].subs(x1, -x1))[2, :])
    Lm = sp.Matrix.vstack((E[1] * E[2])[0, :], E[2][1, :], e[2, :])
    left = Lm.inv(method="ADJ").applyfunc(sp.simplify)
    right = Rm.inv(method="ADJ").applyfunc(sp.simplify)
    return VectorFieldFrame(name, left, right, Lm.T, Rm.T)


_cached_frame = functools.lru_cache(maxsize=None)(_frame_from_tensor)


def invariant_fields(g: LieAlgebra) -> VectorFieldFrame:
    return _cached_frame(g.name, g.f)


def apply_field(row, h):
    """X h for the field with components ``row``."""
    return sum(row[l] * sp.diff(h, COORDS[l]) for l in IDX)


def field_bracket(u, v):
    """Components of the commutator [u, v] of two vector fields."""
    return sp.Matrix([apply_field(u, v[l]) - apply_field(v, u[l]) for l in IDX]).T


def frame_residuals(frame: VectorFieldFrame, g: LieAlgebra):
    """Symbolic residuals of the three frame properties, keyed by property name."""
    out = {"duality_left": frame.left * frame.L.T - sp.eye(3),
           "duality_right": frame.right * frame.R.T - sp.eye(3)}
    out["commute"] = sp.Matrix([[field_bracket(frame.left.row(i), frame.right.row(j))[l]
                                 for l in IDX] for i in IDX for j in IDX])
    for side in ("left", "right"):
        V, s = frame.fields(side), STRUCTURE_SIGN[side]
        rows = []
        for i, j in PAIRS:
            expected = sum((s * g.f[i, j, k] * V.row(k) for k in IDX), sp.zeros(1, 3))
            rows.append(field_bracket(V.row(i), V.row(j)) - expected)
        out[f"structure_{side}"] = sp.Matrix.vstack(*rows)
    return out


@dataclass(frozen=True)
class PoissonStructure:
    P: sp.Matrix        # P[i, j] = {x_i, x_j}
    flavor: str
    algebra: str = ""

    def brackets(self):
        """({x1,x2}, {x1,x3}, {x2,x3})."""
        return [self.P[i, j] for i, j in PAIRS]

    def bracket(self, f1, f2):
        return sum(self.P[i, j] * sp.diff(f1, COORDS[i]) * sp.diff(f2, COORDS[j])
                   for i in IDX for j in IDX)

    def jacobi_expression(self):
        """Cyclic sum {x_i,{x_j,x_k}} + cyclic for (i, j, k) = (1, 2, 3)."""
        P = self.P
        return sum(P[i, l] * sp.diff(P[j, k], COORDS[l])
                   for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) for l in IDX)

    def simplified(self):
        return PoissonStructure(self.P.applyfunc(sp.simplify), self.flavor, self.algebra)


def sklyanin(g: LieAlgebra, r, flavor="sklyanin") -> PoissonStructure:
    """{x_i, x_j} from r and the invariant frames.

    sklyanin: (X^L x_i) r (X^L x_j) - (X^R x_i) r (X^R x_j); left / right keep one
    term and need [[r, r]] = 0."""
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}")
    r = sp.Matrix(r)
    if flavor != "sklyanin":
        T = schouten(g, r)
        nonzero = [(i, j, k) for i in IDX for j in IDX for k in IDX if canon(T[i, j, k]) != 0]
        if nonzero:
            i, j, k = nonzero[0]
            raise NotCYBE(f"[[r,r]] has component {canon(T[i, j, k])} at ({i + 1},{j + 1},{k + 1}); "
                          f"the {flavor} bracket is not Poisson")
    fr = invariant_fields(g)
    PL = fr.left.T * r * fr.left
    PR = fr.right.T * r * fr.right
    P = {"sklyanin": PL - PR, "left": PL, "right": PR}[flavor]
    return PoissonStructure(P.applyfunc(sp.expand), flavor, g.name)


def linearization_check(P: PoissonStructure, dual: LieAlgebra):
    """Exact comparison of d{x_i,x_j}/dx_k at the origin with the dual structure
    constants; returns the list of mismatching (i, j, k, got, expected), 1-based."""
    origin = dict.fromkeys(COORDS, 0)
    bad = []
    for i in IDX:
        for j in IDX:
            for k in IDX:
                got = canon(sp.simplify(sp.diff(P.P[i, j], COORDS[k]).subs(origin)))
                want = canon(dual.f[i, j, k])
                if canon(got - want) != 0:
                    bad.append((i + 1, j + 1, k + 1, got, want))
    return bad


# --- numeric sampling ----------------------------------------------------------

A_VALUES = (sp.Rational(1, 2), sp.Integer(2), sp.Integer(3))
B_VALUES = (sp.Rational(1, 2), sp.Integer(1), sp.Integer(2))
FREE_VALUES = (sp.Rational(-3, 2), sp.Rational(1, 2), sp.Integer(2))
# coordinates stay in [-1, 1]; tan x2 and 1/cos x2 blow up at pi/2, so the box
# keeps a margin of at least 0.2 from the poles
BOX = 1.0
TAN_MARGIN = 0.2
assert BOX <= math.pi / 2 - TAN_MARGIN


def sample_points(n, seed=0, bound=1.0):
    """n points with rational coordinates k/1000 inside [-bound, bound]^3."""
    rng = random.Random(seed)
    m = int(bound * 1000)
    return [tuple(sp.Rational(rng.randint(-m, m), 1000) for _ in IDX) for _ in range(n)]


def sample_parameters(exprs, rng):
    syms = set().union(*(sp.sympify(e).free_symbols for e in exprs))
    values = {}
    if PARAMETERS["a"] in syms or PARAMETERS["alpha"] in syms:
        values[PARAMETERS["a"]] = rng.choice(A_VALUES)
    if PARAMETERS["b"] in syms:
        values[PARAMETERS["b"]] = rng.choice(B_VALUES)
    for s in FAMILY:
        if s in syms:
            values[s] = rng.choice(FREE_VALUES)
    return values


def _compile(exprs):
    syms = list(COORDS) + [PARAMETERS["a"], PARAMETERS["b"], *FAMILY]
    exprs = [expand_alpha(sp.sympify(e)) for e in exprs]
    return sp.lambdify(syms, exprs, "math")


def max_deviation(got, expected, samples=20, seed=0):
    """Max |got - expected| per cell over sampled points and admissible parameters."""
    got, expected = list(got), list(expected)
    fg, fe = _compile(got), _compile(expected)
    rng = random.Random(seed)
    dev = [0.0] * len(got)
    for point in sample_points(samples, seed, BOX):
        p = sample_parameters(got + expected, rng)
        args = [float(x) for x in point] + [float(p.get(s, 0)) for s in
                                            [PARAMETERS["a"], PARAMETERS["b"], *FAMILY]]
        for n, (u, v) in enumerate(zip(fg(*args), fe(*args))):
            dev[n] = max(dev[n], abs(u - v))
    return dev


def max_abs(exprs, samples=20, seed=0):
    """Max |e| over sampled points and admissible parameters (for zero checks)."""
    exprs = list(exprs)
    return max_deviation(exprs, [0] * len(exprs), samples, seed)


def jacobi_deviation(P: PoissonStructure, samples=20, seed=0):
    return max_abs([P.jacobi_expression()], samples, seed)[0]


def compare_table(P: PoissonStructure, expected, samples=20, seed=0, tol=1e-10):
    """Compare the three fundamental brackets with expected expressions.

    Returns {"pass": bool, "deviation": [per-cell max deviation]}."""
    dev = max_deviation(P.brackets(), expected, samples, seed)
    return {"pass": all(d <= tol for d in dev), "deviation": dev}
