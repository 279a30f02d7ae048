"""Coboundary equation, Schouten bracket and the triangular / quasitriangular /
factorizable classification.

r is a 3x3 matrix with r = r[i, j] X_i (x) X_j.  Wedges carry no 1/2:
X_i ^ X_j = X_i (x) X_j - X_j (x) X_i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import sympy as sp
from sympy.combinatorics import Permutation
from sympy.parsing.sympy_parser import parse_expr, standard_transformations, convert_xor

from . import linsolve
from .algebra_core import IDX, LieAlgebra, entries
from .bialgebra import Bialgebra
from .scalars import PARAMETERS, canon, is_zero

FAMILY = sp.symbols("c d e", real=True)
_W, _T = sp.Function("w"), sp.Function("t")


def wedge(i, j):
    """X_i ^ X_j with 1-based indices."""
    r = sp.zeros(3)
    r[i - 1, j - 1] += 1
    r[j - 1, i - 1] -= 1
    return r


def otimes(i, j):
    r = sp.zeros(3)
    r[i - 1, j - 1] = 1
    return r


def skew(r):
    r = sp.Matrix(r)
    return ((r - r.T) / 2).applyfunc(canon)


def sym(r):
    r = sp.Matrix(r)
    return ((r + r.T) / 2).applyfunc(canon)


def parse_r(text: str) -> sp.Matrix:
    """Parse ``"c*w(1,2) + d*w(3,1) - 1/2*t(2,2)"``: w is a wedge, t a plain tensor product."""
    local = {"w": _W, "t": _T, **PARAMETERS, **{str(s): s for s in FAMILY}}
    e = sp.expand(parse_expr(text, local_dict=local,
                             transformations=standard_transformations + (convert_xor,)))
    r = sp.zeros(3)
    for term in sp.Add.make_args(e):
        if term == 0:
            continue
        atoms = [x for x in term.atoms(sp.Function) if x.func in (_W, _T)]
        if len(atoms) != 1:
            raise ValueError(f"term {term} must contain exactly one w(i,j) or t(i,j)")
        atom = atoms[0]
        coeff = canon(term / atom)
        i, j = (int(x) for x in atom.args)
        r += coeff * (wedge(i, j) if atom.func == _W else otimes(i, j))
    return r.applyfunc(canon)


def format_r(r) -> str:
    """Inverse of parse_r: skew part as wedges, symmetric part as tensor products."""
    r = sp.Matrix(r)
    terms = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        c = canon((r[i, j] - r[j, i]) / 2)
        if c != 0:
            terms.append(f"({sp.sstr(c)})*w({i + 1},{j + 1})")
    s = sym(r)
    for i, j in itertools.product(IDX, IDX):
        if s[i, j] != 0:
            terms.append(f"({sp.sstr(s[i, j])})*t({i + 1},{j + 1})")
    return " + ".join(terms) or "0"


def is_invariant(g: LieAlgebra, t) -> bool:
    t = sp.Matrix(t)
    return all(is_zero(x) for i in IDX for x in (g.X(i).T * t + t * g.X(i)))


def schouten(g: LieAlgebra, r):
    """[[r, r]] = [r12, r13] + [r12, r23] + [r13, r23] as a 3x3x3 array T[a, b, c]."""
    r = sp.Matrix(r)
    f = g.f
    T = sp.MutableDenseNDimArray.zeros(3, 3, 3)
    for x, y, z in itertools.product(IDX, IDX, IDX):
        s = 0
        for i, k in itertools.product(IDX, IDX):
            s += (r[i, y] * r[k, z] * f[i, k, x] + r[x, i] * r[k, z] * f[i, k, y]
                  + r[x, i] * r[y, k] * f[i, k, z])
        T[x, y, z] = canon(s)
    return sp.ImmutableDenseNDimArray(T)


def is_totally_antisymmetric(T):
    for p in itertools.permutations(IDX):
        sign = Permutation(list(p)).signature()
        for x, y, z in itertools.product(IDX, IDX, IDX):
            idx = (x, y, z)
            if not is_zero(T[idx[p[0]], idx[p[1]], idx[p[2]]] - sign * T[x, y, z]):
                return False
    return True


def omega(g, r):
    """Coefficient of X1^X2^X3 in [[r, r]]; only meaningful for skew r."""
    return schouten(g, r)[0, 1, 2]


# --- Eq. Y^i = X_i^T r + r X_i ------------------------------------------------

def coboundary_system(b: Bialgebra):
    """27 x 9 matrix and right-hand side for the unknowns r[0,0], r[0,1], ..., r[2,2]."""
    rows, rhs = [], []
    for i in IDX:
        X = b.g.X(i)
        Yt = b.g_dual.Y(i)
        for p, q in itertools.product(IDX, IDX):
            # (X^T r + r X)[p, q] = sum_l X[l, p] r[l, q] + sum_l r[p, l] X[l, q]
            row = [0] * 9
            for l in IDX:
                row[3 * l + q] += X[l, p]
                row[3 * p + l] += X[l, q]
            rows.append(row)
            rhs.append(Yt[p, q])
    return sp.Matrix(rows), sp.Matrix(rhs)


@dataclass(frozen=True)
class RSolutionSet:
    particular: sp.Matrix
    basis: tuple
    names: tuple
    exceptional: tuple = ()

    def general(self):
        out = sp.Matrix(self.particular)
        for c, h in zip(self.names, self.basis):
            out += c * h
        return out.applyfunc(canon)

    def contains(self, r) -> bool:
        """Is r (possibly with its own free symbols) of the form particular + sum t_k h_k?"""
        diff = sp.Matrix(r) - self.particular
        if not self.basis:
            return all(is_zero(x) for x in diff)
        A = sp.Matrix.hstack(*[h.reshape(9, 1) for h in self.basis])
        return linsolve.solve(A, diff.reshape(9, 1)).consistent


@dataclass(frozen=True)
class Inconsistent:
    obstruction: tuple
    exceptional: tuple

    @property
    def identically(self):
        """True when some obstruction is a nonzero constant: no parameter value helps."""
        return any(sp.sympify(o).is_number for o in self.obstruction)


def _solution_set(A, rhs, prefix):
    sol = linsolve.solve(A, rhs)
    if not sol.consistent:
        return Inconsistent(sol.obstruction, sol.exceptional)
    names = sp.symbols(f"{prefix}1:{len(sol.basis) + 1}", real=True) if sol.basis else ()
    return RSolutionSet(sp.Matrix(3, 3, list(sol.particular)),
                        tuple(sp.Matrix(3, 3, list(h)) for h in sol.basis),
                        tuple(names), sol.exceptional)


def solve_coboundary(b: Bialgebra, skew_only=False):
    """All r with X_i^T r + r X_i = Yt_i; an Inconsistent record when there are none."""
    A, rhs = coboundary_system(b)
    if skew_only:
        extra = []
        for p, q in itertools.combinations_with_replacement(IDX, 2):
            row = [0] * 9
            row[3 * p + q] += 1
            row[3 * q + p] += 1
            extra.append(row)
        A = A.col_join(sp.Matrix(extra))
        rhs = rhs.col_join(sp.zeros(len(extra), 1))
    return _solution_set(A, rhs, "s" if skew_only else "t")


# --- classification -----------------------------------------------------------

@dataclass
class Classification:
    name: str
    verdict: str
    witness: sp.Matrix | None = None
    omega: sp.Expr | None = None
    symmetric_det: sp.Expr | None = None
    family: sp.Matrix | None = None
    notes: list = field(default_factory=list)

    def as_dict(self):
        from .scalars import serialize
        return {
            "entry": self.name,
            "verdict": self.verdict,
            "witness": None if self.witness is None else format_r(self.witness),
            "omega": None if self.omega is None else serialize(self.omega),
            "symmetric_det": None if self.symmetric_det is None else serialize(self.symmetric_det),
            "family": None if self.family is None else format_r(self.family),
            "notes": list(self.notes),
        }


def _sparsest(family, names, condition):
    """Set as many family parameters to zero as the condition allows, in order,
    then the survivors to 1 where possible, so the witness is concrete."""
    fixed = {}
    for value in (0, 1):
        for c in names:
            if c in fixed:
                continue
            trial = {**fixed, c: value}
            if condition(family.subs(trial)):
                fixed = trial
    return family.subs(fixed).applyfunc(canon)


def _nonzero(r):
    return any(not is_zero(x) for x in r)


def _cybe_branches(g, fam, names):
    eqs = [sp.numer(sp.together(x)) for x in entries(schouten(g, fam)) if not is_zero(x)]
    if not eqs:
        return [{}]
    if not names:
        return []
    return sp.solve(eqs, list(names), dict=True)


def classify(b: Bialgebra) -> Classification:
    g = b.g
    full = solve_coboundary(b)
    if isinstance(full, Inconsistent):
        c = Classification(b.name, "non-coboundary")
        c.notes.append("coboundary equation inconsistent: " + ", ".join(map(str, full.obstruction)))
        if not full.identically:
            c.notes.append("inconsistency is parameter dependent")
        return c
    notes = [f"rank drops where {p} = 0" for p in full.exceptional]
    sk = solve_coboundary(b, skew_only=True)
    skew_family = None if isinstance(sk, Inconsistent) else sk.general()

    # (i) nonzero skew solution of the CYBE
    if skew_family is not None:
        w = canon(omega(g, skew_family))
        if w == 0 and _nonzero(skew_family):
            wit = _sparsest(skew_family, sk.names, _nonzero)
            return Classification(b.name, "triangular", wit, sp.Integer(0), family=skew_family, notes=notes)
        if w != 0 and sk.names:
            for branch in sp.solve(w, list(sk.names), dict=True):
                cand = skew_family.subs(branch).applyfunc(canon)
                if _nonzero(cand) and all(sp.sympify(v).is_real is not False for v in branch.values()):
                    wit = _sparsest(cand, [n for n in sk.names if n not in branch], _nonzero)
                    return Classification(b.name, "triangular", wit, sp.Integer(0), family=cand, notes=notes)

    # (iii) general r solving the CYBE; its symmetric part is automatically invariant
    fam = full.general()
    best = None
    for branch in _cybe_branches(g, fam, full.names):
        if any(sp.sympify(v).has(sp.I) for v in branch.values()):
            continue
        cand = fam.subs(branch).applyfunc(canon)
        if not _nonzero(sym(cand)):
            continue
        det = canon(sym(cand).det())
        if det != 0:
            free = [n for n in full.names if n not in branch]
            wit = _sparsest(cand, free, lambda r: canon(sym(r).det()) != 0)
            return Classification(b.name, "factorizable", wit, sp.Integer(0),
                                  canon(sym(wit).det()), family=cand, notes=notes)
        best = best or cand

    # (ii) skew r with nonzero omega (always invariant here since delta is a cocycle)
    if skew_family is not None and _nonzero(skew_family):
        w = canon(omega(g, skew_family))
        wit = _sparsest(skew_family, sk.names, lambda r: canon(omega(g, r)) != 0)
        return Classification(b.name, "quasitriangular", wit, canon(omega(g, wit)), family=skew_family,
                               notes=notes)
    if best is not None:
        wit = _sparsest(best, list(best.free_symbols & set(full.names)), _nonzero)
        return Classification(b.name, "quasitriangular", wit, sp.Integer(0), canon(sym(wit).det()),
                              family=best, notes=notes + ["non-skew CYBE solution, symmetric part singular"])
    if skew_family is not None:
        return Classification(b.name, "triangular", sp.zeros(3), sp.Integer(0),
                              notes=notes + ["only r = 0: trivial cobracket"])
    return Classification(b.name, "quasitriangular", fam, None, family=fam,
                          notes=notes + ["undetermined: no CYBE or skew solution found",
                                         *map(str, entries(schouten(g, fam)))])


def bi_r_matrix(b: Bialgebra):
    """(r, rt): coboundary solutions for b and for its dual, or None."""
    r = solve_coboundary(b)
    rt = solve_coboundary(b.dual())
    if isinstance(r, Inconsistent) or isinstance(rt, Inconsistent):
        return None
    return r, rt
