"""Automorphism templates, bialgebra isomorphism and isomorphism of coboundary
bialgebras.

Matrices act in the row convention X'_j = O[j, i] X_i.  With the adjoint
matrices X_i and cobracket matrices Y^i of algebra_core the two forms of
the automorphism condition are

    sum_i O[j, i] O X_i = X_j O        and        sum_j Y^j O[j, i] = O Y^i O^T.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import sympy as sp

from .algebra_core import IDX, LieAlgebra, canonical_type
from .catalog import load_yaml
from .scalars import canon, is_zero

SAMPLE_RANGE = [x for x in range(-3, 4)]


@dataclass(frozen=True)
class MatrixTemplate:
    algebra: str
    matrix: sp.Matrix
    params: tuple
    variant: str = "printed"
    implicit: str | None = None
    note: str = ""

    def at(self, values):
        return self.matrix.subs(dict(zip(self.params, values)))

    def det(self):
        return canon(self.matrix.det())


@dataclass
class IsoVerdict:
    verdict: str  # isomorphic | not-isomorphic | undetermined
    criterion: str  # dual-bracket | coboundary-symmetry
    witness: object = None
    obstruction: str = ""
    details: dict = field(default_factory=dict)

    def as_dict(self):
        w = self.witness
        if isinstance(w, sp.MatrixBase):
            w = [[str(x) for x in row] for row in w.tolist()]
        elif isinstance(w, dict):
            w = {str(k): str(v) for k, v in w.items()}
        return {"verdict": self.verdict, "criterion": self.criterion, "witness": w,
                "obstruction": self.obstruction,
                "details": {k: str(v) for k, v in self.details.items()}}


# --- the two automorphism conditions -------------------------------------------

def bracket_residuals(g: LieAlgebra, O):
    O = sp.Matrix(O)
    Xs = [g.X(i) for i in IDX]
    return [(sum((O[j, i] * O * Xs[i] for i in IDX), sp.zeros(3)) - Xs[j] * O).applyfunc(canon)
            for j in IDX]


def cobracket_residuals(g: LieAlgebra, O):
    O = sp.Matrix(O)
    Ys = [g.Y(i) for i in IDX]
    return [(sum((Ys[j] * O[j, i] for j in IDX), sp.zeros(3)) - O * Ys[i] * O.T).applyfunc(canon)
            for i in IDX]


def _all_zero(mats):
    return all(is_zero(x) for M in mats for x in M)


def is_automorphism(g: LieAlgebra, O) -> bool:
    O = sp.Matrix(O)
    if is_zero(O.det()):
        raise ValueError("singular matrix is not an automorphism candidate")
    by_bracket = _all_zero(bracket_residuals(g, O))
    by_cobracket = _all_zero(cobracket_residuals(g, O))
    if by_bracket != by_cobracket:
        raise AssertionError(f"automorphism conditions disagree for {g.name}: {by_bracket} vs {by_cobracket}")
    return by_bracket


# --- templates ---------------------------------------------------------------------

def cayley(kind, p, q, s):
    """Cayley image (I - K)^-1 (I + K) of a Lie-algebra element of SO(3) or SO(2,1)."""
    S = sp.Matrix([[0, -s, q], [s, 0, -p], [-q, p, 0]])
    if kind == "SO(3)":
        K = S
    elif kind == "SL(2,R)":
        # the adjoint image of SL(2,R) preserves the Killing form diag(1, 1, -1) (up to 2)
        K = S * sp.diag(1, 1, -1)
    else:
        raise ValueError(kind)
    I3 = sp.eye(3)
    return ((I3 - K).inv() * (I3 + K)).applyfunc(canon)


def load_templates():
    raw = load_yaml("templates.yaml")
    out = {}
    for name, rec in raw.items():
        params = tuple(sp.Symbol(p, real=True) for p in rec["params"])
        env = {str(p): p for p in params}
        kinds = []
        if "implicit" in rec:
            M = cayley(rec["implicit"], *params)
            kinds.append(MatrixTemplate(name, M, params, "cayley", rec["implicit"]))
        for variant in ("printed", "corrected"):
            if variant in rec:
                M = sp.Matrix([[sp.sympify(x, locals=env) for x in row] for row in rec[variant]])
                kinds.append(MatrixTemplate(name, M, params, variant, note=rec.get("note", "")))
        out[name] = kinds
    return out


def template_for(algebra: str, variant=None):
    ts = load_templates()[canonical_type(algebra)]
    if variant is None:
        return ts[0]
    return next(t for t in ts if t.variant == variant)


def sample_template(T: MatrixTemplate, rng: random.Random):
    """An admissible exact element; parameters drawn from {-3..3}."""
    for _ in range(1000):
        vals = [sp.Integer(rng.choice(SAMPLE_RANGE)) for _ in T.params]
        try:
            M = T.at(vals)
        except (ZeroDivisionError, ValueError):
            continue
        if any(x.has(sp.zoo, sp.nan) for x in M) or is_zero(M.det()):
            continue
        return M, vals
    raise RuntimeError(f"no admissible sample for {T.algebra}")


@dataclass
class TemplateReport:
    algebra: str
    variant: str
    identically: bool
    samples: int
    failures: list
    closure_failures: list

    @property
    def passed(self):
        return self.identically and not self.failures and not self.closure_failures


def verify_template(g: LieAlgebra, T: MatrixTemplate, samples=100, seed=0) -> TemplateReport:
    """The bracket condition as an identity in the template parameters, then sampled checks of
    membership, products and inverses."""
    if all(is_zero(x) for x in T.matrix) or is_zero(T.det()):
        return TemplateReport(g.name, T.variant, False, 0, [("singular template", None)], [])
    identically = _all_zero(bracket_residuals(g, T.matrix))
    rng = random.Random(seed)
    failures, closure = [], []
    drawn = []
    for _ in range(samples):
        M, vals = sample_template(T, rng)
        if not is_automorphism(g, M):
            failures.append(("not an automorphism", vals))
        drawn.append(M)
    for A, B in zip(drawn[::2], drawn[1::2]):
        for P in (A * B, A.inv()):
            if not is_automorphism(g, P):
                closure.append(P)
    return TemplateReport(g.name, T.variant, identically, samples, failures, closure)


# --- bialgebra isomorphism ---------------------------------------------------------

def dual_iso_residuals(dual: LieAlgebra, dual2: LieAlgebra, O):
    """O[j, i] Yt'_i - O^T Yt_j O for j = 1..3."""
    O = sp.Matrix(O)
    Y, Yp = [dual.Y(i) for i in IDX], [dual2.Y(i) for i in IDX]
    return [(sum((O[j, i] * Yp[i] for i in IDX), sp.zeros(3)) - O.T * Y[j] * O).applyfunc(canon)
            for j in IDX]


def image_of_dual(dual: LieAlgebra, O, name=None) -> LieAlgebra:
    """The dual tensor that the transport condition pairs with ``dual`` under O (solved for Yt')."""
    from .algebra_core import zero_tensor
    O = sp.Matrix(O)
    Oinv = O.inv()
    Y = [dual.Y(i) for i in IDX]
    rhs = [O.T * Y[j] * O for j in IDX]
    Yp = [sum((Oinv[i, j] * rhs[j] for j in IDX), sp.zeros(3)) for i in IDX]
    f = zero_tensor()
    for i, p, q in itertools.product(IDX, IDX, IDX):
        f[p, q, i] = -Yp[i][p, q]
    return LieAlgebra(name or f"{dual.name}'", f)


def _strictly_positive(p, gens):
    """Sum of even monomials with positive coefficients plus a positive constant."""
    poly = sp.Poly(p, *gens)
    terms = poly.terms()
    const = dict(terms).get((0,) * len(gens), 0)
    return const > 0 and all(c > 0 and all(e % 2 == 0 for e in m) for m, c in terms)


def _real_obstruction(G, gens):
    """A basis element that cannot vanish over the reals: univariate without
    real roots, or strictly positive (sum of squares plus a constant)."""
    for p in G.exprs:
        if _strictly_positive(p, gens) or _strictly_positive(-p, gens):
            return p
        syms = p.free_symbols & set(gens)
        if len(syms) == 1:
            x = syms.pop()
            poly = sp.Poly(p, x)
            if poly.degree() > 0 and not sp.real_roots(poly):
                return p
    return None


def bialgebra_iso(g: LieAlgebra, dual: LieAlgebra, dual2: LieAlgebra, T: MatrixTemplate,
                  only_j=None) -> IsoVerdict:
    """Solve the dual-bracket transport condition over the template.

    Templates given by a group (SO(3), SL(2,R)) are handled with a generic
    matrix constrained by invariance of the Killing form and det = 1, because
    the Cayley chart misses part of the group.
    """
    if T.implicit:
        O = sp.Matrix(3, 3, sp.symbols("o11:14 o21:24 o31:34", real=True))
        unknowns = list(O)
        kappa = g.killing()
        constraints = list((O * kappa * O.T - kappa).applyfunc(canon)) + [O.det() - 1]
    else:
        O = T.matrix
        unknowns = list(T.params)
        z = sp.Symbol("z_det")
        constraints = [sp.expand(O.det() * z - 1)]
        unknowns = unknowns + [z]
    js = IDX if only_j is None else [only_j]
    res = dual_iso_residuals(dual, dual2, O)
    eqs = [sp.numer(sp.together(x)) for j in js for x in res[j] if not is_zero(x)]
    eqs = [sp.expand(e) for e in eqs + constraints if not is_zero(e)]
    G = sp.groebner(eqs, *unknowns, order="lex")
    if G.exprs == [1]:
        return IsoVerdict("not-isomorphic", "dual-bracket", obstruction="no complex solution (Groebner basis = [1])",
                          details={"equations": len(eqs)})
    obstruction = _real_obstruction(G, unknowns)
    if obstruction is not None:
        return IsoVerdict("not-isomorphic", "dual-bracket",
                          obstruction=f"basis element {obstruction} has no real root",
                          details={"equations": len(eqs)})
    sols = sp.solve(G.exprs, unknowns, dict=True)
    for s in sols:
        if not all(sp.sympify(v).is_real is not False for v in s.values()):
            continue
        W = _instantiate(O.subs(s), lambda M: _all_zero(dual_iso_residuals(dual, dual2, M)))
        if W is not None:
            return IsoVerdict("isomorphic", "dual-bracket", witness=W, details={"solution": s})
    return IsoVerdict("undetermined", "dual-bracket", obstruction="no real admissible solution found",
                      details={"groebner": G.exprs})


def _instantiate(W, accept):
    """Fix the remaining free symbols with small integers to get a concrete,
    invertible matrix that passes ``accept``."""
    free = sorted(W.free_symbols, key=str)
    if not free:
        return W.applyfunc(canon) if not is_zero(W.det()) and accept(W) else None
    for vals in itertools.product([1, 2, -1, 0, 3], repeat=len(free)):
        try:
            M = W.subs(dict(zip(free, vals))).applyfunc(canon)
        except ZeroDivisionError:
            continue
        if any(x.has(sp.zoo, sp.nan, sp.oo) for x in M) or is_zero(M.det()):
            continue
        if accept(M):
            return M
    return None


# --- coboundary bialgebras -----------------------------------------------------

def lie_iso_residuals(g: LieAlgebra, gp: LieAlgebra, alpha):
    """alpha Y'^m alpha^T - sum_j Y^j alpha[j, m]: zero iff alpha(X_i) = alpha[i, j] X'_j is
    a Lie algebra isomorphism g -> g'."""
    al = sp.Matrix(alpha)
    Y, Yp = [g.Y(i) for i in IDX], [gp.Y(i) for i in IDX]
    return [(al * Yp[m] * al.T - sum((Y[j] * al[j, m] for j in IDX), sp.zeros(3))).applyfunc(canon)
            for m in IDX]


def is_lie_isomorphism(g, gp, alpha) -> bool:
    alpha = sp.Matrix(alpha)
    return not is_zero(alpha.det()) and _all_zero(lie_iso_residuals(g, gp, alpha))


def coboundary_iso_matrices(gp: LieAlgebra, alpha, r, rp):
    al = sp.Matrix(alpha)
    D = al.T * sp.Matrix(r) * al - sp.Matrix(rp)
    return [(gp.X(i).T * D).applyfunc(canon) for i in IDX]


def coboundary_iso(g: LieAlgebra, gp: LieAlgebra, alpha, r, rp) -> IsoVerdict:
    if not is_lie_isomorphism(g, gp, alpha):
        raise ValueError("alpha is not a Lie algebra isomorphism g -> g' (bracket relations fail)")
    mats = coboundary_iso_matrices(gp, alpha, r, rp)
    asym = [i for i, M in enumerate(mats) if not _all_zero([M - M.T])]
    if asym:
        return IsoVerdict("not-isomorphic", "coboundary-symmetry", obstruction=f"matrix for i={asym[0] + 1} is not symmetric",
                          details={"nonsymmetric": [i + 1 for i in asym]})
    return IsoVerdict("isomorphic", "coboundary-symmetry", witness=sp.Matrix(alpha))


def coboundary_iso_symmetric(gp, alpha, r, rp):
    """Per-i symmetry of the coboundary matching matrices without the isomorphism precondition."""
    return [_all_zero([M - M.T]) for M in coboundary_iso_matrices(gp, alpha, r, rp)]


# --- A matrices ----------------------------------------------------------------

def dual_map_residuals(dual: LieAlgebra, dual2: LieAlgebra, A):
    """A Yt_j A^T - sum_i Yt'_i A[i, j]."""
    A = sp.Matrix(A)
    Y, Yp = [dual.Y(i) for i in IDX], [dual2.Y(i) for i in IDX]
    return [(A * Y[j] * A.T - sum((Yp[i] * A[i, j] for i in IDX), sp.zeros(3))).applyfunc(canon)
            for j in IDX]


def is_dual_map(dual, dual2, A) -> bool:
    return _all_zero(dual_map_residuals(dual, dual2, A))


def solve_A(dual: LieAlgebra, dual2: LieAlgebra):
    """All invertible A intertwining the two dual brackets, as a list of parametric solution dicts."""
    A = sp.Matrix(3, 3, sp.symbols("A11:14 A21:24 A31:34", real=True))
    z = sp.Symbol("z_det")
    eqs = [sp.expand(x) for M in dual_map_residuals(dual, dual2, A) for x in M if not is_zero(x)]
    eqs.append(sp.expand(A.det() * z - 1))
    sols = sp.solve(eqs, list(A) + [z], dict=True)
    return [A.subs(s).applyfunc(canon) for s in sols]


# --- relating matrices ---------------------------------------------------------

TEMPLATE_SYMBOLS = {s: sp.Symbol(s, real=True) for s in "cdef"}


@dataclass
class RelatingCheck:
    item: int
    variant: str
    reading: str
    passed: bool

    def as_dict(self):
        return {"item": self.item, "variant": self.variant, "reading": self.reading, "passed": self.passed}


def _relating_matrix(rows):
    from .scalars import PARAMETERS
    env = {**{str(k): v for k, v in PARAMETERS.items()}, **TEMPLATE_SYMBOLS}
    return sp.Matrix([[sp.sympify(str(x), locals=env) for x in row] for row in rows])


def _invertible_instance(M, skip=0):
    """An invertible specialization of M at small integer template values."""
    free = sorted(M.free_symbols & set(TEMPLATE_SYMBOLS.values()), key=str)
    found = 0
    for vals in itertools.product([1, 2, 3, -1], repeat=len(free)):
        N = M.subs(dict(zip(free, vals)))
        if not is_zero(canon(N.det())):
            if found == skip:
                return N
            found += 1
    raise ValueError("template has no invertible small-integer instance")


def _single_item_checks(item, variant, M, catalog):
    src, dst = (catalog.algebra(n) for n in item["maps"])
    yield RelatingCheck(item["item"], variant, "dual map A", is_dual_map(src, dst, M))
    yield RelatingCheck(item["item"], variant, "dual map A^-1 reversed",
                        is_dual_map(dst, src, _invertible_instance(M).inv()))
    yield RelatingCheck(item["item"], variant, "Lie iso A", is_lie_isomorphism(src, dst, _invertible_instance(M)))
    yield RelatingCheck(item["item"], variant, "Lie iso A^-1",
                        is_lie_isomorphism(src, dst, _invertible_instance(M).inv()))


def _composed_checks(item, variant, parts, catalog):
    (n_inv, P), (n_dir, Q) = parts
    src = catalog.algebra(item["parts_maps"][n_inv][1])
    dst = catalog.algebra(item["parts_maps"][n_dir][1])
    ok_printed, ok_alt = True, True
    for k in range(3):
        Pk, Qk = _invertible_instance(P, k), _invertible_instance(Q, k)
        ok_printed &= is_lie_isomorphism(src, dst, Pk.inv() * Qk)
        ok_alt &= is_lie_isomorphism(src, dst, Pk * Qk.inv())
    yield RelatingCheck(item["item"], variant, "A^-1 A", ok_printed)
    yield RelatingCheck(item["item"], variant, "A A^-1", ok_alt)


def relating_checks(catalog=None):
    """Evaluate every relating matrix under each reading; returns RelatingCheck rows.

    Single matrices are tested as dual maps (and as Lie isomorphisms, A or its inverse);
    composed items are tested as Lie isomorphisms between the two targets, under
    both composition orders."""
    from .catalog import load_catalog
    catalog = catalog or load_catalog()
    items = load_yaml("relating.yaml")
    by_item = {it["item"]: it for it in items}
    out = []
    for it in items:
        if "A" in it:
            out += _single_item_checks(it, "printed", _relating_matrix(it["A"]), catalog)
            continue
        parts, maps = {}, {}
        for key in (it["compose"]["inverse"], it["compose"]["direct"]):
            rec = it["parts"][key]
            if "from_item" in rec:
                rec = by_item[rec["from_item"]]
            maps[key] = rec["maps"]
            parts[key] = rec
        it = {**it, "parts_maps": maps}
        keys = (it["compose"]["inverse"], it["compose"]["direct"])
        variants = ["printed"] + (["corrected"] if any("corrected" in parts[k] for k in keys) else [])
        for variant in variants:
            mats = [(k, _relating_matrix(parts[k].get(variant, parts[k]["A"]))) for k in keys]
            for k, M in mats:
                single = {**it, "item": it["item"], "maps": maps[k]}
                out += [RelatingCheck(c.item, f"{variant} {k}", c.reading, c.passed)
                        for c in _single_item_checks(single, variant, M, catalog) if c.reading == "dual map A"]
            out += _composed_checks(it, variant, mats, catalog)
    return out
