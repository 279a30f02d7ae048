"""Structure constants of three-dimensional Lie algebras.

Tensors are dense 3x3x3 arrays ``f[i, j, k]`` with ``[X_i, X_j] = f[i, j, k] X_k``
and 0-based indices.  Entries are exact sympy scalars (rationals or rational
functions of the parameters ``a``, ``b``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import sympy as sp

from .scalars import a as A_PARAM, canon, domain_for, is_zero, to_scalar

IDX = range(3)

# (a, n1, n2, n3) for each Bianchi type; None marks the free parameter a.
BIANCHI_TABLE = {
    "I": (0, 0, 0, 0),
    "II": (0, 1, 0, 0),
    "VII_o": (0, 1, 1, 0),
    "VI_o": (0, 1, -1, 0),
    "IX": (0, 1, 1, 1),
    "VIII": (0, 1, 1, -1),
    "V": (1, 0, 0, 0),
    "IV": (1, 0, 0, 1),
    "VII_a": (None, 0, 1, 1),
    "III": (1, 0, 1, -1),
    "VI_a": (None, 0, 1, -1),
}

ALIASES = {"VII0": "VII_o", "VI0": "VI_o", "VIIa": "VII_a", "VIa": "VI_a",
           "VII_0": "VII_o", "VI_0": "VI_o"}


def canonical_type(name: str) -> str:
    name = name.strip()
    return ALIASES.get(name, name)


def entries(t):
    """Flat list of the scalar entries of an N-dim array (iteration over an
    NDimArray yields sub-arrays, not scalars)."""
    return list(sp.flatten(t.tolist()))


def zero_tensor():
    return sp.MutableDenseNDimArray.zeros(3, 3, 3)


def freeze(f) -> sp.ImmutableDenseNDimArray:
    out = sp.MutableDenseNDimArray.zeros(3, 3, 3)
    for i, j, k in itertools.product(IDX, IDX, IDX):
        out[i, j, k] = canon(f[i][j][k] if isinstance(f, (list, tuple)) else f[i, j, k])
    return sp.ImmutableDenseNDimArray(out)


def antisymmetry_violations(f):
    return [(i, j, k) for i, j, k in itertools.product(IDX, IDX, IDX)
            if j >= i and not is_zero(f[i, j, k] + f[j, i, k])]


def as_domain(*tensors):
    """Nested lists of exact field elements for fast identity checks."""
    K, conv = domain_for([x for t in tensors for x in entries(t)])
    return K, [[[[conv(x) for x in row] for row in plane] for plane in t.tolist()] for t in tensors]


def jacobi_violations(F, dim):
    """Jacobi failures of a structure tensor given as nested lists of field elements."""
    out = []
    for i, j, k in itertools.combinations(range(dim), 3):
        for l in range(dim):
            s = sum(F[i][j][m] * F[m][k][l] + F[j][k][m] * F[m][i][l] + F[k][i][m] * F[m][j][l]
                    for m in range(dim))
            if s:
                out.append((i, j, k, l))
    return out


def jacobi_check(f):
    """Index quadruples (i, j, k, l) where the Jacobi sum fails; empty means pass.

    The check is a polynomial identity in the parameters, not a sampled one.
    Only i < j < k is visited: the sum is totally antisymmetric in (i, j, k).
    """
    f = freeze(f)
    bad = antisymmetry_violations(f)
    if bad:
        raise ValueError(f"structure tensor not antisymmetric at {bad[0]}")
    _, (F,) = as_domain(f)
    return jacobi_violations(F, 3)


@dataclass(frozen=True)
class LieAlgebra:
    name: str
    f: sp.ImmutableDenseNDimArray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "f", freeze(self.f))
        bad = antisymmetry_violations(self.f)
        if bad:
            raise ValueError(f"{self.name}: f not antisymmetric at (i,j,k)={bad[0]}")

    @classmethod
    def from_brackets(cls, name, brackets):
        """Build from ``{(i, j): [c1, c2, c3]}`` with 1-based i < j."""
        f = zero_tensor()
        for (i, j), coeffs in brackets.items():
            for k, c in enumerate(coeffs):
                c = to_scalar(c)
                f[i - 1, j - 1, k] = c
                f[j - 1, i - 1, k] = -c
        return cls(name, f)

    def brackets(self):
        return {(i + 1, j + 1): [self.f[i, j, k] for k in IDX]
                for i, j in ((0, 1), (0, 2), (1, 2))}

    @property
    def parameters(self):
        return set().union(*(sp.sympify(x).free_symbols for x in entries(self.f)))

    def subs(self, values):
        return LieAlgebra(self.name, self.f.subs(values))

    def is_abelian(self):
        return all(is_zero(x) for x in entries(self.f))

    def X(self, i):
        return adjoint(self.f, i)

    def Y(self, i):
        return cobracket_matrix(self.f, i)

    def killing(self):
        return killing_form(self.f)

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and all(
            is_zero(x - y) for x, y in zip(entries(self.f), entries(other.f)))

    def __hash__(self):
        return hash(self.name)


def adjoint(f, i):
    """(X_i)[l, j] = -f_il^j."""
    return sp.Matrix(3, 3, lambda l, j: -f[i, l, j])


def cobracket_matrix(f, i):
    """(Y^i)[j, k] = -f_jk^i."""
    return sp.Matrix(3, 3, lambda j, k: -f[j, k, i])


def adjoint_matrices(g: LieAlgebra):
    return [g.X(i) for i in IDX], [g.Y(i) for i in IDX]


def tensor_from_adjoints(Xs):
    f = zero_tensor()
    for i, l, j in itertools.product(IDX, IDX, IDX):
        f[i, l, j] = -Xs[i][l, j]
    return freeze(f)


def killing_form(f):
    Xs = [adjoint(f, i) for i in IDX]
    return sp.Matrix(3, 3, lambda i, j: canon((Xs[i] * Xs[j]).trace()))


def bianchi(kind: str, a=None) -> LieAlgebra:
    """Bianchi algebra from (a, n1, n2, n3):

        [X1,X2] = -a X2 + n3 X3,  [X2,X3] = n1 X1,  [X3,X1] = n2 X2 + a X3.

    ``a`` is required for VII_a and VI_a (defaults to the symbol a) and is
    rejected for the other types.
    """
    kind = canonical_type(kind)
    if kind not in BIANCHI_TABLE:
        raise ValueError(f"unknown Bianchi type {kind!r}")
    av, n1, n2, n3 = BIANCHI_TABLE[kind]
    if av is None:
        av = A_PARAM if a is None else to_scalar(a)
        if kind == "VI_a" and is_zero(av - 1):
            raise ValueError("VI_a at a=1 is Bianchi III; use bianchi('III')")
        if sp.sympify(av).is_number and av <= 0:
            raise ValueError(f"{kind} needs a > 0, got {av}")
    elif a is not None:
        raise ValueError(f"Bianchi {kind} takes no parameter")
    av = sp.sympify(av)
    name = kind if kind not in ("VII_a", "VI_a") or av == A_PARAM else f"{kind}(a={av})"
    return LieAlgebra.from_brackets(name, {
        (1, 2): [0, -av, n3],
        (2, 3): [n1, 0, 0],
        (1, 3): [0, -n2, -av],
    })


def transform(g: LieAlgebra, M, name=None) -> LieAlgebra:
    """Rewrite g in the basis X'_i = sum_k M[i, k] X_k."""
    M = sp.Matrix(M)
    Minv = M.inv()
    f = zero_tensor()
    for i, j, m in itertools.product(IDX, IDX, IDX):
        f[i, j, m] = sum(M[i, k] * M[j, l] * g.f[k, l, n] * Minv[n, m]
                         for k in IDX for l in IDX for n in IDX)
    return LieAlgebra(name or f"{g.name}'", f)


def trace_covector(f):
    """a_i = 1/2 sum_k f_ik^k; zero exactly for unimodular algebras."""
    return [canon(sum(f[i, k, k] for k in IDX) / 2) for i in IDX]


def derived_algebra_rank(f):
    rows = [[f[i, j, k] for k in IDX] for i, j in ((0, 1), (0, 2), (1, 2))]
    return sp.Matrix(rows).rank(simplify=True)


def _sign_changes(coeffs):
    signs = [sp.sign(c) for c in coeffs if c != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _inertia(n):
    """(#positive, #negative) eigenvalues of a symmetric rational matrix.

    The characteristic polynomial is real-rooted, so Descartes' rule of signs
    is exact; this avoids the sign of casus-irreducibilis radicals."""
    lam = sp.Symbol("lam")
    p = sp.Poly(n.charpoly(lam).as_expr(), lam)
    return _sign_changes(p.all_coeffs()), _sign_changes(sp.Poly(p.as_expr().subs(lam, -lam), lam).all_coeffs())


def identify(g: LieAlgebra, at=None):
    """Bianchi type of g (a basis-independent test) as ``(type, parameter)``.

    Unimodular algebras are sorted by rank and signature of the symmetric
    matrix n; the others by the spectrum of ad Z on the unimodular kernel,
    where Z is any element with nonzero trace.  Signs of parameter-dependent
    quantities are decided after substituting ``at`` (default a=1/3, b=1).
    """
    from .scalars import b as B_PARAM

    at = {A_PARAM: sp.Rational(1, 3), B_PARAM: 1, **(at or {})}
    f = g.f
    av = trace_covector(f)
    if all(is_zero(x) for x in av):
        # n^{mk} = 1/2 eps^{ijm} f_ij^k
        n = sp.Matrix(3, 3, lambda m, k: sum(sp.LeviCivita(i, j, m) * f[i, j, k]
                                             for i in IDX for j in IDX) / 2)
        pos, neg = _inertia(n.subs(at))
        rank = pos + neg
        if rank == 0:
            return "I", None
        if rank == 1:
            return "II", None
        if rank == 2:
            return ("VII_o" if pos != 1 else "VI_o"), None
        return ("IX" if pos in (0, 3) else "VIII"), None
    # unimodular kernel u = {x : a(x) = 0} is a 2-dim ideal; Z complements it
    acol = sp.Matrix(av)
    u = acol.T.nullspace()
    z = next(sp.Matrix([1 if i == m else 0 for i in IDX]) for m in IDX if not is_zero(av[m]))
    B = sp.Matrix.hstack(*u)
    adZ = sp.Matrix(3, 3, lambda k, j: sum(z[i] * f[i, j, k] for i in IDX))  # column j = [Z, e_j]
    Mu = (B.T * B).inv() * B.T * adZ * B
    tr, det = canon(Mu.trace()), canon(Mu.det())
    if is_zero(det):
        return "III", None
    disc = canon(tr**2 - 4 * det)
    if is_zero(disc):
        return ("V" if is_zero(Mu[0, 1]) and is_zero(Mu[1, 0]) and is_zero(Mu[0, 0] - Mu[1, 1])
                else "IV"), None
    kappa = canon(tr**2 / det)
    if is_zero(tr):
        return "VI_o", None  # cannot happen for non-unimodular g, kept for completeness
    if sp.sympify(disc.subs(at)) < 0:
        return "VII_a", sp.simplify(sp.sqrt(canon(kappa / (4 - kappa))))
    return "VI_a", sp.simplify(sp.sqrt(canon(kappa / (kappa - 4))))
