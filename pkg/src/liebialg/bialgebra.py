"""Lie bialgebras as pairs of structure tensors (f, ft) and their Drinfeld doubles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import sympy as sp

from .algebra_core import IDX, LieAlgebra, as_domain, freeze, jacobi_check, jacobi_violations, zero_tensor
from .scalars import is_zero


@dataclass(frozen=True)
class Bialgebra:
    name: str
    g: LieAlgebra
    g_dual: LieAlgebra
    meta: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def dual(self, name=None):
        """The swapped bialgebra (g*, g)."""
        return Bialgebra(name or self.meta.get("dual_name") or f"dual{self.name}",
                         self.g_dual, self.g)

    @property
    def parameters(self):
        return self.g.parameters | self.g_dual.parameters

    def subs(self, values):
        return Bialgebra(self.name, self.g.subs(values), self.g_dual.subs(values), self.meta)


def cocycle_residual(f, ft, i, j, k, l):
    """Mixed Jacobi expression for indices (i, j) of the dual and (k, l) of g."""
    s = sum(f[m, k, i] * ft[j, m, l] - f[m, l, i] * ft[j, m, k]
            - f[m, k, j] * ft[i, m, l] + f[m, l, j] * ft[i, m, k] for m in IDX)
    return s - sum(f[k, l, m] * ft[i, j, m] for m in IDX)


def cocycle_check(b: Bialgebra):
    """Violated (i, j, k, l) of the compatibility between f and ft; empty = pass."""
    _, (f, ft) = as_domain(b.g.f, b.g_dual.f)
    F = _Idx(f)
    Ft = _Idx(ft)
    return [q for q in itertools.product(IDX, IDX, IDX, IDX)
            if q[0] < q[1] and q[2] < q[3] and cocycle_residual(F, Ft, *q)]


class _Idx:
    """Tuple indexing over nested lists, so the residual formula reads the same."""

    def __init__(self, nested):
        self.n = nested

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self.n[i][j][k]


def cocommutator(b: Bialgebra, i):
    """delta(X_i) as a 3x3 matrix: delta(X_i) = ft^{jk}_i X_j (x) X_k."""
    ft = b.g_dual.f
    return sp.Matrix(3, 3, lambda j, k: ft[j, k, i])


@dataclass(frozen=True)
class DoubleAlgebra:
    name: str
    F: sp.ImmutableDenseNDimArray = field(repr=False)  # 6x6x6, basis X_1..X_3, Xt^1..Xt^3
    pairing: sp.Matrix = field(repr=False)

    def jacobi_violations(self):
        _, (F,) = as_domain(self.F)
        return jacobi_violations(F, 6)

    def invariance_violations(self):
        """Indices where <[u,v],w> + <v,[u,w]> != 0."""
        F, P = self.F, self.pairing
        bad = []
        for u, v, w in itertools.product(range(6), repeat=3):
            s = sum(F[u, v, m] * P[m, w] + F[u, w, m] * P[v, m] for m in range(6))
            if not is_zero(s):
                bad.append((u, v, w))
        return bad


def build_double(b: Bialgebra, check=True) -> DoubleAlgebra:
    """The 6-dim algebra on g + g* with the canonical pairing.

    [X_i, Xt^j] = ft^{jk}_i X_k + f_ki^j Xt^k.
    """
    f, ft = b.g.f, b.g_dual.f
    F = sp.MutableDenseNDimArray.zeros(6, 6, 6)
    for i, j, k in itertools.product(IDX, IDX, IDX):
        F[i, j, k] = f[i, j, k]
        F[3 + i, 3 + j, 3 + k] = ft[i, j, k]
        F[i, 3 + j, k] = ft[j, k, i]
        F[i, 3 + j, 3 + k] = f[k, i, j]
        F[3 + j, i, k] = -ft[j, k, i]
        F[3 + j, i, 3 + k] = -f[k, i, j]
    pairing = sp.Matrix(sp.BlockMatrix([[sp.zeros(3), sp.eye(3)], [sp.eye(3), sp.zeros(3)]]))
    D = DoubleAlgebra(f"D{b.name}", sp.ImmutableDenseNDimArray(F), pairing)
    if check:
        bad = D.jacobi_violations()
        if bad:
            raise ValueError(f"{b.name}: double fails Jacobi at {bad[:3]}")
    return D


def dual_from_r(g: LieAlgebra, r, name=None, check=False) -> LieAlgebra:
    """Dual bracket of the coboundary delta(X) = [1 (x) X + X (x) 1, r].

    Component form: ft^{pq}_i = -(X_i^T r + r X_i)[p, q].
    """
    r = sp.Matrix(r)
    ft = zero_tensor()
    for i in IDX:
        D = -(g.X(i).T * r + r * g.X(i))
        for p, q in itertools.product(IDX, IDX):
            ft[p, q, i] = D[p, q]
    out = freeze(ft)
    bad = [(p, q, i) for p, q, i in itertools.product(IDX, IDX, IDX) if not is_zero(out[p, q, i] + out[q, p, i])]
    if bad:
        raise ValueError(f"delta from r is not antisymmetric at {bad[0]}: the symmetric part of r is not invariant")
    lie = LieAlgebra(name or f"delta_r({g.name})", out)
    if check and jacobi_check(lie.f):
        raise ValueError("dual bracket from r fails Jacobi: [[r,r]] is not invariant")
    return lie
