"""The r-bracket [X, Y]_r = [rho X, Y] + [X, rho Y] and its Lax flow on g*.

With rho(X_i) = r[i, j] X_j and the Lie-Poisson structure of [,]_r on g*,
the Hamiltonian H(xi) = 1/2 xi^T K^-1 xi (K the Killing form) generates

    d xi_i / dt = F[i, j, k] xi_k (K^-1 xi)_j,

F the structure tensor of [,]_r.  The element l = K^-1 xi of g obeys the Lax
equation dl/dt = [rho(l), l], so L = ad(l) is isospectral.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from .algebra_core import IDX, LieAlgebra, entries, jacobi_check
from .scalars import canon, is_zero


# initial point for the acceptance runs: big enough that the O(dt^4) drift sits
# far above the extended-precision floor, small enough to stay bounded on SL(2)
DEFAULT_XI = (2.0, 1.0, -1.6)


class DegenerateKilling(ValueError):
    """No canonical invariant quadratic Hamiltonian on a non-semisimple algebra."""


def rho(r) -> sp.Matrix:
    """[rho]_i^j = r^{ij}: rho(X_i) = sum_j r[i, j] X_j."""
    return sp.Matrix(r)


@dataclass(frozen=True)
class RBracketAlgebra:
    algebra: LieAlgebra
    jacobi: bool

    @property
    def f(self):
        return self.algebra.f


def r_bracket_tensor(g: LieAlgebra, r):
    R = rho(r)
    F = [[[canon(sum(R[i, m] * g.f[m, j, k] + R[j, m] * g.f[i, m, k] for m in IDX))
           for k in IDX] for j in IDX] for i in IDX]
    return sp.ImmutableDenseNDimArray(F)


def r_bracket(g: LieAlgebra, r) -> RBracketAlgebra:
    r = sp.Matrix(r)
    if not all(is_zero(x) for x in r + r.T):
        raise ValueError("the r-bracket needs a skew r")
    alg = LieAlgebra(f"{g.name}_r", r_bracket_tensor(g, r))
    return RBracketAlgebra(alg, not jacobi_check(alg.f))


# --- numerics -------------------------------------------------------------------

# extended precision keeps the rounding floor well below the O(dt^4) drift
DTYPE = np.longdouble


def _numeric(t, shape):
    vals = entries(t) if not isinstance(t, sp.MatrixBase) else list(t)
    return np.array([DTYPE(sp.Rational(x).p) / DTYPE(sp.Rational(x).q) for x in vals],
                    dtype=DTYPE).reshape(shape)


@dataclass
class LaxSystem:
    """Numeric data of the flow: structure tensors, rho and the inverse Killing form."""
    f: np.ndarray
    F: np.ndarray
    rho: np.ndarray
    kinv: np.ndarray

    @classmethod
    def build(cls, g: LieAlgebra, r, H=None):
        """``H``: symmetric matrix of the quadratic Hamiltonian 1/2 xi^T H xi.
        Defaults to the inverse Killing form, which needs a semisimple g."""
        if H is None:
            K = g.killing()
            if is_zero(K.det()):
                raise DegenerateKilling(f"Killing form of {g.name} is degenerate: no canonical invariant H")
            H = K.inv()
        return cls(_numeric(g.f, (3, 3, 3)), _numeric(r_bracket_tensor(g, r), (3, 3, 3)),
                   _numeric(rho(r), (3, 3)), _numeric(sp.Matrix(H), (3, 3)))

    def element(self, xi):
        """l = K^-1 xi in g."""
        return self.kinv @ xi

    def velocity(self, xi):
        return np.einsum("ijk,k,j->i", self.F, xi, self.element(xi))

    def bracket(self, u, v):
        return np.einsum("i,j,ijk->k", u, v, self.f)

    def lax_matrix(self, xi):
        """ad(l) with (ad X_i)[k, j] = f[i, j, k]."""
        return np.einsum("i,ijk->kj", self.element(xi), self.f)

    def lax_residual(self, xi):
        """|dl/dt - [rho(l), l]| at xi."""
        l = self.element(xi)
        return float(np.max(np.abs(self.kinv @ self.velocity(xi) - self.bracket(self.rho.T @ l, l))))


def rk4(system: LaxSystem, xi0, dt, steps):
    xi = np.array(xi0, dtype=DTYPE)
    dt = DTYPE(dt)
    out = [xi.copy()]
    v = system.velocity
    for _ in range(steps):
        k1 = v(xi)
        k2 = v(xi + dt / 2 * k1)
        k3 = v(xi + dt / 2 * k2)
        k4 = v(xi + dt * k3)
        xi = xi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(xi.copy())
    return np.array(out)


def spectrum(M):
    """Eigenvalues of a traceless 3x3 matrix with det 0 (any 3-dim ad(l)):
    0 and +-sqrt(tr(M^2)/2), evaluated in the matrix dtype."""
    q = np.trace(M @ M) / 2
    root = np.sqrt(q) if q >= 0 else 1j * np.sqrt(-q)
    return np.array([-root, 0, root])


@dataclass
class LaxReport:
    trajectory: np.ndarray
    times: np.ndarray
    drifts: np.ndarray     # per step: max eigenvalue deviation from t = 0
    residuals: np.ndarray  # per step: |dl/dt - [rho(l), l]|

    @property
    def drift(self):
        return float(self.drifts.max())

    @property
    def residual(self):
        return float(self.residuals.max())


def lax_residual(g: LieAlgebra, r, xi0, dt=1e-3, t_end=1.0, H=None) -> LaxReport:
    """Integrate the r-bracket flow with RK4; report the max Lax residual and the
    max eigenvalue drift of L = ad(K^-1 xi) along the trajectory."""
    system = LaxSystem.build(g, r, H)
    steps = int(round(t_end / dt))
    traj = rk4(system, xi0, dt, steps)
    if not np.all(np.isfinite(traj)):
        raise ArithmeticError("trajectory left the finite range (finite-time blow-up)")
    ev0 = spectrum(system.lax_matrix(traj[0]))
    drifts = np.array([float(np.max(np.abs(spectrum(system.lax_matrix(x)) - ev0))) for x in traj])
    residuals = np.array([system.lax_residual(x) for x in traj])
    return LaxReport(traj.astype(float), np.linspace(0.0, steps * dt, steps + 1), drifts, residuals)


def convergence_ratio(g, r, xi0, dt=1e-3, t_end=1.0):
    """drift(dt) / drift(dt/2); about 16 for a fourth-order scheme."""
    coarse = lax_residual(g, r, xi0, dt, t_end).drift
    fine = lax_residual(g, r, xi0, dt / 2, t_end).drift
    return coarse, fine, coarse / fine if fine else float("inf")
