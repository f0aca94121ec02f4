"""Linear finite elements: assembly, tridiagonal solve, Galerkin residual.

Unknowns are the interior nodal values 1..N-1; the homogeneous boundary
values are eliminated, not penalised.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, EvaluationError, SolverError
from .mesh import BakhvalovMesh
from .problem import TwoParamBVP
from .quadrature import DEFAULT_ASSEMBLY, QuadratureRule

__all__ = [
    "PiecewiseLinear",
    "TridiagonalSystem",
    "element_matrices",
    "assemble",
    "thomas",
    "solve_tridiagonal",
    "galerkin_residual",
    "solve",
]


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """Continuous piecewise linear function given by its nodal values."""

    mesh: BakhvalovMesh
    values: np.ndarray
    residual: float | None = None

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=float)
        if v.shape != (self.mesh.N + 1,):
            raise ConfigError(f"expected {self.mesh.N + 1} nodal values, got {v.shape}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def in_VN(self) -> bool:
        return self.values[0] == 0.0 and self.values[-1] == 0.0

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.mesh.h

    def __call__(self, x):
        return np.interp(x, self.mesh.nodes, self.values)

    def __sub__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        if other.mesh is not self.mesh:
            raise ConfigError("functions live on different meshes")
        return PiecewiseLinear(self.mesh, self.values - other.values)


@dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    """Rows of ``a(theta_j, theta_i) u_j = (f, theta_i)`` for interior i.

    ``sub[k]`` couples row k to unknown k-1 and ``sup[k]`` to unknown k+1;
    ``sub[0]`` and ``sup[-1]`` are zero.
    """

    mesh: BakhvalovMesh
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def matvec(self, u: np.ndarray) -> np.ndarray:
        out = self.diag * u
        out[1:] += self.sub[1:] * u[:-1]
        out[:-1] += self.sup[:-1] * u[1:]
        return out

    def row_norms(self) -> np.ndarray:
        return np.abs(self.sub) + np.abs(self.diag) + np.abs(self.sup)

    def to_dense(self) -> np.ndarray:
        n = self.diag.size
        A = np.diag(self.diag)
        A[np.arange(1, n), np.arange(n - 1)] = self.sub[1:]
        A[np.arange(n - 1), np.arange(1, n)] = self.sup[:-1]
        return A

    def form(self, v: np.ndarray, w: np.ndarray) -> float:
        """``a(v, w)`` for members of V^N given by full nodal vectors."""
        return float(np.dot(w[1:-1], self.matvec(np.asarray(v, dtype=float)[1:-1])))


def element_matrices(problem: TwoParamBVP, mesh: BakhvalovMesh,
                     quad: QuadratureRule = DEFAULT_ASSEMBLY):
    """Per-element 2x2 matrices and load vectors.

    Returns ``(K, F)`` with ``K[e, I, J] = a(phi_J, phi_I)`` restricted to
    element e (I, J = 0 for the left node, 1 for the right node) and
    ``F[e, I] = (f, phi_I)`` on element e.
    """
    x, h = np.asarray(mesh.nodes), np.asarray(mesh.h)
    s, w = quad.points, quad.weights
    X = x[:-1, None] + h[:, None] * s[None, :]
    phi = np.stack([1.0 - s, s])            # (2, nq)
    sign = np.array([-1.0, 1.0])            # phi_I' = sign[I] / h

    bw = problem.b(X) * w                   # (N, nq)
    cw = problem.c(X) * w
    fw = problem.f(X) * w

    # eps2 int b phi_J' phi_I = eps2 sign[J] sum_q w b phi_I  (h cancels)
    bphi = bw @ phi.T                       # (N, 2): sum_q w b phi_I
    conv = problem.eps2 * bphi[:, :, None] * sign[None, None, :]
    react = h[:, None, None] * np.einsum("eq,iq,jq->eij", cw, phi, phi)
    diff = (problem.eps1 / h)[:, None, None] * np.outer(sign, sign)[None]
    K = diff + conv + react
    F = h[:, None] * (fw @ phi.T)

    bad = ~(np.isfinite(K).all(axis=(1, 2)) & np.isfinite(F).all(axis=1))
    if bad.any():
        raise EvaluationError(f"non-finite element integral on element {int(np.flatnonzero(bad)[0])}")
    return K, F


def assemble(problem: TwoParamBVP, mesh: BakhvalovMesh,
             quad: QuadratureRule = DEFAULT_ASSEMBLY) -> TridiagonalSystem:
    """Galerkin system for the hat basis; nonsymmetric whenever eps2 > 0."""
    N = mesh.N
    K, F = element_matrices(problem, mesh, quad)
    diag = np.zeros(N + 1)
    rhs = np.zeros(N + 1)
    diag[:-1] += K[:, 0, 0]
    diag[1:] += K[:, 1, 1]
    rhs[:-1] += F[:, 0]
    rhs[1:] += F[:, 1]
    sup = np.zeros(N + 1)
    sub = np.zeros(N + 1)
    sup[:-1] = K[:, 0, 1]        # row e, column e+1
    sub[1:] = K[:, 1, 0]         # row e+1, column e
    sub, diag, sup, rhs = sub[1:N].copy(), diag[1:N].copy(), sup[1:N].copy(), rhs[1:N].copy()
    sub[0] = 0.0
    sup[-1] = 0.0
    return TridiagonalSystem(mesh, sub, diag, sup, rhs)


def thomas(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Thomas algorithm without pivoting; raises SolverError on a zero pivot."""
    n = diag.size
    c = np.empty(n)
    d = np.empty(n)
    piv = diag[0]
    if piv == 0.0:
        raise SolverError("zero pivot in row 0")
    c[0] = sup[0] / piv
    d[0] = rhs[0] / piv
    for k in range(1, n):
        piv = diag[k] - sub[k] * c[k - 1]
        if piv == 0.0 or not np.isfinite(piv):
            raise SolverError(f"zero pivot in row {k}")
        c[k] = sup[k] / piv
        d[k] = (rhs[k] - sub[k] * d[k - 1]) / piv
    x = np.empty(n)
    x[-1] = d[-1]
    for k in range(n - 2, -1, -1):
        x[k] = d[k] - c[k] * x[k + 1]
    return x


def solve_tridiagonal(sys: TridiagonalSystem) -> PiecewiseLinear:
    """Solve and attach the relative residual ``|A u - rhs|_inf / |rhs|_inf``."""
    u = thomas(sys.sub, sys.diag, sys.sup, sys.rhs)
    r = np.max(np.abs(sys.matvec(u) - sys.rhs))
    scale = np.max(np.abs(sys.rhs))
    rel = float(r / scale) if scale > 0 else float(r)
    values = np.zeros(sys.mesh.N + 1)
    values[1:-1] = u
    return PiecewiseLinear(sys.mesh, values, residual=rel)


def galerkin_residual(problem: TwoParamBVP, mesh: BakhvalovMesh,
                      quad: QuadratureRule, u_h: PiecewiseLinear) -> float:
    """``max_i |a(u_h, theta_i) - (f, theta_i)|`` with each row scaled by its
    absolute row sum."""
    sys = assemble(problem, mesh, quad)
    r = sys.matvec(np.asarray(u_h.values[1:-1])) - sys.rhs
    return float(np.max(np.abs(r) / sys.row_norms()))


def solve(problem: TwoParamBVP, mesh: BakhvalovMesh,
          quad: QuadratureRule = DEFAULT_ASSEMBLY) -> PiecewiseLinear:
    return solve_tridiagonal(assemble(problem, mesh, quad))
