"""Lagrange interpolation and the modified interpolant of the solution.

The modified interpolant differs from the Lagrange interpolant only at the
first node inside the right layer region, k = 3N/4 + 1, where the weak-layer
component E1 is dropped:

    Pi u = S^I + E0^I + pi E1 = u^I - E1(x_k) theta_k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import EvaluationError
from .fem import PiecewiseLinear
from .mesh import GRADED, BakhvalovMesh
from .problem import ManufacturedSolution

__all__ = ["InterpolantBundle", "lagrange_interpolate", "hat_energy_norm", "pi_interpolate"]


def lagrange_interpolate(g, mesh: BakhvalovMesh) -> PiecewiseLinear:
    x = np.asarray(mesh.nodes)
    if getattr(g, "complement_aware", False):
        values = np.asarray(g(x, np.asarray(mesh.comp)), dtype=float)
    else:
        values = np.asarray(g(x), dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise EvaluationError(f"non-finite nodal value at node {i} (x={mesh.nodes[i]!r})")
    return PiecewiseLinear(mesh, values)


def hat_energy_norm(mesh: BakhvalovMesh, i: int, eps1: float) -> float:
    """Energy norm of the hat function at interior node i.

    ``|theta_i|_1^2 = 1/h_{i-1} + 1/h_i`` and ``||theta_i||^2 = (h_{i-1} + h_i)/3``.
    """
    hl, hr = float(mesh.h[i - 1]), float(mesh.h[i])
    return math.sqrt(eps1 * (1.0 / hl + 1.0 / hr) + (hl + hr) / 3.0)


@dataclass(frozen=True, eq=False)
class InterpolantBundle:
    u_I: PiecewiseLinear
    pi_u: PiecewiseLinear
    pe1_node_value: float
    pe1_energy: float
    node: int | None
    notices: tuple[str, ...] = ()


def pi_interpolate(ms: ManufacturedSolution, mesh: BakhvalovMesh) -> InterpolantBundle:
    u_I = lagrange_interpolate(ms.u, mesh)
    if mesh.right_mode != GRADED:
        return InterpolantBundle(
            u_I, u_I, 0.0, 0.0, None,
            ("right layer uses uniform fallback; Pi u taken as u^I",),
        )
    k = 3 * mesh.N // 4 + 1
    e1k = float(ms.E1(mesh.nodes[k], mesh.comp[k]))
    vals = np.array(u_I.values)
    vals[k] = u_I.values[k] - e1k
    return InterpolantBundle(
        u_I=u_I,
        pi_u=PiecewiseLinear(mesh, vals),
        pe1_node_value=e1k,
        pe1_energy=abs(e1k) * hat_energy_norm(mesh, k, ms.eps1),
        node=k,
    )
