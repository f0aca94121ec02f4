"""Bakhvalov-type layer-adapted mesh with uniform fallback per layer.

The mesh has N/4 graded elements in each layer region and N/2 equidistant
elements in between.  Layer nodes follow the logarithmic generating
functions

    phi0(t) = -ln(1 - 4 (1 - 1/mu0) t),
    phi1(t) = -ln(1 - 4 (1 - 1/mu1) (1 - t)),

scaled by tau / (p mu_j).  A layer whose decay rate is below N (or whose
transition point falls outside (0, 1/4]) is meshed uniformly instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import ConfigError, SolverError

__all__ = [
    "GRADED",
    "FALLBACK",
    "MeshParams",
    "TransitionPoints",
    "BakhvalovMesh",
    "transition_points",
    "build_mesh",
    "uniform_mesh",
    "SideDiagnostics",
    "MeshDiagnostics",
    "mesh_diagnostics",
    "MESH_HEADER",
    "format_mesh",
    "parse_mesh_dump",
]

GRADED = "graded"
FALLBACK = "uniform-fallback"


@dataclass(frozen=True)
class MeshParams:
    N: int
    tau: float = 2.0
    p: float = 0.5
    # grade a layer only when mu_j >= N; False keeps grading whenever
    # 0 < sigma_j <= 1/4 (and mu_j > 1)
    require_mu_ge_n: bool = True

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 16 or self.N % 4:
            raise ConfigError(f"N must be an integer >= 16 divisible by 4, got {self.N!r}")
        if not self.tau >= 1.0:
            raise ConfigError(f"tau must be >= 1, got {self.tau!r}")
        if not (0.0 < self.p < 1.0):
            raise ConfigError(f"p must lie in (0, 1), got {self.p!r}")

    @property
    def scale(self) -> float:
        return self.tau / self.p


class TransitionPoints(NamedTuple):
    sigma0: float
    sigma1: float
    left_valid: bool
    right_valid: bool


def _sigma(mu: float, scale: float) -> float:
    return scale / mu * math.log(mu)


def transition_points(mu0: float, mu1: float, params: MeshParams) -> TransitionPoints:
    """Transition points ``sigma_j = tau/(p mu_j) ln mu_j`` and layer validity.

    A side is valid when ``mu_j >= N`` and ``0 < sigma_j <= 1/4``; an invalid
    side reports ``sigma_j = 1/4``.  With ``params.require_mu_ge_n`` off the
    first condition is relaxed to ``mu_j > 1``.
    """
    if not (mu0 > 0 and mu1 > 0):
        raise ConfigError("mu0 and mu1 must be positive")
    out = []
    for mu in (mu0, mu1):
        s = _sigma(mu, params.scale)
        big = mu >= params.N if params.require_mu_ge_n else mu > 1.0
        valid = big and 0.0 < s <= 0.25
        out.append((s if valid else 0.25, valid))
    (s0, v0), (s1, v1) = out
    return TransitionPoints(s0, s1, v0, v1)


def _graded_layer(mu: float, N: int, scale: float):
    """Distances from the boundary and widths of a graded layer region.

    Returns ``(d, w)`` where ``d[k]`` is the distance of the k-th node from
    the boundary (k = 0..N/4) and ``w[k] = d[k+1] - d[k]``.  The generating
    function argument ``1 - 4 (1 - 1/mu) t`` is formed as
    ``(1 - 4t) + 4t/mu`` so that it stays accurate near t = 1/4.
    """
    q = N // 4
    k = np.arange(q + 1)
    arg = (N - 4 * k) / N + (4 * k / N) / mu
    d = -scale / mu * np.log(arg)
    d[0] = 0.0
    d[q] = _sigma(mu, scale)
    # arg[k] - arg[k+1] = 4 (1 - 1/mu) / N exactly
    w = scale / mu * np.log1p((4.0 / N) * (1.0 - 1.0 / mu) / arg[1:])
    return d, w


@dataclass(frozen=True, eq=False)
class BakhvalovMesh:
    """Node array and element widths; immutable after construction.

    ``h`` is computed from the generating functions directly rather than by
    differencing ``nodes``, so widths of elements squeezed against x = 1
    keep full relative accuracy.  ``comp`` holds ``1 - x_i`` taken from the
    right-layer generator, so functions of the distance to x = 1 can be
    evaluated without the cancellation in ``1 - nodes``.
    """

    params: MeshParams
    nodes: np.ndarray
    h: np.ndarray
    sigma0: float
    sigma1: float
    mu0: float
    mu1: float
    left_mode: str
    right_mode: str
    comp: np.ndarray | None = None

    def __post_init__(self):
        if self.comp is None:
            object.__setattr__(self, "comp", _freeze(1.0 - np.asarray(self.nodes)))

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def graded(self) -> bool:
        return self.left_mode == GRADED and self.right_mode == GRADED

    @property
    def mode_label(self) -> str:
        return f"{self.left_mode}/{self.right_mode}"

    def __repr__(self):
        return (f"BakhvalovMesh(N={self.N}, tau={self.params.tau}, p={self.params.p}, "
                f"sigma0={self.sigma0:.6g}, sigma1={self.sigma1:.6g}, "
                f"modes={self.mode_label})")


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


def build_mesh(mu0: float, mu1: float, params: MeshParams) -> BakhvalovMesh:
    N = params.N
    q = N // 4
    s0, s1, left_ok, right_ok = transition_points(mu0, mu1, params)

    x = np.empty(N + 1)
    h = np.empty(N)

    if left_ok:
        d, w = _graded_layer(mu0, N, params.scale)
        x[: q + 1] = d
        h[:q] = w
    else:
        x[: q + 1] = np.arange(q + 1) / N
        h[:q] = 1.0 / N

    hc = 2.0 * (1.0 - s0 - s1) / N
    x[q : 3 * q + 1] = s0 + np.arange(2 * q + 1) * hc
    h[q : 3 * q] = hc

    comp = 1.0 - x
    if right_ok:
        d, w = _graded_layer(mu1, N, params.scale)
        # node 3N/4 + k sits at distance d[q - k] from x = 1
        x[3 * q :] = 1.0 - d[::-1]
        h[3 * q :] = w[::-1]
        comp[3 * q :] = d[::-1]
    else:
        x[3 * q :] = 1.0 - np.arange(q, -1, -1) / N
        h[3 * q :] = 1.0 / N
        comp[3 * q :] = np.arange(q, -1, -1) / N

    x[q] = s0
    x[3 * q] = 1.0 - s1
    x[0], x[N] = 0.0, 1.0
    comp[3 * q], comp[N] = s1, 0.0

    if not (np.all(np.diff(x) > 0) and np.all(h > 0)):
        raise SolverError("mesh construction produced a non-monotone node sequence")

    return BakhvalovMesh(
        params=params,
        nodes=_freeze(x),
        h=_freeze(h),
        sigma0=s0,
        sigma1=s1,
        mu0=float(mu0),
        mu1=float(mu1),
        left_mode=GRADED if left_ok else FALLBACK,
        right_mode=GRADED if right_ok else FALLBACK,
        comp=_freeze(comp),
    )


def uniform_mesh(N: int) -> BakhvalovMesh:
    """Equidistant mesh with the same bookkeeping as a fully fallback mesh."""
    params = MeshParams(N)
    x = np.arange(N + 1) / N
    return BakhvalovMesh(params, _freeze(x), _freeze(np.full(N, 1.0 / N)),
                         0.25, 0.25, 1.0, 1.0, FALLBACK, FALLBACK)


# --------------------------------------------------------------------------
# diagnostics


@dataclass
class SideDiagnostics:
    side: str
    brackets: list[tuple[str, float, float, float, bool]]
    monotone: bool
    scaled_products: dict[float, float]
    T: np.ndarray
    T_max: float
    T_argmax: int
    T_at_endpoint: bool
    T_scaled: float

    @property
    def brackets_ok(self) -> bool:
        return self.monotone and all(ok for *_, ok in self.brackets)


@dataclass
class MeshDiagnostics:
    left: SideDiagnostics | None
    right: SideDiagnostics | None
    central_equidistant: bool
    central_bounds: tuple[float, float, bool] | None
    notices: list[str] = field(default_factory=list)

    @property
    def sizes_ok(self) -> bool:
        sides = [s for s in (self.left, self.right) if s is not None]
        ok = all(s.brackets_ok for s in sides) and self.central_equidistant
        if self.central_bounds is not None:
            ok = ok and self.central_bounds[2]
        return ok


def _bracket(name, lo, value, hi):
    return (name, lo, value, hi, bool(lo <= value <= hi))


def _side(mesh: BakhvalovMesh, side: str) -> SideDiagnostics:
    N, tau, p = mesh.N, mesh.params.tau, mesh.params.p
    q = N // 4
    if side == "left":
        mu = mesh.mu0
        hs = np.asarray(mesh.h[:q])              # layer widths, boundary first
        dist = np.asarray(mesh.nodes[: q + 1])   # node distances from x = 0
    else:
        mu = mesh.mu1
        hs = np.asarray(mesh.h[3 * q :])[::-1]
        dist = 1.0 - np.asarray(mesh.nodes[3 * q :])[::-1]
    inv = 1.0 / mu
    # hs[k]: k-th layer element counted from the boundary; dist[k]: its
    # boundary-side node.  Mirror images of the left-layer statements.
    brackets = [
        _bracket("h_{q-2}", tau / (4 * p) * inv, hs[q - 2], tau / p * inv),
        _bracket("h_{q-1}", tau / (2 * p) * inv, hs[q - 1], 4 * tau / (p * N)),
    ]
    monotone = bool(np.all(np.diff(hs[: q - 1]) >= 0))

    # weights use the boundary-side node of each element on both sides
    e = np.exp(-p * mu * dist[: q - 1])
    scaled_products = {m: float(np.max((mu * N * hs[: q - 1]) ** m * e)) for m in (1.5, 2.5)}

    T = (hs[1 : q - 1] - hs[: q - 2]) * np.exp(-p * mu * dist[1 : q - 1])
    k = int(np.argmax(T))
    return SideDiagnostics(
        side=side,
        brackets=brackets,
        monotone=monotone,
        scaled_products=scaled_products,
        T=T,
        T_max=float(T[k]),
        T_argmax=k,
        T_at_endpoint=k in (0, len(T) - 1),
        T_scaled=float(mu * N**2 * T[k]),
    )


def mesh_diagnostics(mesh: BakhvalovMesh) -> MeshDiagnostics:
    """Numerical checks of the mesh-size bounds on each graded side.

    For a graded left layer: the width brackets for h_{N/4-2} and
    h_{N/4-1}, monotonicity of h_0..h_{N/4-2}, the scaled products
    ``(mu0 N h_i)^m exp(-p mu0 x_i)`` for m in {3/2, 5/2}, and the sequence
    ``T_i = (h_{i+1} - h_i) exp(-p mu0 x_{i+1})`` with its argmax.  The
    right layer is treated as the mirror image with mu1 and 1 - x.
    """
    N = mesh.N
    q = N // 4
    notices = []
    left = right = None
    if mesh.left_mode == GRADED:
        left = _side(mesh, "left")
    else:
        notices.append("left layer uses uniform fallback; diagnostics skipped")
    if mesh.right_mode == GRADED:
        right = _side(mesh, "right")
    else:
        notices.append("right layer uses uniform fallback; diagnostics skipped")

    hc = np.asarray(mesh.h[q : 3 * q])
    equi = bool(np.all(hc == hc[0]))
    bounds = None
    if mesh.graded:
        bounds = (float(hc.min()), float(hc.max()),
                  bool(1.0 / N <= hc.min() and hc.max() <= 2.0 / N))
    return MeshDiagnostics(left, right, equi, bounds, notices)


# --------------------------------------------------------------------------
# text dump

MESH_HEADER = "# N tau p mu0 mu1 sigma0 sigma1 left_mode right_mode"


def _g(v: float) -> str:
    return format(float(v), ".17g")


def format_mesh(mesh: BakhvalovMesh, values: np.ndarray | None = None) -> str:
    """Tab-separated dump: ``i  x_i  h_i`` (plus ``u_i`` when values given).

    The header line names the fields, the next comment line carries their
    values.  The last node has an empty ``h`` field.
    """
    N = mesh.N
    pr = mesh.params
    lines = [
        MESH_HEADER + ("" if values is None else " (columns: i x_i h_i u_i)"),
        "# " + " ".join([str(N), _g(pr.tau), _g(pr.p), _g(mesh.mu0), _g(mesh.mu1),
                         _g(mesh.sigma0), _g(mesh.sigma1), mesh.left_mode, mesh.right_mode]),
    ]
    for i in range(N + 1):
        row = [str(i), _g(mesh.nodes[i]), _g(mesh.h[i]) if i < N else ""]
        if values is not None:
            row.append(_g(values[i]))
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def parse_mesh_dump(text: str) -> dict:
    """Inverse of :func:`format_mesh`; returns header values and columns."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(MESH_HEADER):
        raise ConfigError("missing mesh dump header")
    vals = lines[1][1:].split()
    header = dict(zip(MESH_HEADER[1:].split(), vals))
    out = {
        "N": int(header["N"]),
        "tau": float(header["tau"]),
        "p": float(header["p"]),
        "mu0": float(header["mu0"]),
        "mu1": float(header["mu1"]),
        "sigma0": float(header["sigma0"]),
        "sigma1": float(header["sigma1"]),
        "left_mode": header["left_mode"],
        "right_mode": header["right_mode"],
    }
    rows = [ln.split("\t") for ln in lines[2:] if not ln.startswith("#")]
    out["i"] = np.array([int(r[0]) for r in rows])
    out["x"] = np.array([float(r[1]) for r in rows])
    out["h"] = np.array([float(r[2]) if r[2] else np.nan for r in rows])
    if rows and len(rows[0]) > 3:
        out["u"] = np.array([float(r[3]) for r in rows])
    return out
