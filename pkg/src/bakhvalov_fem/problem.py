"""Continuous two-parameter problem, characteristic roots, manufactured solution.

The boundary value problem is

    -eps1 u'' + eps2 b(x) u' + c(x) u = f(x)  on (0, 1),   u(0) = u(1) = 0,

with b >= lambda > 0, c >= beta > 0 and c - eps2 b' / 2 >= gamma > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import ConfigError, EvaluationError

__all__ = [
    "ScalarField",
    "TwoParamBVP",
    "Violation",
    "ValidationReport",
    "CharacteristicRoots",
    "ManufacturedSolution",
    "exp_clamped",
    "validate_problem",
    "characteristic_roots",
    "closed_form_roots",
    "manufactured_solution",
    "test_problem",
]

EXP_CLAMP = -700.0
FD_STEP = 1e-6


def exp_clamped(arg):
    """``exp(arg)`` with arguments below -700 mapped to exactly 0."""
    arg = np.asarray(arg, dtype=float)
    out = np.exp(np.maximum(arg, EXP_CLAMP))
    return np.where(arg < EXP_CLAMP, 0.0, out)


@dataclass(frozen=True)
class ScalarField:
    """A coefficient function on [0, 1].

    ``func`` must accept numpy arrays. ``deriv`` is optional; when absent,
    :meth:`derivative` falls back to a central difference. ``constant``
    flags a constant field so that callers can take closed-form shortcuts.
    """

    func: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray] | None = None
    constant: float | None = None

    @classmethod
    def const(cls, value: float) -> "ScalarField":
        value = float(value)
        return cls(
            func=lambda x: np.full(np.shape(x), value),
            deriv=lambda x: np.zeros(np.shape(x)),
            constant=value,
        )

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = np.asarray(self.func(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape).copy()
        bad = ~np.isfinite(y)
        if bad.any():
            where = float(np.atleast_1d(x)[np.flatnonzero(np.atleast_1d(bad))[0]])
            raise EvaluationError(f"coefficient is not finite at x={where!r}")
        return y

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.deriv is not None:
            return np.asarray(self.deriv(x), dtype=float) + np.zeros(x.shape)
        return (self(x + FD_STEP) - self(x - FD_STEP)) / (2.0 * FD_STEP)


@dataclass(frozen=True)
class TwoParamBVP:
    eps1: float
    eps2: float
    b: ScalarField
    c: ScalarField
    f: ScalarField
    lambda_lb: float = 1.0
    beta_lb: float = 1.0
    gamma_lb: float = 1.0

    def __post_init__(self):
        for name in ("eps1", "eps2"):
            val = getattr(self, name)
            if not (0.0 < val <= 1.0):
                raise ConfigError(f"{name} must lie in (0, 1], got {val!r}")

    @property
    def constant_coefficients(self) -> bool:
        return self.b.constant is not None and self.c.constant is not None

    @property
    def alpha(self) -> float:
        """Coercivity constant ``min(1, gamma)``."""
        return min(1.0, self.gamma_lb)


@dataclass(frozen=True)
class Violation:
    condition: str
    x: float
    value: float


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_problem(p: TwoParamBVP, n_samples: int = 101) -> ValidationReport:
    """Check the sign conditions on b, c and c - eps2 b'/2 on a uniform grid.

    For each of the three conditions the first sample point where it fails
    is reported.
    """
    if n_samples < 2:
        raise ConfigError("n_samples must be at least 2")
    x = np.linspace(0.0, 1.0, n_samples)
    b = p.b(x)
    c = p.c(x)
    db = p.b.derivative(x)
    if not np.all(np.isfinite(db)):
        k = int(np.flatnonzero(~np.isfinite(db))[0])
        raise EvaluationError(f"derivative of b is not finite at x={x[k]!r}")
    checks = [
        ("b >= lambda > 0", b, p.lambda_lb),
        ("c >= beta > 0", c, p.beta_lb),
        ("c - eps2*b'/2 >= gamma > 0", c - 0.5 * p.eps2 * db, p.gamma_lb),
    ]
    found = []
    for name, values, bound in checks:
        bad = (values < bound) | (bound <= 0.0) | (values <= 0.0)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            found.append(Violation(name, float(x[k]), float(values[k])))
    return ValidationReport(tuple(found))


@dataclass(frozen=True)
class CharacteristicRoots:
    """Decay rates of the layers at x=0 (``mu0``) and x=1 (``mu1``)."""

    mu0: float
    mu1: float
    argmax_x0: float = 0.0
    argmin_x1: float = 0.0


def _roots_at(eps1, eps2, b, c):
    # g1 = (eps2 b + sqrt D) / (2 eps1); -g0 = c / (eps1 g1) = 2c / (eps2 b + sqrt D)
    disc = (eps2 * b) ** 2 + 4.0 * eps1 * c
    if np.any(disc <= 0.0):
        raise EvaluationError("characteristic discriminant is not positive")
    s = eps2 * b + np.sqrt(disc)
    return 2.0 * c / s, s / (2.0 * eps1)


def closed_form_roots(eps1: float, eps2: float, b: float = 1.0, c: float = 1.0) -> tuple[float, float]:
    """``(mu0, mu1)`` for constant coefficients, free of cancellation."""
    mu0, mu1 = _roots_at(eps1, eps2, float(b), float(c))
    return float(mu0), float(mu1)


def characteristic_roots(p: TwoParamBVP, n_samples: int = 1025) -> CharacteristicRoots:
    """Extremal roots of ``-eps1 g^2 + eps2 b(x) g + c(x) = 0`` over [0, 1].

    Constant coefficients use the closed form. Otherwise both extrema are
    located on a uniform sample grid and refined by a bounded scalar
    minimisation on the two neighbouring sample intervals.
    """
    if p.constant_coefficients:
        mu0, mu1 = closed_form_roots(p.eps1, p.eps2, p.b.constant, p.c.constant)
        return CharacteristicRoots(mu0, mu1, 0.0, 0.0)

    x = np.linspace(0.0, 1.0, n_samples)
    m0, m1 = _roots_at(p.eps1, p.eps2, p.b(x), p.c(x))

    def refine(values, which):
        k = int(np.argmin(values))
        best_x, best = float(x[k]), float(values[k])
        lo, hi = x[max(k - 1, 0)], x[min(k + 1, n_samples - 1)]

        def obj(t):
            r = _roots_at(p.eps1, p.eps2, p.b(np.array([t])), p.c(np.array([t])))
            return float(r[which][0])

        res = minimize_scalar(obj, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        if res.success and res.fun < best:
            best_x, best = float(res.x), float(res.fun)
        return best, best_x

    mu0, x0 = refine(m0, 0)
    mu1, x1 = refine(m1, 1)
    return CharacteristicRoots(mu0, mu1, x0, x1)


@dataclass(frozen=True)
class ManufacturedSolution:
    """Exact solution of ``-eps1 u'' + eps2 u' + u = cos(pi x)`` with zero
    boundary values, split as ``u = S + E0 + E1``::

        S  = a cos(pi x) + b_coef sin(pi x)
        E0 = A exp(-mu0 x)
        E1 = B exp(-mu1 (1 - x))
    """

    eps1: float
    eps2: float
    a: float
    b_coef: float
    A: float
    B: float
    mu0: float
    mu1: float

    def S(self, x):
        x = np.asarray(x, dtype=float)
        return self.a * np.cos(np.pi * x) + self.b_coef * np.sin(np.pi * x)

    def dS(self, x):
        x = np.asarray(x, dtype=float)
        return np.pi * (self.b_coef * np.cos(np.pi * x) - self.a * np.sin(np.pi * x))

    def E0(self, x):
        return self.A * exp_clamped(-self.mu0 * np.asarray(x, dtype=float))

    def dE0(self, x):
        return -self.mu0 * self.E0(x)

    # Functions below take an optional ``xc = 1 - x``; passing it exactly
    # keeps E1 accurate when mu1 (1 - x) is large and 1 - x is tiny.

    def E1(self, x, xc=None):
        if xc is None:
            xc = 1.0 - np.asarray(x, dtype=float)
        return self.B * exp_clamped(-self.mu1 * np.asarray(xc, dtype=float))

    def dE1(self, x, xc=None):
        return self.mu1 * self.E1(x, xc)

    def u(self, x, xc=None):
        return self.S(x) + self.E0(x) + self.E1(x, xc)

    def du(self, x, xc=None):
        return self.dS(x) + self.dE0(x) + self.dE1(x, xc)

    def d2u(self, x, xc=None):
        return (-np.pi**2 * self.S(x) + self.mu0**2 * self.E0(x)
                + self.mu1**2 * self.E1(x, xc))

    for _f in (E1, dE1, u, du, d2u):
        _f.complement_aware = True
    del _f

    __call__ = u


def manufactured_solution(eps1: float, eps2: float) -> ManufacturedSolution:
    if not (eps1 > 0.0 and eps2 > 0.0):
        raise ConfigError("eps1 and eps2 must be positive")
    pi2 = math.pi**2
    q = eps1 * pi2 + 1.0
    den = eps2**2 * pi2 + q**2
    a = q / den
    b_coef = eps2 * math.pi / den
    mu0, mu1 = closed_form_roots(eps1, eps2)
    e0 = float(exp_clamped(-mu0))
    e1 = float(exp_clamped(-mu1))
    d = 1.0 - float(exp_clamped(-mu0 - mu1))
    A = -a * (1.0 + e1) / d
    B = a * (1.0 + e0) / d
    return ManufacturedSolution(eps1, eps2, a, b_coef, A, B, mu0, mu1)


def test_problem(eps1: float, eps2: float) -> TwoParamBVP:
    """``-eps1 u'' + eps2 u' + u = cos(pi x)``: b = c = 1, lambda = beta = gamma = 1."""
    f = ScalarField(func=lambda x: np.cos(np.pi * x),
                    deriv=lambda x: -np.pi * np.sin(np.pi * x))
    return TwoParamBVP(eps1, eps2, ScalarField.const(1.0), ScalarField.const(1.0), f)


test_problem.__test__ = False  # keep pytest from collecting it
