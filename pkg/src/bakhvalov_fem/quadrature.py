"""Composite Gauss-Legendre rules on the reference element [0, 1]."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import ConfigError

__all__ = ["QuadratureRule", "MIDPOINT", "DEFAULT_ASSEMBLY", "DEFAULT_ERROR"]


@lru_cache(maxsize=None)
def _rule(order: int, panels: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1.0) / 2.0
    w = w / 2.0
    offsets = np.arange(panels)[:, None]
    pts = ((offsets + x[None, :]) / panels).ravel()
    wts = np.tile(w, panels) / panels
    pts.flags.writeable = False
    wts.flags.writeable = False
    return pts, wts


@dataclass(frozen=True)
class QuadratureRule:
    """``order`` Gauss points on each of ``panels_per_element`` equal panels."""

    order: int = 5
    panels_per_element: int = 1

    def __post_init__(self):
        if self.order < 1 or self.panels_per_element < 1:
            raise ConfigError("quadrature order and panel count must be positive")

    @property
    def points(self) -> np.ndarray:
        return _rule(self.order, self.panels_per_element)[0]

    @property
    def weights(self) -> np.ndarray:
        return _rule(self.order, self.panels_per_element)[1]

    def refined(self) -> "QuadratureRule":
        return QuadratureRule(self.order, 2 * self.panels_per_element)

    def integrate(self, f, a: float = 0.0, b: float = 1.0) -> float:
        """Integrate a vectorised callable over [a, b]."""
        x = a + (b - a) * self.points
        return float((b - a) * np.dot(self.weights, f(x)))


MIDPOINT = QuadratureRule(1, 1)
DEFAULT_ASSEMBLY = QuadratureRule(5, 1)
DEFAULT_ERROR = QuadratureRule(5, 4)
