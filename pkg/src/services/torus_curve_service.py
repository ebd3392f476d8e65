"""
Torus-knot curve service.

This service handles the r = 2 benchmark: the curve
x(z) = exp((1/p + 1/q) u / 2) z^(-1/q) ((1 - e^-u z) / (1 - z))^(1/p)
and its equilibrium density in t = ln x.
"""

from __future__ import annotations

from math import comb, gcd

import numpy as np

from src.core.config import settings
from src.core.exceptions import DomainError, InvalidTorusLabelError
from src.core.logging import get_logger
from src.models.curves import DensityCurve
from src.services.branch_tracking import BranchTracker, default_grid, gauss_theta

logger = get_logger(__name__)


def _binomial_poly(sign: float, scale: float, power: int) -> np.ndarray:
    """Coefficients of (1 + sign * scale * z)^power, highest degree first."""
    return np.array([comb(power, j) * (sign * scale) ** j for j in range(power, -1, -1)], dtype=float)


class TorusCurveService:
    """Service for the torus-knot spectral curve."""

    def __init__(self, p: int, q: int, u: float, nodes: int | None = None):
        if p < 1 or q < 1 or gcd(p, q) != 1:
            raise InvalidTorusLabelError(f"(p, q) = ({p}, {q}) must be coprime positive integers")
        if u <= 0:
            raise DomainError(f"u must be > 0, got {u}")
        self.p, self.q, self.u = p, q, u
        self.nodes = nodes or settings.QUAD_NODES
        self._e = np.exp(-u)
        self._lead = np.exp((1 / p + 1 / q) * u / 2)

    def log_x(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.log(self._lead) - np.log(z) / self.q + (np.log(1 - self._e * z) - np.log(1 - z)) / self.p

    def critical_points(self) -> tuple[float, float]:
        """The two real zeros of d ln x / dz: p e z^2 - (p(1+e) + q(1-e)) z + p = 0."""
        p, q, e = self.p, self.q, self._e
        roots = np.sort(np.roots([p * e, -(p * (1 + e) + q * (1 - e)), p]).real)
        return float(roots[0]), float(roots[1])

    def support(self) -> tuple[float, float]:
        """Support endpoints in t = ln x, in increasing order."""
        ends = sorted(float(self.log_x(z).real) for z in self.critical_points())
        return ends[0], ends[1]

    def equation(self, t: float) -> np.ndarray:
        """x^(pq) z^p (1 - z)^q - e^((p+q)u/2) (1 - e^-u z)^q as a polynomial in z."""
        p, q = self.p, self.q
        lhs = np.exp(p * q * t) * np.polymul(np.r_[1.0, np.zeros(p)], _binomial_poly(-1.0, 1.0, q))
        rhs = np.exp((p + q) * self.u / 2) * _binomial_poly(-1.0, self._e, q)
        return np.polysub(lhs, rhs)

    def torus_curve(self, grid=None) -> DensityCurve:
        """
        Density (p / pi u) |arg z(x + i0)| in t = ln x.

        Args:
            grid: t values; defaults to a uniform grid over the support

        Returns:
            DensityCurve whose center is the support midpoint
        """
        z_a, z_b = self.critical_points()
        t_a, t_b = (float(self.log_x(z).real) for z in (z_a, z_b))
        tracker = BranchTracker(self.equation, t_start=t_a, t_end=t_b, z_start=z_a)
        lo, hi = min(t_a, t_b), max(t_a, t_b)
        center, half = (lo + hi) / 2, (hi - lo) / 2

        def rho(ts) -> np.ndarray:
            return self.p / (np.pi * self.u) * np.abs(np.angle(tracker.roots_at(ts)))

        nodes, weights = gauss_theta(self.nodes, half)
        mass = float(weights @ rho(center + nodes))
        t = np.asarray(grid if grid is not None else center + default_grid(half), dtype=float)
        values = np.zeros_like(t)
        inside = (t > lo) & (t < hi)
        values[inside] = rho(t[inside])
        logger.info("torus_density", p=self.p, q=self.q, u=self.u, support=(lo, hi), mass=mass)
        return DensityCurve(
            t=t,
            rho=values,
            gamma=float(np.exp(half)),
            a=1.0,
            mass=mass,
            label=f"torus ({self.p},{self.q})",
            center=center,
        )
