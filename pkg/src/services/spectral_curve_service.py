"""
Spectral curve service.

This service handles the (2,2,p) spectral curves: the kappa(u) solver, the even
and odd parametrizations, their equilibrium densities, and the numerical checks
of palindrome symmetry, square-root edges and the saddle-point equation.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate, optimize

from src.core.config import settings
from src.core.exceptions import BranchTrackingError, DomainError, QuadratureFailureError, SolverFailureError
from src.core.logging import get_logger
from src.models.curves import DensityCurve, RationalCurveParam
from src.services.branch_tracking import BranchTracker, default_grid, gauss_theta

logger = get_logger(__name__)


def kappa_equation(p: int, kappa: float) -> float:
    """ln(2 k^(1+1/p) / (1 + k^2)), increasing on (0, 1]."""
    return np.log(2.0) + (1.0 + 1.0 / p) * np.log(kappa) - np.log1p(kappa**2)


def solve_kappa(p: int, u: float) -> float:
    """
    Unique kappa in (0, 1] with 2 k^(1+1/p) / (1 + k^2) = exp(-u / 4p^2).

    Args:
        p: Order of the third exceptional fiber
        u: Coupling, u >= 0

    Returns:
        kappa(u)

    Raises:
        DomainError: u < 0 or p < 2
    """
    if u < 0:
        raise DomainError(f"u must be >= 0, got {u}")
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if u == 0:
        return 1.0
    target = -u / (4.0 * p * p)
    lo = 0.5
    while kappa_equation(p, lo) > target:
        lo *= 0.5
    kappa = optimize.brentq(
        lambda k: kappa_equation(p, k) - target, lo, 1.0, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500
    )
    residual = abs(2 * kappa ** (1 + 1 / p) / (1 + kappa**2) - np.exp(target))
    if residual > settings.KAPPA_TOL:
        raise SolverFailureError(f"kappa residual {residual:.3e} exceeds {settings.KAPPA_TOL}")
    return float(kappa)


def u_of_kappa(p: int, kappa: float) -> float:
    """Inverse of solve_kappa on (0, 1]."""
    if not 0 < kappa <= 1:
        raise DomainError(f"kappa must lie in (0, 1], got {kappa}")
    return float(-4.0 * p * p * kappa_equation(p, kappa))


def branch_power(p: int, kappa: float) -> float:
    """Larger root s of s^2 - ((p+1) k^-2 - (p-1) k^2) s + 1 = 0, so z_+ = s^(1/p) for even p."""
    k2 = kappa**2
    b = (p + 1) / k2 - (p - 1) * k2
    disc = (1 / k2 - k2) * ((p + 1) ** 2 / k2 - (p - 1) ** 2 * k2)
    return float((b + np.sqrt(max(disc, 0.0))) / 2)


class SpectralCurveService:
    """Service for the closed-form (2,2,p) spectral curves."""

    def __init__(self, nodes: int | None = None):
        self.nodes = nodes or settings.QUAD_NODES

    def curve_even_from_kappa(self, p: int, kappa: float) -> RationalCurveParam:
        if p < 2 or p % 2:
            raise DomainError(f"even family needs an even p >= 2, got {p}")
        return RationalCurveParam(
            family="even", p=p, kappa=kappa, u=u_of_kappa(p, kappa), z_plus=branch_power(p, kappa) ** (1.0 / p)
        )

    def curve_even(self, p: int, u: float) -> RationalCurveParam:
        if u <= 0:
            raise DomainError(f"u must be > 0, got {u}")
        return self.curve_even_from_kappa(p, solve_kappa(p, u))

    def curve_odd(self, p: int, u: float) -> RationalCurveParam:
        """Odd family; its branch point is the square root of the even one at equal kappa."""
        if p < 3 or p % 2 == 0:
            raise DomainError(f"odd family needs an odd p >= 3, got {p}")
        if u <= 0:
            raise DomainError(f"u must be > 0, got {u}")
        kappa = solve_kappa(p, u)
        z_plus = branch_power(p, kappa) ** (1.0 / (2 * p))
        return RationalCurveParam(family="odd", p=p, kappa=kappa, u=u, z_plus=z_plus)

    def tracker(self, curve: RationalCurveParam) -> BranchTracker:
        """The coordinate is exp(t / p) for both families."""
        edge = self.edge(curve)
        return BranchTracker(
            lambda t: curve.coordinate_equation(np.exp(t / curve.p)),
            t_start=edge,
            t_end=-edge,
            z_start=curve.z_edge,
        )

    @staticmethod
    def edge(curve: RationalCurveParam) -> float:
        return float(curve.a * np.log(curve.gamma))

    def density_values(self, curve: RationalCurveParam, tracker: BranchTracker, t) -> np.ndarray:
        """rho(t) = (p / pi u) |arg(-y)| on the upper lip."""
        z = tracker.roots_at(t)
        return curve.p / (np.pi * curve.u) * np.abs(np.angle(-curve.y(z)))

    def density(self, curve: RationalCurveParam, grid=None) -> DensityCurve:
        """
        Equilibrium density of a (2,2,p) curve.

        Args:
            curve: Even or odd parametrization
            grid: t values; defaults to a uniform grid over the support

        Returns:
            DensityCurve with Gauss-Legendre mass
        """
        edge = self.edge(curve)
        if not edge > 0:
            raise BranchTrackingError(f"support edge {edge} of {curve.family} p={curve.p} is not positive")
        tracker = self.tracker(curve)
        t = np.asarray(grid if grid is not None else default_grid(edge), dtype=float)
        inside = np.abs(t) < edge
        rho = np.zeros_like(t)
        rho[inside] = self.density_values(curve, tracker, t[inside])
        nodes, weights = gauss_theta(self.nodes, edge)
        mass = float(weights @ self.density_values(curve, tracker, nodes))
        logger.info("density_computed", family=curve.family, p=curve.p, u=curve.u, gamma=curve.gamma, mass=mass)
        return DensityCurve(
            t=t, rho=rho, gamma=curve.gamma, a=curve.a, mass=mass, label=f"(2,2,{curve.p}) {curve.family}"
        )

    def density_even(self, p: int, u: float, grid=None) -> DensityCurve:
        return self.density(self.curve_even(p, u), grid)

    def density_odd(self, p: int, u: float, grid=None) -> DensityCurve:
        return self.density(self.curve_odd(p, u), grid)

    @staticmethod
    def palindrome_residual(curve: RationalCurveParam, samples: int = 32, seed: int = 0) -> float:
        """max |y(z) y(1/z) - 1| over random points, where x(z) x(1/z) = 1."""
        rng = np.random.default_rng(seed)
        z = rng.uniform(0.3, 3.0, samples) * np.exp(1j * rng.uniform(0, 2 * np.pi, samples))
        return float(np.max(np.abs(curve.y(z) * curve.y(1 / z) - 1)))

    def edge_exponent(self, curve: RationalCurveParam) -> float:
        """Log-log slope of rho against the distance to the right edge."""
        tracker = self.tracker(curve)
        edge = self.edge(curve)
        delta = np.geomspace(1e-5, 1e-3, 12) * edge
        rho = self.density_values(curve, tracker, edge - delta)
        slope, _ = np.polyfit(np.log(delta), np.log(rho), 1)
        return float(slope)

    def saddle_residual_even(self, curve: RationalCurveParam, points=None) -> np.ndarray:
        """
        Re W(x + i0) + (p^2/u) ln|y| - p^2 ln(x) / u - 1/2 at interior cut points.

        W is the Stieltjes transform of the density, its real part on the cut
        being a principal-value integral.
        """
        if curve.family != "even":
            raise DomainError("the saddle residual is implemented for the even family")
        tracker = self.tracker(curve)
        gamma, p, u = curve.gamma, curve.p, curve.u
        xs = np.asarray(points if points is not None else np.geomspace(1 / gamma, gamma, 12)[1:-1], dtype=float)

        def rho_x(s: float) -> float:
            t = p * np.log(s)
            return float(self.density_values(curve, tracker, [t])[0]) * p / s

        residuals = []
        for x in xs:
            pv, err = integrate.quad(rho_x, 1 / gamma, gamma, weight="cauchy", wvar=x, limit=400, epsabs=1e-12)
            if not np.isfinite(pv) or err > 1e-7:
                raise QuadratureFailureError(f"principal value at x={x} did not converge (err={err:.2e})")
            re_w = -x * pv
            z = tracker.root_at(p * np.log(x))
            log_y = np.log(np.abs(curve.y(z)))
            residuals.append(re_w + p * p / u * log_y - p * p * np.log(x) / u - 0.5)
        return np.asarray(residuals)
