"""
Elliptic solution of the (2,2,2,2) model.

phi_1 = x dW/dx satisfies phi_1(x + i0) + phi_1(x - i0) - 2 phi_1(-x) = 4/u on
the cut [1/g, g]. Its odd part is a combination of incomplete elliptic
integrals of the second and first kind with modulus g^2 > 1, evaluated here
through Carlson's symmetric forms so that complex arguments stay on the
principal sheet.
"""

from __future__ import annotations

import numpy as np
from scipy import optimize, special

from src.core.config import settings
from src.core.exceptions import DomainError, SolverFailureError
from src.core.logging import get_logger
from src.models.curves import DensityCurve, Elliptic2222Solution
from src.services.branch_tracking import default_grid

logger = get_logger(__name__)

# relative offset above the real axis for boundary values on the upper lip
LIP = 1e-13


def legendre_f(z, k):
    """F[z; k] = z R_F(1 - z^2, 1 - k^2 z^2, 1)."""
    z = np.asarray(z, dtype=complex)
    return z * special.elliprf(1 - z * z, 1 - k * k * z * z, 1)


def legendre_e(z, k):
    """E[z; k] = z R_F(...) - (k^2 z^3 / 3) R_D(...)."""
    z = np.asarray(z, dtype=complex)
    x, y = 1 - z * z, 1 - k * k * z * z
    return z * special.elliprf(x, y, 1) - (k * k * z**3 / 3) * special.elliprd(x, y, 1)


def upper_lip(x):
    x = np.asarray(x, dtype=float)
    return x * (1 + 1j * LIP)


def basis_e(x, gamma: float):
    """E[x/g; g^2] minus the algebraic term that cancels its growth at infinity."""
    x = upper_lip(x)
    m = (gamma**2 + gamma**-2) / 2
    root = np.sqrt(x * x - gamma**2) * np.sqrt(x * x - gamma**-2)
    return legendre_e(x / gamma, gamma**2) - gamma * x * (x * x - m) / root


def basis_f(x, gamma: float):
    return legendre_f(upper_lip(x) / gamma, gamma**2)


def _limit(func, gamma: float, far: float = 1e4) -> complex:
    """Richardson-extrapolated value at infinity of a function approaching it like 1/x."""
    return complex(2 * func(2 * far, gamma) - func(far, gamma))


class EllipticService:
    """Service for the (2,2,2,2) elliptic solution."""

    def __init__(self, u: float, nodes: int | None = None):
        if u <= 0:
            raise DomainError(f"u must be > 0, got {u}")
        self.u = u
        self.nodes = nodes or settings.QUAD_NODES

    def constants(self, gamma: float) -> tuple[float, float]:
        """
        C_E and C_F for a given cut edge.

        C_F cancels the constant of phi_1 odd at infinity; C_E then fixes the
        real part on the cut to 2/u.
        """
        lim_e, lim_f = _limit(basis_e, gamma), _limit(basis_f, gamma)
        ratio = -lim_e.imag / lim_f.imag
        c_e = (2 / self.u) / float(np.real(basis_e(1.0, gamma) + ratio * basis_f(1.0, gamma)))
        return c_e, c_e * ratio

    def odd_part(self, gamma: float, c_e: float, c_f: float):
        def evaluate(x):
            return c_e * basis_e(x, gamma) + c_f * basis_f(x, gamma)

        return evaluate

    def _cut_nodes(self, gamma: float, upper: float | np.ndarray, n: int):
        """Gauss nodes on [1/g, upper] in s = m - h cos(theta), with the Jacobian folded in."""
        m, h = (gamma + 1 / gamma) / 2, (gamma - 1 / gamma) / 2
        theta_max = np.arccos(np.clip((m - np.asarray(upper, dtype=float)) / h, -1, 1))
        x, w = np.polynomial.legendre.leggauss(n)
        theta = np.multiply.outer(theta_max, (x + 1) / 2)
        weights = np.multiply.outer(theta_max, w / 2) * h * np.sin(theta)
        return m - h * np.cos(theta), weights

    def _raw_mass(self, gamma: float, odd) -> float:
        """-(1/pi) int Im D(s) ln(g/s) ds / s over the cut, before the sign convention."""
        s, w = self._cut_nodes(gamma, gamma, self.nodes)
        return float(-(w * np.imag(odd(s)) * np.log(gamma / s) / s).sum() / np.pi)

    def _mass(self, gamma: float) -> float:
        c_e, c_f = self.constants(gamma)
        return abs(self._raw_mass(gamma, self.odd_part(gamma, c_e, c_f)))

    def solve_gamma(self) -> float:
        lo, hi = 1.0 + 1e-6, 2.0
        for _ in range(60):
            if self._mass(hi) > 1:
                break
            hi *= 2
        else:
            raise SolverFailureError(f"no cut edge with unit mass found up to gamma={hi:.3g}")
        if self._mass(lo) >= 1:
            raise SolverFailureError(f"mass exceeds 1 already at gamma={lo}")
        return float(optimize.brentq(lambda g: self._mass(g) - 1, lo, hi, xtol=1e-14, rtol=1e-13))

    def elliptic_2222(self, grid=None) -> Elliptic2222Solution:
        """
        Cut edge, constants and density of the (2,2,2,2) solution.

        The density in t = 2 ln x is -(1/2 pi) int_{1/g}^{x} Im D(s + i0) ds / s
        with D the odd part of phi_1, the sign chosen so that the mass is positive.

        Raises:
            SolverFailureError: the cut edge cannot be bracketed
        """
        gamma = self.solve_gamma()
        c_e, c_f = self.constants(gamma)
        odd = self.odd_part(gamma, c_e, c_f)
        sign = np.sign(self._raw_mass(gamma, odd))
        edge = 2 * np.log(gamma)
        t = np.asarray(grid if grid is not None else default_grid(edge), dtype=float)
        rho = np.zeros_like(t)
        inside = np.abs(t) < edge
        s, w = self._cut_nodes(gamma, np.exp(t[inside] / 2), 64)
        rho[inside] = -sign * (w * np.imag(odd(s)) / s).sum(axis=-1) / (2 * np.pi)
        mass = sign * self._raw_mass(gamma, odd)
        density = DensityCurve(t=t, rho=rho, gamma=gamma, a=2, mass=float(mass), label="(2,2,2,2)")
        logger.info("elliptic_solved", u=self.u, gamma=gamma, c_e=c_e, c_f=c_f, mass=mass)
        return Elliptic2222Solution(u=self.u, gamma=gamma, c_e=c_e, c_f=c_f, odd_part=odd, density=density)

    @staticmethod
    def saddle_residual(solution: Elliptic2222Solution, points=None) -> np.ndarray:
        """2 Re D(x + i0) - 4/u at interior cut points."""
        g = solution.gamma
        xs = np.asarray(points if points is not None else np.geomspace(1 / g, g, 12)[1:-1], dtype=float)
        return 2 * np.real(solution.odd_part(xs)) - 4 / solution.u
