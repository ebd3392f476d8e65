"""
(2,3,3) branch-point constraints and fitted density.

In the variables z = y + 1/y and w = x^2 + 1/x^2 the curve satisfies a quartic
A(z, w) = 0 with two undetermined parameters m2, m3. At the branch point both
A and dA/dz vanish; since A is affine in m3 the pair reduces to a quintic in z.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import optimize

from src.core.config import settings
from src.core.constants import P233_CONTINUATION_STEPS
from src.core.exceptions import BranchTrackingError, ConstraintInfeasibleError, DomainError
from src.core.logging import get_logger
from src.models.curves import DensityCurve, P233Solution
from src.services.branch_tracking import BranchTracker, default_grid, gauss_theta

logger = get_logger(__name__)

A_ORDER = 6


def quartic(c: float, m2: float, m3: float, w: float) -> np.ndarray:
    """Coefficients of A(z, w) in z, lowest degree first."""
    c2, c4 = c * c, c**4
    return np.array(
        [
            -6 * c4 - 40 * c2 * m2 - 2 * c2 * w + 24 * c * m3 + 8 * m2 * m2 - 4 * m2 * w - w * w + 6,
            -5 * c4 - 12 * c2 * m2 - 3 * c2 * w - 4 * m2 * m2 + 2 * m2 * w - w * w + 3,
            -2 * c4 + 12 * c2 * m2 - 6 * c * m3,
            c4 + 2 * c2 * m2 + c2 * w,
            c4,
        ]
    )


def m3_slope(c: float) -> np.ndarray:
    """Coefficient of m3 in A, lowest degree first."""
    return np.array([24 * c, 0.0, -6 * c])


def branch_quintic(c: float, m2: float, w: float) -> np.ndarray:
    """A' b - A b' with b the m3 slope: its roots are the z where A = dA/dz = 0 for some m3."""
    a0, b = quartic(c, m2, 0.0, w), m3_slope(c)
    return P.polysub(P.polymul(P.polyder(a0), b), P.polymul(a0, P.polyder(b)))


def m3_at(c: float, m2: float, w: float, z: float) -> float:
    return float(-P.polyval(z, quartic(c, m2, 0.0, w)) / P.polyval(z, m3_slope(c)))


class P233Service:
    """Service for the (2,3,3) constraint system and its density."""

    def __init__(self, u: float, nodes: int | None = None):
        if u <= 0:
            raise DomainError(f"u must be > 0, got {u}")
        self.u = u
        self.c = float(np.exp(-u / (2 * A_ORDER**2)))
        self.nodes = nodes or settings.QUAD_NODES

    def solutions(self, m2: float, w: float) -> list[tuple[float, float]]:
        """All real (z, m3) with A = dA/dz = 0, sorted by |m3|."""
        found = []
        for z in P.polyroots(branch_quintic(self.c, m2, w)):
            if abs(z.imag) > 1e-9 * max(1.0, abs(z)):
                continue
            z = float(z.real)
            if abs(P.polyval(z, m3_slope(self.c))) < 1e-12:
                continue
            found.append((z, m3_at(self.c, m2, w, z)))
        return sorted(found, key=lambda s: abs(s[1]))

    def weak_coupling_branches(self, m2: float, w: float, steps: int = P233_CONTINUATION_STEPS) -> list[complex]:
        """
        Quintic roots continued from the weak-coupling branch point z = -2.

        At c = 1, m2 = 0, w = 2 the quintic has a double root at z = -2 (y = -1).
        Both roots leaving it are followed along the straight homotopy to
        (c, m2, w), each step taking the nearest root.
        """
        path = np.linspace(0.0, 1.0, steps + 1)[1:]

        def roots(s: float) -> np.ndarray:
            return P.polyroots(branch_quintic(1 + s * (self.c - 1), s * m2, 2 + s * (w - 2)))

        first = roots(path[0])
        starts = first[np.argsort(np.abs(first + 2))[:2]]
        ends = []
        for current in starts:
            for s in path[1:]:
                candidates = roots(s)
                current = candidates[np.argmin(np.abs(candidates - current))]
            ends.append(complex(current))
        return ends

    def p233_constraints(self, m2: float, w: float) -> P233Solution:
        """
        Branch point z and parameter m3 for given (w, m2).

        Keeps the root continued from z = -2 at weak coupling that stays real
        with z <= -2, so that y is real at the edge and the density vanishes there.

        Raises:
            ConstraintInfeasibleError: no such real solution
        """
        if w <= 2:
            raise DomainError(f"w = x^2 + x^-2 must exceed 2, got {w}")
        candidates = [
            (z.real, m3_at(self.c, m2, w, z.real))
            for z in self.weak_coupling_branches(m2, w)
            if abs(z.imag) <= 1e-9 * max(1.0, abs(z)) and z.real <= -2
        ]
        if not candidates:
            raise ConstraintInfeasibleError(f"no real outer branch point for u={self.u}, m2={m2}, w={w}")
        z, m3 = min(candidates, key=lambda s: abs(s[1]))
        return P233Solution(u=self.u, m2=m2, m3=m3, w=w, z=z)

    def _tracker(self, sol: P233Solution) -> tuple[BranchTracker, float]:
        edge = A_ORDER / 2 * np.log(sol.gamma_tilde)

        def equation(t: float) -> np.ndarray:
            w = 2 * np.cosh(2 * t / A_ORDER)
            return quartic(self.c, sol.m2, sol.m3, w)[::-1]

        return BranchTracker(equation, t_start=edge, t_end=-edge, z_start=sol.z), edge

    def _rho(self, sol: P233Solution, tracker: BranchTracker, t) -> np.ndarray:
        z = tracker.roots_at(t)
        y = (z + np.sqrt(z * z - 4)) / 2
        return 2 * A_ORDER / (np.pi * self.u) * np.abs(np.angle(-y))

    def p233_density(self, sol: P233Solution, grid=None) -> DensityCurve:
        """Density (2a / pi u) |arg(-y)| along the cut, with t = 3 ln(x^2)."""
        tracker, edge = self._tracker(sol)
        nodes, weights = gauss_theta(self.nodes, edge)
        mass = float(weights @ self._rho(sol, tracker, nodes))
        t = np.asarray(grid if grid is not None else default_grid(edge), dtype=float)
        rho = np.zeros_like(t)
        inside = np.abs(t) < edge
        rho[inside] = self._rho(sol, tracker, t[inside])
        gamma = float(np.sqrt(sol.gamma_tilde))
        return DensityCurve(t=t, rho=rho, gamma=gamma, a=A_ORDER, mass=mass, label="(2,3,3)")

    def mass(self, m2: float, w: float) -> float:
        try:
            return self.p233_density(self.p233_constraints(m2, w)).mass
        except (BranchTrackingError, ConstraintInfeasibleError):
            return float("nan")

    def p233_fit(self, m2: float, w_max: float = 1e4, samples: int = 48) -> P233Solution:
        """
        Choose the branch point w so that the density has unit mass.

        Returns:
            P233Solution with the fitted w, branch point z, predicted m3 and density

        Raises:
            ConstraintInfeasibleError: no w in (2, w_max] reaches unit mass
        """
        ws = 2 + np.geomspace(1e-3, w_max - 2, samples)
        masses = np.array([self.mass(m2, w) for w in ws])
        for i in range(len(ws) - 1):
            lo, hi = masses[i], masses[i + 1]
            if np.isfinite(lo) and np.isfinite(hi) and (lo - 1) * (hi - 1) <= 0:
                w = optimize.brentq(lambda v: self.mass(m2, v) - 1, ws[i], ws[i + 1], xtol=1e-12)
                sol = self.p233_constraints(m2, w)
                fitted = P233Solution(u=sol.u, m2=m2, m3=sol.m3, w=sol.w, z=sol.z, density=self.p233_density(sol))
                logger.info("p233_fitted", u=self.u, m2=m2, m3=fitted.m3, w=w, z=fitted.z)
                return fitted
        raise ConstraintInfeasibleError(f"no unit-mass branch point for u={self.u}, m2={m2}")

    def density_for_m3(self, m2: float, m3: float, w_max: float = 1e4, grid=None) -> DensityCurve:
        """Density for given (m2, m3), locating w by matching the predicted m3."""
        ws = 2 + np.geomspace(1e-3, w_max - 2, 96)

        def gap(w: float) -> float:
            try:
                return self.p233_constraints(m2, w).m3 - m3
            except ConstraintInfeasibleError:
                return float("nan")

        gaps = np.array([gap(w) for w in ws])
        for i in range(len(ws) - 1):
            if np.isfinite(gaps[i]) and np.isfinite(gaps[i + 1]) and gaps[i] * gaps[i + 1] <= 0:
                w = optimize.brentq(gap, ws[i], ws[i + 1], xtol=1e-12)
                return self.p233_density(self.p233_constraints(m2, w), grid)
        raise ConstraintInfeasibleError(f"no branch point reproduces m3={m3} at u={self.u}, m2={m2}")
