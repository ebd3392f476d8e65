"""
Newton polygon scaffolding.

Slopes, cyclotomic slope polynomials and boundary coefficients of the curve
polynomial P(x, y), read off from the growth data (n0, n1) of a finite orbit.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from src.core.exceptions import DomainError
from src.core.logging import get_logger
from src.models.orbit import Orbit
from src.models.reports import BoundaryTerm, NewtonScaffold, SlopeEntry
from src.services.sheet_dynamics_service import SheetDynamicsService

logger = get_logger(__name__)


def slope_polynomial(roots: list[int], a: int) -> list[int]:
    """Integer coefficients of prod (xi - zeta_a^n1), highest degree first."""
    values = np.exp(2j * np.pi * np.array(roots, dtype=float) / a)
    coeffs = np.poly(values)
    rounded = np.rint(coeffs.real)
    if np.abs(coeffs - rounded).max() > 1e-6:
        raise DomainError(f"slope polynomial for roots {roots} mod {a} is not integral")
    return [int(c) for c in rounded]


class NewtonService:
    """Service for Newton-polygon data of finite orbits."""

    def __init__(self, dynamics: SheetDynamicsService):
        self.dynamics = dynamics

    def degree_data(self, orbit: Orbit) -> NewtonScaffold:
        """
        Scaffold of the Newton polygon of the orbit's curve.

        Args:
            orbit: Finite orbit with integral members

        Returns:
            NewtonScaffold with slopes, degrees, the minimal monomial power,
            boundary coefficients and the x-power symmetry
        """
        if not orbit.is_finite:
            raise DomainError("degree data needs a finite orbit")
        a = self.dynamics.a
        groups: dict[int, list[int]] = defaultdict(list)
        for v in orbit.members:
            if v.denominator() != 1:
                raise DomainError(f"orbit member {v} is not integral")
            groups[int(v.n0)].append(int(v.n1) % a)

        slopes = []
        for n0 in sorted(groups, reverse=True):
            roots = sorted(groups[n0])
            slopes.append(
                SlopeEntry(
                    n0=n0,
                    direction=-1,
                    multiplicity=len(roots),
                    roots=roots,
                    polynomial=slope_polynomial(roots, a),
                )
            )

        S = sum(n0 * len(r) for n0, r in groups.items() if n0 > 0)
        d = orbit.size
        boundary = self._boundary(slopes, S, d)
        scaffold = NewtonScaffold(
            slopes=slopes,
            deg_x=2 * S,
            deg_y=d,
            minimal_x_power=S,
            boundary=boundary,
            tilde_power=self.dynamics.tilde_power(orbit),
        )
        logger.info("newton_scaffold", deg_x=scaffold.deg_x, deg_y=d, minimal=S, tilde=scaffold.tilde_power)
        return scaffold

    @staticmethod
    def _boundary(slopes: list[SlopeEntry], S: int, d: int) -> list[BoundaryTerm]:
        """
        Coefficients along the x -> 0 boundary and their palindromic images.

        Walking y^j from j = 0, the j largest n0 values are consumed group by
        group; the coefficient of x^X y^j is the coefficient of xi^h in the
        partially consumed group's polynomial divided by the constant terms of
        every group touched so far.
        """
        terms: dict[tuple[int, int], BoundaryTerm] = {}
        terms[(0, S)] = BoundaryTerm(y_power=0, x_power=S, coefficient=1, c_power=0)
        consumed, full_const, j = 0, 1, 0
        for slope in slopes:
            poly = slope.polynomial
            size = slope.multiplicity
            const = poly[-1]
            for h in range(1, size + 1):
                j += 1
                consumed += slope.n0
                X = S - consumed
                coeff_h = poly[size - h]
                value = coeff_h * full_const * const
                if value:
                    terms[(j, X)] = BoundaryTerm(y_power=j, x_power=X, coefficient=value, c_power=abs(X - S))
            # constants are +-1, so dividing equals multiplying
            full_const *= const
        for (y, X), term in list(terms.items()):
            mirror = (d - y, 2 * S - X)
            if mirror not in terms:
                terms[mirror] = BoundaryTerm(
                    y_power=d - y, x_power=2 * S - X, coefficient=term.coefficient, c_power=term.c_power
                )
        return sorted(terms.values(), key=lambda t: (t.y_power, t.x_power))
