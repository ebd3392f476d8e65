"""
Invariants service.

This service handles the fiber-knot invariants of the (2,2,p) family: planar
moments in terminating hypergeometric form, the residue oracle they are
checked against, higher-genus moments read off correlator tables, and the
singular loci in kappa and u.

Moments are normalized so that <Tr U^k>^(0) -> 1 as u -> 0.
"""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np
from scipy import special

from src.core.config import settings
from src.core.exceptions import DomainError, QuadratureFailureError
from src.core.logging import get_logger
from src.models.curves import RationalCurveParam
from src.models.recursion import CorrelatorTable
from src.models.reports import MomentRequest, MomentRow, SingularityLocus
from src.services.spectral_curve_service import SpectralCurveService, solve_kappa
from src.services.toporec_service import ToporecService

logger = get_logger(__name__)


def hyp2f1_terminating(a: int, b: float, c: float, z: float) -> float:
    """2F1(a, b; c; z) for a nonpositive integer a, summed term by term."""
    if a > 0 or a != int(a):
        raise DomainError(f"terminating 2F1 needs a nonpositive integer first parameter, got {a}")
    term, total = 1.0, 1.0
    for i in range(-int(a)):
        term *= (a + i) * (b + i) / ((c + i) * (i + 1)) * z
        total += term
    return total


def _g_coefficient_hypergeometric(n: float, m: int, kappa: float) -> float:
    """[s^m] of (1 - k^2 s)^n (k^2 - s)^(-n-1) - (1 - k^2 s)^(n-1) (k^2 - s)^(-n)."""
    k2, k4 = kappa**2, kappa**4
    first = k2 ** (-n - 1 - m) * special.binom(n + m, m) * hyp2f1_terminating(-m, -n, -n - m, k4)
    second = k2 ** (-n - m) * special.binom(n + m - 1, m) * hyp2f1_terminating(-m, 1 - n, 1 - n - m, k4)
    return float(first - second)


def _g_coefficient_binomial(n: float, m: int, kappa: float) -> float:
    """The same coefficient by the explicit binomial convolution."""
    k2 = kappa**2
    total = 0.0
    for i in range(m + 1):
        total += special.binom(n, i) * (-k2) ** i * special.binom(n + m - i, m - i) * k2 ** (-n - 1 - (m - i))
        total -= special.binom(n - 1, i) * (-k2) ** i * special.binom(n + m - 1 - i, m - i) * k2 ** (-n - (m - i))
    return float(total)


def _odd_even_power_parts(p: int, m: int, kappa: float, hypergeometric: bool = True) -> tuple[float, float]:
    """T1 = 2F1(-m, 1/2 - m/p; 1; 1 - k^4) and T2 = 2F1(1 - m, 1/2 - m/p; 1; 1 - k^4)."""
    alpha = m / p - 0.5
    z = 1 - kappa**4
    if hypergeometric:
        return hyp2f1_terminating(-m, -alpha, 1, z), hyp2f1_terminating(1 - m, -alpha, 1, z)
    t1 = sum(special.binom(m, i) * special.binom(alpha, i) * z**i for i in range(m + 1))
    t2 = sum(special.binom(m - 1, i) * special.binom(alpha, i) * z**i for i in range(m))
    return float(t1), float(t2)


def beta(p: int, kappa):
    """beta(k) = (k^2 + 1)((p + 1) - (p - 1) k^2) / k^2, the square of z_+^(p/2) + z_+^(-p/2)."""
    k2 = kappa * kappa
    return (k2 + 1) * ((p + 1) - (p - 1) * k2) / k2


def beta2(p: int, kappa):
    """beta_2(k) = (k^4 - 1)((p + 1) k^4 - (p - 1)) / k^4."""
    k4 = kappa**4
    return (k4 - 1) * ((p + 1) * k4 - (p - 1)) / k4


def _dlog_minus_y(curve: RationalCurveParam, z: np.ndarray) -> np.ndarray:
    """d ln(-y) / dz with -y = (h - k)(k h + 1) / ((k h - 1)(h + k))."""
    k = curve.kappa
    power = curve.p // 2 if curve.family == "even" else curve.p
    h = z**power
    dh = power * z ** (power - 1)
    return (1 / (h - k) + k / (k * h + 1) - k / (k * h - 1) - 1 / (h + k)) * dh


class InvariantsService:
    """Service for planar and higher-genus fiber-knot invariants."""

    def __init__(self, curves: SpectralCurveService | None = None, nodes: int | None = None):
        self.curves = curves or SpectralCurveService()
        self.nodes = nodes or 2 * settings.QUAD_NODES

    def planar_moment_even(self, p: int, u: float, m: int) -> float:
        """
        <Tr U^(p(m + 1/2))>^(0) for p even.

        Equals (2 p k / u (2m + 1)) [s^m] G(s) with n = p(2m + 1)/2, written as
        two terminating 2F1 in k^4.

        Args:
            p: Even order of the third fiber
            u: Coupling, u > 0
            m: Index, m >= 0

        Returns:
            The planar moment
        """
        if p < 2 or p % 2:
            raise DomainError(f"planar_moment_even needs an even p >= 2, got {p}")
        if u <= 0 or m < 0:
            raise DomainError(f"need u > 0 and m >= 0, got u={u}, m={m}")
        kappa = solve_kappa(p, u)
        return self._even_formula(p, u, m, kappa)

    @staticmethod
    def _even_formula(p: int, u: float, m: int, kappa: float, hypergeometric: bool = True) -> float:
        n = p * (2 * m + 1) / 2
        coefficient = (_g_coefficient_hypergeometric if hypergeometric else _g_coefficient_binomial)(n, m, kappa)
        return 2 * p * kappa / (u * (2 * m + 1)) * coefficient

    def planar_moment_odd(self, p: int, u: float, k: int) -> float:
        """
        <Tr U^k>^(0) for p odd, k >= 1.

        Even k = 2m reads the expansion at the zero of x^2; the result is
        (p^2 / u m) k^(-2m(1 + 1/p)) [T1 - k^2 T2] and gives the planar HOMFLY
        of K_p at m = 1. Odd k reads the expansion at z = 0, where only
        k = p(2j + 1) survives; it continues the even-p formula to odd p at
        equal kappa.
        """
        if p < 3 or p % 2 == 0:
            raise DomainError(f"planar_moment_odd needs an odd p >= 3, got {p}")
        if u <= 0 or k < 1:
            raise DomainError(f"need u > 0 and k >= 1, got u={u}, k={k}")
        kappa = solve_kappa(p, u)
        if k % 2 == 0:
            return self._odd_even_power(p, u, k // 2, kappa)
        if k % (2 * p) != p:
            return 0.0
        return self._even_formula(p, u, (k // p - 1) // 2, kappa)

    @staticmethod
    def _odd_even_power(p: int, u: float, m: int, kappa: float, hypergeometric: bool = True) -> float:
        t1, t2 = _odd_even_power_parts(p, m, kappa, hypergeometric)
        return p * p / (u * m) * kappa ** (-2 * m * (1 + 1 / p)) * (t1 - kappa**2 * t2)

    def planar_homfly_kp(self, p: int, u: float) -> float:
        """Planar HOMFLY-PT of the knot along the fiber of order p, p odd."""
        k = solve_kappa(p, u)
        return p * (1 - k**2) / (2 * u * k ** (2 / p)) * (k**-2 * (2 + p) + 2 - p)

    def planar_homfly_k2(self, p: int, u: float) -> float:
        """Planar HOMFLY-PT of the knot along a fiber of order 2, p even."""
        k = solve_kappa(p, u)
        return 2 * p / u * k ** (-p) * (1 / k - k)

    def planar_moment(self, p: int, u: float, k: int) -> float:
        """<Tr U^k>^(0) for any integer k, zero where the sheet carries no such power."""
        if k == 0:
            return 1.0
        k = abs(k)
        if p % 2:
            return self.planar_moment_odd(p, u, k)
        if (2 * k) % p or (2 * k // p) % 2 == 0:
            return 0.0
        return self.planar_moment_even(p, u, (2 * k // p - 1) // 2)

    def _expansion_point(self, curve: RationalCurveParam, k: int) -> tuple[complex | None, float, Callable]:
        """Center (None for z = infinity), circle radius and integrand of the residue oracle."""
        kappa, p, u = curve.kappa, curve.p, curve.u
        if curve.family == "even":
            weight = p / u

            def integrand(z):
                return weight * curve.x(z) ** k / k * _dlog_minus_y(curve, z)

            if k > 0:
                return None, 2.0 * kappa ** (-2 / p), integrand
            return 0j, 0.5 * kappa ** (2 / p), integrand
        if k % 2:

            def integrand(z):
                x = np.sqrt((1 - kappa**2 * z ** (2 * p)) / (kappa**2 - z ** (2 * p))) / z
                return -p / u * x**k / k * _dlog_minus_y(curve, z)

            return 0j, 0.5 * kappa ** (1 / p), integrand
        m = k // 2
        center = complex(kappa ** (-1 / p))
        gap = min(2 * kappa ** (-1 / p) * np.sin(np.pi / (2 * p)), kappa ** (-1 / p) - kappa ** (1 / p))

        def integrand(z):
            return -p * p / (u * m) * curve.coordinate(z) ** (-m) * _dlog_minus_y(curve, z)

        return center, 0.5 * gap, integrand

    @staticmethod
    def _singular_points(curve: RationalCurveParam) -> np.ndarray:
        """Zeros and poles of x and y away from the expansion points."""
        k, p = curve.kappa, curve.p
        power = p // 2 if curve.family == "even" else p
        roots = [np.roots([1] + [0] * (power - 1) + [-c]) for c in (k, -k, 1 / k, -1 / k)]
        return np.concatenate(roots)

    def lagrange_oracle(self, curve: RationalCurveParam, k: int, nodes: int | None = None) -> float:
        """
        Planar moment as a residue of (x^k / k) d ln y, by trapezoid quadrature on a small circle.

        For the even family the expansion point is z = infinity (k > 0) or z = 0
        (k < 0); for the odd family it is z = 0 (odd k) or the zero
        z = k^(-1/p) of x^2 (even k).

        Raises:
            QuadratureFailureError: the circle passes too close to another
                singularity, or halving the nodes changes the value
        """
        if k == 0:
            return 0.0
        if curve.family == "odd" and k < 0:
            k = -k
        center, radius, integrand = self._expansion_point(curve, k)
        count = nodes or self.nodes
        theta = 2 * np.pi * np.arange(count) / count
        base = 0j if center is None else center
        z = base + radius * np.exp(1j * theta)
        points = self._singular_points(curve)
        clearance = np.min(np.abs(np.abs(points - base) - radius))
        if clearance < 0.05 * radius:
            raise QuadratureFailureError(f"oracle circle of radius {radius:.3g} passes {clearance:.2e} from a singularity")
        values = integrand(z) * (z - base)
        residue, coarse = values.mean(), values[::2].mean()
        if center is None:
            residue, coarse = -residue, -coarse
        if abs(residue - coarse) > 1e-10 * max(1.0, abs(residue)):
            raise QuadratureFailureError(f"oracle quadrature unconverged: {residue} vs {coarse}")
        return float(residue.real)

    def higher_moment(self, table: CorrelatorTable, g: int, k: int) -> float:
        """
        <Tr U^k>^(g) from the residue of x^k omega_1^(g) at x = infinity (k > 0) or x = 0 (k < 0).

        Raises:
            PrecisionFailureError: the table truncation is too low for this k
        """
        value = ToporecService(table.curve, table.order).moment(table, g, k)
        return float(value.real)

    def moment(self, request: MomentRequest, table: CorrelatorTable | None = None) -> float:
        if request.g == 0:
            return self.planar_moment(request.p, request.u, request.k)
        if table is None:
            service = ToporecService.for_curve(self.curves.curve_even(request.p, request.u))
            table = service.correlator_table(request.g, 1)
        return self.higher_moment(table, request.g, request.k)

    def moment_table(self, p: int, u_grid: Iterable[float], g: int, ks: Iterable[int]) -> list[MomentRow]:
        """Rows (p, u, g, k, value); genus g > 0 builds one correlator table per u."""
        rows = []
        ks = list(ks)
        for u in u_grid:
            table = None
            if g > 0:
                table = ToporecService.for_curve(self.curves.curve_even(p, u)).correlator_table(g, 1)
            for k in ks:
                value = self.moment(MomentRequest(p=p, u=u, k=k, g=g), table)
                rows.append(MomentRow(p=p, u=u, g=g, k=k, value=value))
        logger.info("moment_table_built", p=p, g=g, rows=len(rows))
        return rows

    def gaussian_limit(self, p: int, u: float) -> tuple[float, float]:
        """(<Tr U^(p/2)>^(0), 1 + u/8): the first planar moment against its semicircle limit."""
        if p % 2:
            return self.planar_moment_odd(p, u, p), 1 + u / 8
        return self.planar_moment_even(p, u, 0), 1 + u / 8

    @staticmethod
    def singularity_locus(p: int) -> SingularityLocus:
        """
        kappa_* and the u-plane singularities modulo 8 i pi p^2.

        Raises:
            DomainError: p < 2
        """
        if p < 2:
            raise DomainError(f"singularity locus needs p >= 2, got {p}")
        s = (p + 1) * np.log(p + 1) + (p - 1) * np.log(p - 1)
        shift = 1j * np.pi * p * (p + 1)
        logs = -2 * p * p * (s - 2 * np.log(p))
        u_values = [
            0j,
            -4 * shift,
            complex(-2 * p * p * s),
            -2 * p * p * s - 4 * shift,
            logs - 2 * shift,
            logs - 6 * shift,
        ]
        return SingularityLocus(
            p=p,
            kappa_star=float(np.sqrt((p + 1) / (p - 1))),
            s_value=float(s),
            u_values=u_values,
            period=8j * np.pi * p * p,
        )
