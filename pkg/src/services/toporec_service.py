"""
Topological recursion service.

This service handles the recursion on rational spectral curves: deck
transformations and kernels in local charts at the branch points, correlator
tables omega_n^(g), moments read off at x = infinity and x = 0, and the
free-energy derivative by contour quadrature.

omega_n^(g) with 2g - 2 + n > 0 is stored as a tensor over the basis
chi_(b, m)(z) dz = [s^m] omega_2^(0)(a_b + s, z), which is exactly the space
the recursion kernel produces in each variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any

import numpy as np
import sympy

from src.core.config import settings
from src.core.constants import BRANCH_DEGENERACY_TOL, FLOAT_ZERO
from src.core.exceptions import (
    BranchTrackingError,
    DegenerateBranchPointError,
    DomainError,
    PrecisionFailureError,
    QuadratureFailureError,
    SeifertSpectralError,
)
from src.core.logging import get_logger
from src.models.curves import RationalCurveParam
from src.models.recursion import BasisIndex, BidifferentialTerm, CorrelatorTable, RecursionCurve
from src.models.series import FLOAT, LaurentSeries, NumberField
from src.services.spectral_curve_service import u_of_kappa

logger = get_logger(__name__)

BRANCHES = {"+": 0, "-": 1}


def _even_polynomials(p: int, kappa) -> tuple[list, list, list, list]:
    """x = z (z^p - k^2) / (k^2 z^p - 1) and y with h = z^(p/2), lowest degree first."""
    k2 = kappa * kappa
    h = p // 2
    x_num = [0] * (p + 2)
    x_num[1], x_num[p + 1] = -k2, 1
    x_den = [0] * (p + 1)
    x_den[0], x_den[p] = -1, k2
    y_num = [0] * (p + 1)
    y_num[0], y_num[h], y_num[p] = kappa, -(1 - k2), -kappa
    y_den = [0] * (p + 1)
    y_den[0], y_den[h], y_den[p] = -kappa, -(1 - k2), kappa
    return x_num, x_den, y_num, y_den


def even_recursion_curve(curve: RationalCurveParam) -> RecursionCurve:
    """
    Float recursion data of a (2,2,p even) curve.

    omega_2^(0) = sum_l (-1)^l zeta^l dz1 dz2 / (z2 - zeta^l z1)^2 with zeta = exp(2 i pi / p).
    """
    if curve.family != "even":
        raise DomainError("the recursion is implemented for the even (2,2,p) family")
    p = curve.p
    x_num, x_den, y_num, y_den = _even_polynomials(p, curve.kappa)
    rotations = [complex(np.cos(2 * np.pi * l / p), np.sin(2 * np.pi * l / p)) for l in range(p)]
    return RecursionCurve(
        field=FLOAT,
        x_num=tuple(map(complex, x_num)),
        x_den=tuple(map(complex, x_den)),
        y_num=tuple(map(complex, y_num)),
        y_den=tuple(map(complex, y_den)),
        branch_points=(complex(curve.z_plus), complex(curve.z_minus)),
        bidifferential=tuple(BidifferentialTerm((-1) ** l * r, r) for l, r in enumerate(rotations)),
        scale=p / curve.u,
        a=p,
        u=curve.u,
        label=f"(2,2,{p}) even",
    )


def even_recursion_curve_exact(p: int, kappa: Fraction) -> RecursionCurve:
    """
    Exact recursion data of a (2,2,p even) curve at rational kappa.

    Coefficients live in Q(z_+) for p = 2 and in Q(z_+, zeta_p) otherwise, where
    z_+^p is the larger root of s^2 - ((p+1) k^-2 - (p-1) k^2) s + 1.
    """
    kappa = Fraction(kappa)
    if p < 2 or p % 2:
        raise DomainError(f"even family needs an even p >= 2, got {p}")
    if not 0 < kappa < 1:
        raise DomainError(f"exact curves need a rational kappa in (0, 1), got {kappa}")
    k2 = sympy.Rational(kappa.numerator, kappa.denominator) ** 2
    b = (p + 1) / k2 - (p - 1) * k2
    disc = (1 / k2 - k2) * ((p + 1) ** 2 / k2 - (p - 1) ** 2 * k2)
    z_plus = sympy.root((b + sympy.sqrt(disc)) / 2, p)
    zeta = sympy.exp(2 * sympy.pi * sympy.I / p)
    field = NumberField(z_plus) if p == 2 else NumberField(z_plus, zeta)
    zp = field.convert(z_plus)
    rotation = field.convert(-1 if p == 2 else zeta)
    terms = tuple(BidifferentialTerm((-1) ** l * rotation**l, rotation**l) for l in range(p))
    u = u_of_kappa(p, float(kappa))
    x_num, x_den, y_num, y_den = _even_polynomials(p, kappa)
    return RecursionCurve(
        field=field,
        x_num=tuple(map(field.convert, x_num)),
        x_den=tuple(map(field.convert, x_den)),
        y_num=tuple(map(field.convert, y_num)),
        y_den=tuple(map(field.convert, y_den)),
        branch_points=(zp, field.one / zp),
        bidifferential=terms,
        scale=p / u,
        a=p,
        u=u,
        label=f"(2,2,{p}) even, kappa={kappa}",
    )


@dataclass(frozen=True)
class LocalChart:
    """Deck transformation z = a + t -> a + sigma(t) and the kernel denominator at one branch point."""

    branch: int
    point: Any
    tau: LaurentSeries
    sigma: LaurentSeries
    dsigma: LaurentSeries
    # 2 (ln y(z) - ln y(iota z)) x'(z) / x(z), valuation 2
    denominator: LaurentSeries


class ToporecService:
    """
    Service for the topological recursion on one rational spectral curve.

    Args:
        curve: Recursion data, exact or float
        order: Truncation order T of the local series; derived from the
            requested table when omitted
    """

    def __init__(self, curve: RecursionCurve, order: int | None = None):
        self.curve = curve
        self.field = curve.field
        self.order = order
        self._reset()

    @classmethod
    def for_curve(cls, curve: RationalCurveParam, order: int | None = None) -> ToporecService:
        return cls(even_recursion_curve(curve), order)

    @classmethod
    def exact_even(cls, p: int, kappa: Fraction, order: int | None = None) -> ToporecService:
        return cls(even_recursion_curve_exact(p, kappa), order)

    @staticmethod
    def default_order(g_max: int, n_max: int) -> int:
        return 2 * (2 * g_max + n_max) + 8

    def _reset(self) -> None:
        self._charts: dict[int, LocalChart] = {}
        self._kernels: dict[tuple[int, int], LaurentSeries] = {}
        self._locals: dict[tuple, LaurentSeries] = {}
        self._factors: dict[tuple, dict] = {}
        self._tensors: dict[tuple[int, int], dict] = {}

    @property
    def truncation(self) -> int:
        return self.order or self.default_order(1, 1)

    def _branch(self, branch) -> int:
        if branch in BRANCHES:
            return BRANCHES[branch]
        if branch in range(len(self.curve.branch_points)):
            return int(branch)
        raise DomainError(f"unknown branch {branch!r}, expected '+', '-' or an index")

    def _tolerance(self, scale) -> float:
        return 0.0 if self.field.exact else FLOAT_ZERO * max(1.0, abs(complex(scale)))

    def _rational_series(self, num, den, center, precision: int) -> LaurentSeries:
        return LaurentSeries.polynomial(num, self.field, precision, center) / LaurentSeries.polynomial(
            den, self.field, precision, center
        )

    def _basis_value(self, index: BasisIndex, z) -> Any:
        """chi_index(z) in the coefficient field."""
        branch, m = index
        a = self.curve.branch_points[branch]
        z = self.field.convert(z)
        total = self.field.zero
        for term in self.curve.bidifferential:
            gap = z - term.rotation * a
            total = total + term.coefficient * term.rotation**m * (m + 1) / gap ** (m + 2)
        return total

    # local charts

    def deck_series(self, branch, order: int | None = None) -> LaurentSeries:
        """
        tau(t) with x(a + t) = x(a - t + tau(t)) to order T.

        Args:
            branch: '+', '-' or a branch-point index
            order: Highest power of t kept

        Returns:
            Series sum_{k=2}^{T} tau_k t^k

        Raises:
            DegenerateBranchPointError: x''(a) = 0
        """
        alpha = self._branch(branch)
        order = order or self.truncation
        a = self.curve.branch_points[alpha]
        xs = self._rational_series(self.curve.x_num, self.curve.x_den, a, order + 2)
        c0, c2 = xs.coefficient(0), xs.coefficient(2)
        f = (xs - c0).with_valuation(2, self._tolerance(c0))
        if not c2 or (not self.field.exact and abs(c2) <= BRANCH_DEGENERACY_TOL * max(1.0, abs(c0))):
            raise DegenerateBranchPointError(f"x'' vanishes at branch point {self.field.to_complex(a)}")
        minus_one = -self.field.one
        taus: list = []
        for m in range(2, order + 1):
            sigma = LaurentSeries.from_coefficients([minus_one] + taus, self.field, 1, m + 2)
            head = f.truncated(m + 2)
            residual = (head - head.compose(sigma)).coefficient(m + 1)
            taus.append(-residual / (c2 * 2))
        return LaurentSeries.from_coefficients(taus, self.field, 2, order + 1, base=a)

    def _chart(self, alpha: int) -> LocalChart:
        if alpha in self._charts:
            return self._charts[alpha]
        order = self.truncation
        a = self.curve.branch_points[alpha]
        tau = self.deck_series(alpha, order)
        t = LaurentSeries.variable(self.field, order + 1)
        sigma = tau - t
        xs = self._rational_series(self.curve.x_num, self.curve.x_den, a, order + 2)
        ys = self._rational_series(self.curve.y_num, self.curve.y_den, a, order + 2)
        dlog_x = (xs.derivative() / xs).with_valuation(1, self._tolerance(1))
        log_ratio = (ys / ys.compose(sigma)).log().with_valuation(1, self._tolerance(1))
        chart = LocalChart(
            branch=alpha,
            point=a,
            tau=tau,
            sigma=sigma,
            dsigma=sigma.derivative(),
            denominator=log_ratio * dlog_x * 2,
        )
        logger.debug("chart_built", label=self.curve.label, branch=alpha, order=order)
        self._charts[alpha] = chart
        return chart

    def _kernel(self, alpha: int, m: int) -> LaurentSeries:
        """Coefficient of chi_(alpha, m)(z_0) in K(z_0, a + t)."""
        key = (alpha, m)
        if key not in self._kernels:
            chart = self._chart(alpha)
            t = LaurentSeries.variable(self.field, self.truncation + 1)
            numerator = (t ** (m + 1) - chart.sigma ** (m + 1)) / (m + 1)
            self._kernels[key] = numerator / chart.denominator
        return self._kernels[key]

    def kernel_numerator(self, branch, z0, symmetrize: bool = False) -> LaurentSeries:
        """
        int_{iota(z)}^{z} omega_2^(0)(., z_0) in the local variable t.

        With ``symmetrize`` the form is first replaced by its average with its
        pullback under iota, which integrates to zero between z and iota(z).
        """
        alpha = self._branch(branch)
        chart = self._chart(alpha)
        order = self.truncation
        form = LaurentSeries.from_coefficients(
            [self._basis_value((alpha, m), z0) for m in range(order)], self.field, 0, order
        )
        if symmetrize:
            form = (form + form.compose(chart.sigma) * chart.dsigma) / 2
        primitive = form.integral()
        return primitive - primitive.compose(chart.sigma)

    def recursion_kernel(self, branch, z0) -> LaurentSeries:
        """
        K(z_0, a + t) = (1/2) int_{iota z}^{z} omega_2^(0)(., z_0) / (omega_1^(0)(z) - omega_1^(0)(iota z)).

        Unit scale; the leading order is t^-1.
        """
        alpha = self._branch(branch)
        total = None
        for m in range(self.truncation):
            term = self._kernel(alpha, m) * self._basis_value((alpha, m), z0)
            total = term if total is None else total + term
        return total

    def _local(self, alpha: int, index: BasisIndex, iota: bool = False) -> LaurentSeries:
        """chi_index(a + t), or chi_index(iota(a + t)) d iota / dt."""
        key = (alpha, index, iota)
        if key in self._locals:
            return self._locals[key]
        if iota:
            chart = self._chart(alpha)
            series = self._local(alpha, index).compose(chart.sigma) * chart.dsigma
        else:
            beta, m = index
            order = self.truncation
            a, b = self.curve.branch_points[alpha], self.curve.branch_points[beta]
            series = None
            # the first bidifferential term is the untwisted one, singular on the diagonal
            for l, term in enumerate(self.curve.bidifferential):
                weight = term.coefficient * term.rotation**m * (m + 1)
                if l == 0 and alpha == beta:
                    part = LaurentSeries.from_coefficients([weight], self.field, -(m + 2), order)
                else:
                    shift = LaurentSeries.from_coefficients([a - term.rotation * b, self.field.one], self.field, 0, order)
                    part = shift ** (-(m + 2)) * weight
                series = part if series is None else series + part
        self._locals[key] = series
        return series

    def _diagonal(self, alpha: int) -> LaurentSeries:
        """omega_2^(0)(a + t, iota(a + t)) / dt^2."""
        key = (alpha, "diagonal")
        if key not in self._locals:
            chart = self._chart(alpha)
            a = chart.point
            t = LaurentSeries.variable(self.field, self.truncation + 1)
            total = None
            for l, term in enumerate(self.curve.bidifferential):
                gap = chart.sigma - t if l == 0 else chart.sigma - t * term.rotation + a * (self.field.one - term.rotation)
                part = gap ** (-2) * term.coefficient
                total = part if total is None else total + part
            self._locals[key] = total * chart.dsigma
        return self._locals[key]

    # recursion

    def _factor(self, alpha: int, g: int, n: int, iota: bool) -> dict[tuple, LaurentSeries]:
        """omega_n^(g)(z or iota z, z_J) in t, keyed by the basis indices of z_J."""
        key = (alpha, g, n, iota)
        if key in self._factors:
            return self._factors[key]
        out: dict[tuple, LaurentSeries] = {}
        if (g, n) == (0, 2):
            chart = self._chart(alpha)
            t = LaurentSeries.variable(self.field, self.truncation + 1)
            base = chart.sigma if iota else t
            for m in range(self.truncation):
                series = base**m * chart.dsigma if iota else base**m
                out[((alpha, m),)] = series
        else:
            for index, coeff in self._tensor(g, n).items():
                series = self._local(alpha, index[0], iota) * coeff
                rest = index[1:]
                out[rest] = out[rest] + series if rest in out else series
        self._factors[key] = out
        return out

    def _bracket(self, alpha: int, g: int, n: int) -> dict[tuple, LaurentSeries]:
        """omega_{n+1}^(g-1)(z, iota z, z_I) + the starred sum of products, keyed by z_I indices."""
        terms: dict[tuple, LaurentSeries] = {}

        def add(key: tuple, series: LaurentSeries) -> None:
            terms[key] = terms[key] + series if key in terms else series

        if g >= 1:
            if (g - 1, n + 1) == (0, 2):
                add((), self._diagonal(alpha))
            else:
                for index, coeff in self._tensor(g - 1, n + 1).items():
                    add(index[2:], self._local(alpha, index[0]) * self._local(alpha, index[1], iota=True) * coeff)
        free = tuple(range(n - 1))
        for h in range(g + 1):
            for size in range(n):
                if (h == 0 and size == 0) or (h == g and size == n - 1):
                    continue
                first = self._factor(alpha, h, size + 1, iota=False)
                second = self._factor(alpha, g - h, n - size, iota=True)
                for subset in combinations(free, size):
                    others = [i for i in free if i not in subset]
                    for k1, s1 in first.items():
                        for k2, s2 in second.items():
                            slots: list = [None] * (n - 1)
                            for slot, index in zip(subset, k1):
                                slots[slot] = index
                            for slot, index in zip(others, k2):
                                slots[slot] = index
                            add(tuple(slots), s1 * s2)
        return terms

    def _tensor(self, g: int, n: int) -> dict[tuple[BasisIndex, ...], Any]:
        if (g, n) in self._tensors:
            return self._tensors[(g, n)]
        if g < 0 or n < 1 or 2 * g - 2 + n <= 0:
            raise SeifertSpectralError(f"no recursion tensor for (g, n) = ({g}, {n})")
        result: dict[tuple[BasisIndex, ...], Any] = {}
        for alpha in range(len(self.curve.branch_points)):
            for rest, series in self._bracket(alpha, g, n).items():
                series = series.normalized()
                for m in range(-series.valuation + 1):
                    value = (self._kernel(alpha, m) * series).residue()
                    if value:
                        key = ((alpha, m),) + rest
                        result[key] = result[key] + value if key in result else value
        self._tensors[(g, n)] = result
        return result

    def correlator_table(self, g_max: int, n_max: int) -> CorrelatorTable:
        """
        All omega_n^(g) with g <= g_max, n <= n_max and 2g - 2 + n > 0.

        The truncation order doubles when a residue falls beyond the known
        coefficients, up to TRUNCATION_RETRIES times.

        Raises:
            PrecisionFailureError: the residues stay undetermined after the retries
        """
        if self.order is None:
            self.order = self.default_order(g_max, n_max)
        targets = [(g, n) for g in range(g_max + 1) for n in range(1, n_max + 1) if 2 * g - 2 + n > 0]
        for attempt in range(settings.TRUNCATION_RETRIES + 1):
            try:
                for g, n in targets:
                    self._tensor(g, n)
                break
            except PrecisionFailureError:
                if attempt == settings.TRUNCATION_RETRIES:
                    raise PrecisionFailureError(
                        f"residues undetermined at truncation order {self.order}; raise the order"
                    ) from None
                self.order *= 2
                self._reset()
                logger.warning("truncation_raised", label=self.curve.label, order=self.order)
        table = CorrelatorTable(
            curve=self.curve,
            order=self.order,
            entries={gn: dict(tensor) for gn, tensor in sorted(self._tensors.items())},
        )
        logger.info(
            "correlator_table_built",
            label=self.curve.label,
            field=self.field.name,
            g_max=g_max,
            n_max=n_max,
            order=self.order,
            entries=sum(len(t) for t in table.entries.values()),
        )
        return table

    def omega(self, g: int, n: int, points, table: CorrelatorTable | None = None) -> complex:
        """omega_n^(g)(points) / dz_0 ... dz_{n-1}."""
        if table is None or not table.covers(g, n):
            table = self.correlator_table(g, n)
        return table.evaluate(g, n, points)

    # moments

    def _expansion_point(self, k: int):
        """x, and chi or omega_1^(0) factors, in the local coordinate at z = infinity (k > 0) or z = 0 (k < 0)."""
        relative = abs(k) + 6
        if k > 0:
            def local(coeffs):
                degree = len(coeffs) - 1
                return LaurentSeries.polynomial_at_infinity(coeffs, self.field, -degree + relative)
        else:
            def local(coeffs):
                return LaurentSeries.polynomial(coeffs, self.field, relative)
        return local, relative

    def moment_coefficient(self, table: CorrelatorTable, g: int, k: int):
        """
        Unit-scale <Tr U^k>^(g): -Res x^k omega_1^(g) at z = infinity for k > 0, at z = 0 for k < 0.

        Returns:
            A field element; multiply by scale^(1 - 2g) for the moment itself
        """
        if k == 0:
            raise DomainError("the k = 0 moment is the normalization, not a residue")
        local, relative = self._expansion_point(k)
        x = local(self.curve.x_num) / local(self.curve.x_den)
        if g == 0:
            minus_y = -(local(self.curve.y_num) / local(self.curve.y_den))
            form = minus_y.log() * x.derivative() / x
        else:
            form = None
            w = LaurentSeries.variable(self.field, relative + 1)
            for (index,), coeff in table.tensor(g, 1).items():
                beta, m = index
                a = self.curve.branch_points[beta]
                for term in self.curve.bidifferential:
                    weight = term.coefficient * term.rotation**m * (m + 1) * coeff
                    if k > 0:
                        # chi(1/w) d(1/w) = -w^m (1 - r a w)^-(m+2) dw
                        shift = LaurentSeries.from_coefficients(
                            [self.field.one, -term.rotation * a], self.field, 0, relative + 1
                        )
                        part = -(shift ** (-(m + 2))) * w**m * weight
                    else:
                        shift = LaurentSeries.from_coefficients(
                            [-term.rotation * a, self.field.one], self.field, 0, relative + 1
                        )
                        part = shift ** (-(m + 2)) * weight
                    form = part if form is None else form + part
        return -(x**k * form).residue()

    def moment(self, table: CorrelatorTable, g: int, k: int) -> complex:
        value = self.field.to_complex(self.moment_coefficient(table, g, k))
        return value * self.curve.scale ** (1 - 2 * g)

    def sqrt_beta_decomposition(self, value) -> tuple[Fraction, Fraction]:
        """
        Rational (c1, c2) with value = c1 + c2 sqrt(beta), sqrt(beta) = z_+^(p/2) + z_+^(-p/2).

        Raises:
            DomainError: float curve, or value outside Q[sqrt(beta)]
        """
        if not self.field.exact:
            raise DomainError("membership tests need an exact curve")
        h = self.curve.a // 2
        zp = self.curve.branch_points[0]
        root = zp**h + zp ** (-h)
        columns = [self.field.vector(self.field.one), self.field.vector(root)]
        target = self.field.vector(value)
        matrix = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in zip(*columns)])
        rhs = sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in target])
        try:
            solution, params = matrix.gauss_jordan_solve(rhs)
        except ValueError:
            raise DomainError("value does not lie in Q(kappa^2)[sqrt(beta)]") from None
        if params.shape[0]:
            raise DomainError("1 and sqrt(beta) are linearly dependent in this field")
        c1, c2 = (Fraction(int(s.p), int(s.q)) for s in solution)
        return c1, c2

    # free energy

    def _lift(self, points: np.ndarray, start: complex, substeps: int = 8) -> np.ndarray:
        """Physical-sheet preimages of x = exp(s) along a closed path of s values."""
        curve = self.curve.numeric
        num = np.asarray(curve.x_num, dtype=complex)[::-1]
        den = np.asarray(curve.x_den, dtype=complex)[::-1]

        def roots(s: complex) -> np.ndarray:
            return np.roots(np.polysub(num, np.exp(s) * den))

        first = roots(start)
        real = first[np.abs(first.imag) <= 1e-9 * np.maximum(1.0, np.abs(first))]
        if not len(real):
            raise BranchTrackingError(f"no real preimage of x = exp({start.real:.6g})")
        current = real[np.argmax(real.real)]
        lifted = np.empty(len(points), dtype=complex)
        previous = start
        for i, s in enumerate(points):
            for frac in np.arange(1, substeps + 1) / substeps:
                candidates = roots(previous + (s - previous) * frac)
                current = candidates[np.argmin(np.abs(candidates - current))]
            lifted[i] = current
            previous = s
        return lifted

    def contour_integral(
        self,
        table: CorrelatorTable,
        g: int,
        radius: float = 0.5,
        center: float = 0.0,
        nodes: int | None = None,
    ) -> complex:
        """
        (1 / 2 i pi) oint ds (a^2 s^2 / 2) W_1^(g)(e^s) around the cut, s = ln x.

        The contour is the ellipse with foci at the cut ends shifted by ``center``,
        s = center + L (r e^(i theta) + e^(-i theta) / r) / 2 with r = 1 + radius and
        L = ln(gamma), lifted to the physical sheet by continuation from x > gamma.

        Raises:
            QuadratureFailureError: the trapezoid rule has not converged, or the
                contour reaches the translated cuts at Im s = +-2 pi
        """
        if g < 1:
            raise DomainError(f"free-energy derivatives start at g = 1, got {g}")
        table.tensor(g, 1)
        curve = self.curve.numeric
        half = float(np.log(curve.gamma))
        r = 1.0 + radius
        if radius <= 0 or abs(center) >= half * ((r + 1 / r) / 2 - 1):
            raise DomainError(f"contour (radius={radius}, center={center}) does not enclose the cut")
        if half * (r - 1 / r) / 2 >= np.pi:
            raise QuadratureFailureError(f"contour radius {radius} reaches the translated cuts")
        count = nodes or settings.CONTOUR_NODES
        theta = 2 * np.pi * np.arange(count) / count
        s = center + half * (r * np.exp(1j * theta) + np.exp(-1j * theta) / r) / 2
        ds = 1j * half * (r * np.exp(1j * theta) - np.exp(-1j * theta) / r) / 2
        z = self._lift(s, complex(s[0]))
        w = np.array([table.evaluate(g, 1, (zi,)) for zi in z]) / curve.dlog_x(z)
        integrand = curve.a**2 * s**2 / 2 * w * ds
        value = complex(integrand.mean() / 1j)
        coarse = complex(integrand[::2].mean() / 1j)
        if abs(value - coarse) > 1e-8 * max(1.0, abs(value)):
            raise QuadratureFailureError(
                f"contour quadrature unconverged: {value} vs {coarse} with {count} and {count // 2} nodes"
            )
        logger.info("contour_integral", label=self.curve.label, g=g, radius=radius, center=center, value=str(value))
        return value

    def free_energy_derivative(self, table: CorrelatorTable, g: int, radius: float = 0.5, center: float = 0.0) -> float:
        """u^2 dF^(g)/du."""
        return self.contour_integral(table, g, radius, center).real
