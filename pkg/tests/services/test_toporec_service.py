"""Tests for the topological recursion on rational spectral curves."""

from fractions import Fraction

import numpy as np
import pytest

from src.core.exceptions import DomainError
from src.models.recursion import BidifferentialTerm, RecursionCurve
from src.models.series import FLOAT
from src.services.spectral_curve_service import SpectralCurveService, u_of_kappa
from src.services.toporec_service import (
    ToporecService,
    even_recursion_curve,
    even_recursion_curve_exact,
)


@pytest.fixture(scope="module")
def joukowski():
    """x = z + 1/z with branch points +-1 and the plain Bergman kernel."""
    curve = RecursionCurve(
        field=FLOAT,
        x_num=(1, 0, 1),
        x_den=(0, 1),
        y_num=(0, 1),
        y_den=(1,),
        branch_points=(1, -1),
        bidifferential=(BidifferentialTerm(1, 1),),
        label="joukowski",
    )
    return ToporecService(curve, order=10)


@pytest.fixture(scope="module")
def p2_service():
    return ToporecService.for_curve(SpectralCurveService().curve_even(2, 1.0))


@pytest.fixture(scope="module")
def p2_table(p2_service):
    return p2_service.correlator_table(1, 3)


class TestRecursionCurves:

    def test_even_curve_data(self):
        curve = SpectralCurveService().curve_even(4, 1.0)
        data = even_recursion_curve(curve)
        assert data.a == 4
        assert data.scale == pytest.approx(4.0)
        assert len(data.bidifferential) == 4
        assert data.branch_points[0] == pytest.approx(complex(curve.z_plus))
        assert data.gamma == pytest.approx(curve.gamma, rel=1e-12)

    def test_odd_curve_rejected(self):
        with pytest.raises(DomainError):
            even_recursion_curve(SpectralCurveService().curve_odd(3, 1.0))

    @pytest.mark.parametrize("p,kappa", [(3, Fraction(1, 2)), (2, Fraction(1)), (4, Fraction(0))])
    def test_exact_curve_domain(self, p, kappa):
        with pytest.raises(DomainError):
            even_recursion_curve_exact(p, kappa)

    def test_exact_matches_float(self):
        exact = even_recursion_curve_exact(2, Fraction(9, 10))
        numeric = even_recursion_curve(SpectralCurveService().curve_even(2, u_of_kappa(2, 0.9)))
        for z in (2.5, 0.3 + 0.4j):
            assert exact.numeric.x(z) == pytest.approx(numeric.x(z), rel=1e-10)
            assert exact.numeric.y(z) == pytest.approx(numeric.y(z), rel=1e-10)
        assert complex(exact.numeric.branch_points[0]) == pytest.approx(numeric.branch_points[0], rel=1e-10)


class TestDeckSeries:

    def test_joukowski_coefficients(self, joukowski):
        # iota(z) = 1/z, so tau(t) = t^2 / (1 + t)
        tau = joukowski.deck_series("+", order=8)
        assert tau.valuation == 2
        for k in range(2, 9):
            assert tau.coefficient(k) == pytest.approx((-1) ** k, abs=1e-12)

    def test_joukowski_minus_branch(self, joukowski):
        # at z = -1 the involution gives tau(t) = -t^2 / (1 - t)
        tau = joukowski.deck_series("-", order=6)
        for k in range(2, 7):
            assert tau.coefficient(k) == pytest.approx(-1.0, abs=1e-12)

    def test_deck_residual(self, p2_service):
        curve = p2_service.curve
        tau = p2_service.deck_series("+", order=12)
        a = curve.branch_points[0]
        for t in (1e-2, -1e-2, 1e-2j):
            lhs = curve.x(a + t)
            rhs = curve.x(a - t + tau.evaluate(t))
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_unknown_branch(self, p2_service):
        with pytest.raises(DomainError):
            p2_service.deck_series("left")


class TestKernel:

    def test_leading_order(self, p2_service):
        kernel = p2_service.recursion_kernel("+", 2.7 + 0.1j).normalized()
        assert kernel.valuation == -1

    def test_symmetrized_numerator_vanishes(self, p2_service):
        numerator = p2_service.kernel_numerator("+", 2.7 + 0.1j, symmetrize=True)
        scale = max(abs(c) for c in p2_service.kernel_numerator("+", 2.7 + 0.1j).coeffs)
        assert all(abs(c) <= 1e-10 * scale for c in numerator.coeffs)

    def test_plain_numerator_leading_term(self, p2_service):
        numerator = p2_service.kernel_numerator("-", -0.4j).normalized()
        assert numerator.valuation == 1


class TestCorrelatorTable:

    def test_covers(self, p2_table):
        assert p2_table.covers(0, 3)
        assert p2_table.covers(1, 1)
        assert p2_table.covers(0, 2)
        assert not p2_table.covers(2, 1)

    def test_three_point_symmetry(self, p2_table):
        points = (1.7, -0.6 + 0.3j, 2.2j)
        base = p2_table.evaluate(0, 3, points)
        assert abs(base) > 0
        for perm in ((1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0)):
            permuted = tuple(points[i] for i in perm)
            assert p2_table.evaluate(0, 3, permuted) == pytest.approx(base, rel=1e-9)

    def test_three_point_leading_poles_only(self, p2_table):
        # omega_3^(0) only involves the m = 0 basis element in each variable
        tensor = p2_table.numeric_entries[(0, 3)]
        largest = max(abs(c) for c in tensor.values())
        for key, c in tensor.items():
            if any(m > 0 for _, m in key):
                assert abs(c) <= 1e-8 * largest

    def test_omega_uses_table(self, p2_service, p2_table):
        value = p2_service.omega(1, 1, (2.5,), p2_table)
        assert value == pytest.approx(p2_table.evaluate(1, 1, (2.5,)))

    def test_wrong_point_count(self, p2_table):
        with pytest.raises(DomainError):
            p2_table.evaluate(1, 1, (2.5, 1.0))

    def test_uncovered_tensor(self, p2_table):
        with pytest.raises(DomainError):
            p2_table.tensor(3, 1)

    def test_to_dict(self, p2_table):
        record = p2_table.to_dict()
        assert record["field"] == "float"
        assert "1,1" in record["tensors"]
        assert "0,3" in record["tensors"]


class TestMoments:

    def test_zero_index(self, p2_service, p2_table):
        with pytest.raises(DomainError):
            p2_service.moment(p2_table, 0, 0)

    def test_planar_moment_positive(self, p2_service, p2_table):
        value = p2_service.moment(p2_table, 0, 1)
        assert abs(value.imag) <= 1e-10 * abs(value)
        assert value.real > 1.0

    def test_genus_one_real(self, p2_service, p2_table):
        value = p2_service.moment(p2_table, 1, 1)
        assert abs(value.imag) <= 1e-8 * max(1.0, abs(value))

    def test_inverse_power_matches(self, p2_service, p2_table):
        # S is distributed like S^-1
        assert p2_service.moment(p2_table, 0, -1) == pytest.approx(p2_service.moment(p2_table, 0, 1), rel=1e-8)

    def test_decomposition_needs_exact_curve(self, p2_service):
        with pytest.raises(DomainError):
            p2_service.sqrt_beta_decomposition(1.0)


class TestFreeEnergy:

    def test_real_and_contour_independent(self, p2_service, p2_table):
        inner = p2_service.contour_integral(p2_table, 1, radius=0.5)
        outer = p2_service.contour_integral(p2_table, 1, radius=0.8)
        assert abs(inner.imag) <= 1e-8 * max(1.0, abs(inner))
        assert inner.real == pytest.approx(outer.real, rel=1e-7, abs=1e-10)
        assert p2_service.free_energy_derivative(p2_table, 1) == pytest.approx(inner.real)

    def test_genus_zero_rejected(self, p2_service, p2_table):
        with pytest.raises(DomainError):
            p2_service.contour_integral(p2_table, 0)

    def test_contour_must_enclose_cut(self, p2_service, p2_table):
        with pytest.raises(DomainError):
            p2_service.contour_integral(p2_table, 1, radius=0.0)


@pytest.mark.slow
class TestExactPipeline:

    @pytest.fixture(scope="class")
    def exact(self):
        return ToporecService.exact_even(2, Fraction(9, 10))

    @pytest.fixture(scope="class")
    def numeric(self):
        return ToporecService.for_curve(SpectralCurveService().curve_even(2, u_of_kappa(2, 0.9)))

    def test_genus_one_agrees(self, exact, numeric):
        exact_table = exact.correlator_table(1, 1)
        numeric_table = numeric.correlator_table(1, 1)
        assert exact_table.to_dict()["field"] == "exact"
        for z in (2.5, 0.3 + 0.4j):
            assert exact_table.evaluate(1, 1, (z,)) == pytest.approx(
                numeric_table.evaluate(1, 1, (z,)), rel=1e-8
            )
        assert exact.moment(exact_table, 1, 1) == pytest.approx(numeric.moment(numeric_table, 1, 1), rel=1e-8)

    def test_sqrt_beta_membership(self, exact):
        field = exact.field
        zp = exact.curve.branch_points[0]
        value = field.convert(3) + field.convert(2) * (zp + field.one / zp)
        assert exact.sqrt_beta_decomposition(value) == (Fraction(3), Fraction(2))

    def test_branch_point_outside_sqrt_beta(self, exact):
        with pytest.raises(DomainError):
            exact.sqrt_beta_decomposition(exact.curve.branch_points[0])

    def test_exact_deck_series(self, exact):
        tau = exact.deck_series("+", order=6)
        numeric_tau = ToporecService(exact.curve.numeric, order=6).deck_series("+", order=6)
        for k in range(2, 7):
            assert exact.field.to_complex(tau.coefficient(k)) == pytest.approx(numeric_tau.coefficient(k), rel=1e-10)
