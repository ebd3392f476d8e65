"""Tests for truncated Laurent series over float and exact fields."""

import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from src.core.exceptions import DomainError, PrecisionFailureError
from src.models.series import FLOAT, LaurentSeries, NumberField


def geometric(precision: int) -> LaurentSeries:
    """1 / (1 - t) = 1 + t + t^2 + ..."""
    return LaurentSeries.from_coefficients([1] * precision, FLOAT, 0, precision)


class TestConstruction:

    def test_padding(self):
        # precision is absolute: t^-1 .. t^3 are known, O(t^4)
        s = LaurentSeries.from_coefficients([1, 2], FLOAT, -1, 4)
        assert s.coeffs == (1, 2, 0, 0, 0)
        assert len(s.coeffs) == s.precision - s.valuation
        assert s.coefficient(3) == 0
        with pytest.raises(PrecisionFailureError):
            s.coefficient(4)
        assert s.coefficient(-1) == 1
        assert s.coefficient(-5) == 0

    def test_inconsistent_length(self):
        with pytest.raises(ValueError):
            LaurentSeries((1, 2), 0, 5)

    def test_beyond_precision(self):
        with pytest.raises(PrecisionFailureError):
            geometric(4).coefficient(4)

    def test_polynomial_recentred(self):
        # (1 + t)^2 = 1 + 2t + t^2 at center 1 of z^2
        s = LaurentSeries.polynomial([0, 0, 1], FLOAT, 5, center=1)
        assert [s.coefficient(k) for k in range(4)] == [1, 2, 1, 0]

    def test_polynomial_at_infinity(self):
        # z^2 + 3 at z = 1/w
        s = LaurentSeries.polynomial_at_infinity([3, 0, 1], FLOAT, 3)
        assert s.valuation == -2
        assert s.coefficient(-2) == 1
        assert s.coefficient(0) == 3


class TestArithmetic:

    def test_product_precision(self):
        s = geometric(6) * LaurentSeries.from_coefficients([1, -1], FLOAT, 0, 6)
        assert s.precision == 6
        assert [s.coefficient(k) for k in range(6)] == [1, 0, 0, 0, 0, 0]

    def test_inverse(self):
        s = LaurentSeries.from_coefficients([1, -1], FLOAT, 0, 6).inverse()
        assert [s.coefficient(k) for k in range(6)] == [1] * 6

    def test_inverse_of_pole(self):
        s = LaurentSeries.from_coefficients([0, 2, 4], FLOAT, 0, 6).inverse()
        assert s.valuation == -1
        assert s.coefficient(-1) == pytest.approx(0.5)
        assert s.coefficient(0) == pytest.approx(-1.0)

    def test_inverse_of_unknown_zero(self):
        with pytest.raises(PrecisionFailureError):
            LaurentSeries.from_coefficients([0, 0], FLOAT, 0, 2).inverse()

    def test_negative_power(self):
        t = LaurentSeries.variable(FLOAT, 5)
        assert (t**-2).valuation == -2

    def test_scalar_lift(self):
        s = 1 - geometric(4)
        assert [s.coefficient(k) for k in range(4)] == [0, -1, -1, -1]

    @given(
        a=st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=4, max_size=4),
        t=st.floats(min_value=-0.05, max_value=0.05),
    )
    @hypothesis_settings(max_examples=40, deadline=None)
    def test_evaluate_product(self, a, t):
        s = LaurentSeries.from_coefficients(a, FLOAT, 0, 4)
        g = geometric(4)
        assert (s * g).evaluate(t) == pytest.approx(s.evaluate(t) * g.evaluate(t), abs=1e-3)


class TestCalculus:

    def test_derivative(self):
        s = LaurentSeries.from_coefficients([1, 1, 1], FLOAT, -1, 2)
        d = s.derivative()
        assert d.valuation == -2
        assert d.coefficient(-2) == -1
        assert d.coefficient(0) == 1

    def test_integral_of_residue(self):
        with pytest.raises(DomainError):
            LaurentSeries.from_coefficients([1, 1], FLOAT, -1, 1).integral()

    def test_log(self):
        # log(1 + t) = t - t^2/2 + t^3/3
        s = LaurentSeries.from_coefficients([1, 1], FLOAT, 0, 4).log()
        assert [s.coefficient(k) for k in range(4)] == pytest.approx([0, 1, -0.5, 1 / 3])

    def test_log_constant(self):
        s = LaurentSeries.from_coefficients([2, 0], FLOAT, 0, 2).log()
        assert s.coefficient(0) == pytest.approx(cmath.log(2))

    def test_log_needs_unit(self):
        with pytest.raises(DomainError):
            LaurentSeries.variable(FLOAT, 4).log()

    def test_compose(self):
        # 1/(1 - u) with u = 2t gives sum 2^k t^k
        u = LaurentSeries.from_coefficients([2], FLOAT, 1, 5)
        s = geometric(5).compose(u)
        assert [s.coefficient(k) for k in range(5)] == [1, 2, 4, 8, 16]

    def test_compose_needs_positive_valuation(self):
        with pytest.raises(DomainError):
            geometric(3).compose(geometric(3))

    def test_with_valuation(self):
        s = LaurentSeries.from_coefficients([1e-18, 0, 3], FLOAT, 0, 3)
        assert s.with_valuation(2, tolerance=1e-15).valuation == 2
        with pytest.raises(DomainError):
            s.with_valuation(2)


class TestNumberField:

    @pytest.fixture(scope="class")
    def field(self):
        return NumberField(sympy.sqrt(2))

    def test_degree(self, field):
        assert field.degree == 2

    def test_vector(self, field):
        value = field.convert(Fraction(1, 3)) + field.convert(sympy.sqrt(2)) * 5
        assert field.vector(value) == [Fraction(1, 3), Fraction(5)]

    def test_to_complex(self, field):
        assert field.to_complex(field.convert(sympy.sqrt(2))) == pytest.approx(2**0.5)

    def test_exact_series(self, field):
        root = field.convert(sympy.sqrt(2))
        s = LaurentSeries.from_coefficients([field.one, root], field, 0, 4)
        square = s * s
        assert square.exact
        assert square.coefficient(2) == field.convert(2)

    def test_exact_log_needs_unit_constant(self, field):
        with pytest.raises(DomainError):
            LaurentSeries.from_coefficients([field.convert(2), field.one], field, 0, 3).log()
