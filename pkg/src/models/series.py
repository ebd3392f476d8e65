"""
Truncated Laurent series.

A series is stored as its known coefficients from the leading order up to an
absolute precision: sum_k c_k t^k + O(t^precision). Coefficients live either in
an exact number field (a sympy algebraic field over Q) or in the complex numbers.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb
from typing import Any, Sequence

import sympy
from sympy import QQ

from src.core.exceptions import DomainError, PrecisionFailureError


class ComplexField:
    """Double-precision complex coefficients."""

    exact = False
    name = "float"
    zero = 0j
    one = 1 + 0j

    def convert(self, value) -> complex:
        return complex(value)

    def to_complex(self, value) -> complex:
        return complex(value)

    def log(self, value) -> complex:
        return cmath.log(value)


class NumberField:
    """
    Exact coefficients in Q(generators).

    Args:
        generators: Algebraic numbers as sympy expressions, e.g. sqrt(2) or exp(2*pi*I/4)
    """

    exact = True
    name = "exact"

    def __init__(self, *generators):
        self.generators = tuple(sympy.sympify(g) for g in generators)
        self.domain = QQ.algebraic_field(*self.generators)
        self.zero = self.domain.zero
        self.one = self.domain.one

    @property
    def degree(self) -> int:
        return self.domain.mod.degree()

    def convert(self, value):
        if isinstance(value, self.domain.dtype):
            return value
        if isinstance(value, Fraction):
            value = sympy.Rational(value.numerator, value.denominator)
        return self.domain.from_sympy(sympy.sympify(value))

    def to_complex(self, value) -> complex:
        if not isinstance(value, self.domain.dtype):
            return complex(value)
        return complex(self.domain.to_sympy(value).evalf(30))

    def vector(self, value) -> list[Fraction]:
        """Rational coordinates in the power basis of the primitive element, lowest power first."""
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in self.convert(value).to_list()]
        coeffs = coeffs[::-1]
        return coeffs + [Fraction(0)] * (self.degree - len(coeffs))

    def log(self, value):
        if value - self.one:
            raise DomainError("exact logarithms are only taken of series with constant term 1")
        return self.zero


CoefficientField = ComplexField | NumberField

FLOAT = ComplexField()


@dataclass(frozen=True)
class LaurentSeries:
    """
    sum_{k >= valuation} c_k t^k + O(t^precision) around ``base``.

    ``coeffs[i]`` is the coefficient of t^(valuation + i); the sequence always
    has max(precision - valuation, 0) entries. The valuation is a lower bound:
    leading zeros are only stripped by ``normalized``.
    """

    coeffs: tuple
    valuation: int
    precision: int
    field: Any = field(default=FLOAT, repr=False, compare=False)
    base: Any = 0

    def __post_init__(self):
        if len(self.coeffs) != max(self.precision - self.valuation, 0):
            raise ValueError(
                f"{len(self.coeffs)} coefficients do not span orders [{self.valuation}, {self.precision})"
            )

    # construction

    @classmethod
    def from_coefficients(
        cls,
        coeffs: Sequence,
        field: CoefficientField = FLOAT,
        valuation: int = 0,
        precision: int | None = None,
        base: Any = 0,
    ) -> LaurentSeries:
        values = [field.convert(c) for c in coeffs]
        precision = valuation + len(values) if precision is None else precision
        size = max(precision - valuation, 0)
        values = (values + [field.zero] * size)[:size]
        return cls(tuple(values), valuation, precision, field, base)

    @classmethod
    def constant(cls, value, field: CoefficientField, precision: int, base: Any = 0) -> LaurentSeries:
        return cls.from_coefficients([value], field, 0, max(precision, 1), base)

    @classmethod
    def variable(cls, field: CoefficientField, precision: int, base: Any = 0) -> LaurentSeries:
        """The local coordinate t itself."""
        return cls.from_coefficients([field.one], field, 1, max(precision, 2), base)

    @classmethod
    def polynomial(
        cls, coeffs: Sequence, field: CoefficientField, precision: int, center: Any = 0
    ) -> LaurentSeries:
        """P(center + t) for P given by its coefficients, lowest degree first."""
        coeffs = [field.convert(c) for c in coeffs]
        center = field.convert(center)
        powers = [field.one]
        for _ in range(len(coeffs)):
            powers.append(powers[-1] * center)
        shifted = []
        for j in range(min(len(coeffs), max(precision, 0))):
            total = field.zero
            for i in range(j, len(coeffs)):
                if coeffs[i]:
                    total = total + coeffs[i] * powers[i - j] * comb(i, j)
            shifted.append(total)
        return cls.from_coefficients(shifted, field, 0, max(precision, 0), base=center)

    @classmethod
    def polynomial_at_infinity(cls, coeffs: Sequence, field: CoefficientField, precision: int) -> LaurentSeries:
        """P(1/w) as a Laurent series in w."""
        degree = len(coeffs) - 1
        return cls.from_coefficients(list(coeffs)[::-1], field, -degree, precision, base=sympy.oo)

    # access

    @property
    def exact(self) -> bool:
        return self.field.exact

    def coefficient(self, k: int):
        if k >= self.precision:
            raise PrecisionFailureError(f"coefficient of t^{k} requested beyond precision O(t^{self.precision})")
        if k < self.valuation:
            return self.field.zero
        return self.coeffs[k - self.valuation]

    def residue(self):
        return self.coefficient(-1)

    def normalized(self) -> LaurentSeries:
        i = 0
        while i < len(self.coeffs) and not self.coeffs[i]:
            i += 1
        if i == 0:
            return self
        return replace(self, coeffs=self.coeffs[i:], valuation=self.valuation + i)

    def truncated(self, precision: int) -> LaurentSeries:
        if precision >= self.precision:
            return self
        size = max(precision - self.valuation, 0)
        return replace(self, coeffs=self.coeffs[:size], precision=precision)

    def with_valuation(self, valuation: int, tolerance: float = 0.0) -> LaurentSeries:
        """
        Drop coefficients below ``valuation`` that are known to vanish.

        Exact series require exact zeros; float series accept magnitudes up to ``tolerance``.
        """
        dropped = [self.coefficient(k) for k in range(self.valuation, min(valuation, self.precision))]
        for c in dropped:
            if c and (self.exact or abs(c) > tolerance):
                raise DomainError(f"coefficient {c} below order {valuation} does not vanish")
        start = max(valuation - self.valuation, 0)
        return replace(self, coeffs=self.coeffs[start:], valuation=max(valuation, self.valuation))

    def evaluate(self, t: complex) -> complex:
        """Numerical value of the known part at t."""
        return sum(self.field.to_complex(c) * t ** (self.valuation + i) for i, c in enumerate(self.coeffs) if c)

    def to_complex(self) -> LaurentSeries:
        return LaurentSeries(
            tuple(complex(self.field.to_complex(c)) for c in self.coeffs),
            self.valuation,
            self.precision,
            FLOAT,
            self.base,
        )

    # arithmetic

    def _lift(self, other) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries.constant(self.field.convert(other), self.field, self.precision, self.base)

    def __neg__(self) -> LaurentSeries:
        return replace(self, coeffs=tuple(-c for c in self.coeffs))

    def __add__(self, other) -> LaurentSeries:
        other = self._lift(other)
        valuation = min(self.valuation, other.valuation)
        precision = min(self.precision, other.precision)
        coeffs = tuple(self.coefficient(k) + other.coefficient(k) for k in range(valuation, precision))
        return LaurentSeries(coeffs, valuation, max(precision, valuation), self.field, self.base)

    __radd__ = __add__

    def __sub__(self, other) -> LaurentSeries:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> LaurentSeries:
        return self._lift(other) - self

    def __mul__(self, other) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            return replace(self, coeffs=tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        valuation = self.valuation + other.valuation
        precision = min(self.precision + other.valuation, other.precision + self.valuation)
        size = max(precision - valuation, 0)
        out = [self.field.zero] * size
        for i in range(min(len(a), size)):
            if not a[i]:
                continue
            for j in range(min(len(b), size - i)):
                if b[j]:
                    out[i + j] = out[i + j] + a[i] * b[j]
        return LaurentSeries(tuple(out), valuation, max(precision, valuation), self.field, self.base)

    __rmul__ = __mul__

    def __truediv__(self, other) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            return replace(self, coeffs=tuple(c / other for c in self.coeffs))
        return self * other.inverse()

    def __rtruediv__(self, other) -> LaurentSeries:
        return self.inverse() * other

    def inverse(self) -> LaurentSeries:
        s = self.normalized()
        if not s.coeffs:
            raise PrecisionFailureError(f"no nonzero coefficient known below O(t^{self.precision}) to invert")
        a = s.coeffs
        inv0 = self.field.one / a[0]
        b = [inv0]
        for k in range(1, len(a)):
            acc = self.field.zero
            for i in range(1, k + 1):
                if a[i]:
                    acc = acc + a[i] * b[k - i]
            b.append(-acc * inv0)
        return LaurentSeries(tuple(b), -s.valuation, -s.valuation + len(a), self.field, self.base)

    def __pow__(self, n: int) -> LaurentSeries:
        if n < 0:
            return self.inverse() ** (-n)
        s = self.normalized()
        if n == 0:
            return LaurentSeries.constant(self.field.one, self.field, len(s.coeffs), self.base)
        result, square = None, s
        while n:
            if n & 1:
                result = square if result is None else result * square
            n >>= 1
            if n:
                square = square * square
        return result

    # calculus

    def derivative(self) -> LaurentSeries:
        coeffs = tuple(c * (self.valuation + i) for i, c in enumerate(self.coeffs))
        return LaurentSeries(coeffs, self.valuation - 1, self.precision - 1, self.field, self.base)

    def integral(self) -> LaurentSeries:
        """Antiderivative vanishing at t = 0; a t^-1 term has none."""
        if self.valuation <= -1 < self.precision and self.coefficient(-1):
            raise DomainError("series with a t^-1 term has no Laurent antiderivative")
        coeffs = tuple(
            c / (self.valuation + i + 1) if self.valuation + i != -1 else self.field.zero
            for i, c in enumerate(self.coeffs)
        )
        return LaurentSeries(coeffs, self.valuation + 1, self.precision + 1, self.field, self.base)

    def log(self) -> LaurentSeries:
        """Logarithm of a series with nonzero constant term, its constant being log(c_0)."""
        s = self.normalized()
        if s.valuation != 0:
            raise DomainError(f"logarithm needs valuation 0, got {s.valuation}")
        c0 = s.coeffs[0]
        unit = s / c0
        result = (unit.derivative() * unit.inverse()).integral()
        return result + self.field.log(c0)

    def compose(self, inner: LaurentSeries) -> LaurentSeries:
        """self(inner(t)) for an inner series of positive valuation."""
        g = inner.normalized()
        if g.valuation < 1:
            raise DomainError(f"composition needs an inner series of positive valuation, got {g.valuation}")
        bound = self.precision * g.valuation
        result = None
        if self.valuation:
            power = g**self.valuation
        else:
            power = LaurentSeries.constant(self.field.one, self.field, bound, inner.base)
        for i, c in enumerate(self.coeffs):
            if c:
                term = power * c
                result = term if result is None else result + term
            if i + 1 < len(self.coeffs):
                power = power * g
        if result is None:
            return LaurentSeries((), bound, bound, self.field, inner.base)
        return replace(result.truncated(bound), base=inner.base)
