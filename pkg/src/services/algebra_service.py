"""
Group-algebra service.

This service handles the interaction vector, the discrete Fourier transform on
Z_a with exact zero detection, the bilinear form and the convexity symbol.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np
import sympy
from sympy import QQ

from src.core.config import settings
from src.core.constants import CONVEXITY_SCAN_FLOOR
from src.core.exceptions import (
    DomainError,
    IncompatibleAlgebraError,
    InvalidFiberOrderError,
    InvalidSurgeryDataError,
)
from src.core.logging import get_logger
from src.models.algebra import FourierProfile, GAVector, SeifertData
from src.models.reports import PositivityVerdict

logger = get_logger(__name__)

_X = sympy.Symbol("X")


def make_seifert(
    orders: Sequence[int],
    b: int | None = None,
    b_orders: Sequence[int] | None = None,
) -> SeifertData:
    """
    Build a validated SeifertData record.

    Args:
        orders: Exceptional-fiber orders a_1..a_r, each at least 2
        b: Integer surgery coefficient
        b_orders: Surgery data b_1..b_r, coprime to the matching orders

    Returns:
        SeifertData with exact derived invariants

    Raises:
        InvalidFiberOrderError: an order is below 2 or there are no fibers
        InvalidSurgeryDataError: surgery data has the wrong length or is not coprime
    """
    orders = tuple(int(am) for am in orders)
    if not orders or any(am < 2 for am in orders):
        raise InvalidFiberOrderError(f"fiber orders must be >= 2, got {orders}")
    if b_orders is not None:
        b_orders = tuple(int(bm) for bm in b_orders)
        if len(b_orders) != len(orders):
            raise InvalidSurgeryDataError("b_orders must match orders in length")
        if any(gcd(am, bm) != 1 for am, bm in zip(orders, b_orders)):
            raise InvalidSurgeryDataError(f"gcd(a_m, b_m) != 1 for {orders}, {b_orders}")
    return SeifertData(orders=orders, b=b or 0, b_orders=b_orders)


def dft(v: GAVector) -> FourierProfile:
    """F_k[v] = sum_j zeta^{jk} v(j)."""
    a = v.modulus
    j = np.arange(a)
    phases = np.exp(2j * np.pi * np.outer(j, j) / a)
    values = phases @ np.array([float(c) for c in v.coeffs])
    return FourierProfile(a, tuple(complex(x) for x in values))


def idft(profile: FourierProfile) -> np.ndarray:
    a = profile.modulus
    j = np.arange(a)
    phases = np.exp(-2j * np.pi * np.outer(j, j) / a)
    return phases @ np.array(profile.values) / a


def fourier_vanishes(v: GAVector, k: int) -> bool:
    """Exact test of F_k[v] = 0: the cyclotomic polynomial of zeta^k divides v(X)."""
    a = v.modulus
    order = a // gcd(a, k % a) if k % a else 1
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in v.coeffs])), _X, domain=QQ)
    if poly.is_zero:
        return True
    return poly.rem(sympy.Poly(sympy.cyclotomic_poly(order, _X), _X, domain=QQ)).is_zero


def convolution_matrix(v: GAVector) -> sympy.Matrix:
    a = v.modulus
    return sympy.Matrix(a, a, lambda g, h: sympy.Rational(v[g - h].numerator, v[g - h].denominator))


def convolution_rank(v: GAVector) -> int:
    """Rank of w -> v.w by Gaussian elimination over the rationals."""
    return convolution_matrix(v).rank()


class AlgebraService:
    """Service for the group algebra of a fixed geometry."""

    def __init__(self, seifert: SeifertData):
        self.seifert = seifert
        self._alpha: GAVector | None = None

    @property
    def a(self) -> int:
        return self.seifert.a

    def alpha_hat(self) -> GAVector:
        """
        Interaction vector of the geometry.

        alpha(0) = 2, every other position gets 2 - r, and each fiber of order
        a_m adds 1 at the nonzero multiples of a_m.

        Returns:
            The symmetric vector alpha with sum a * chi
        """
        if self._alpha is None:
            a, r = self.a, self.seifert.r
            coeffs = [Fraction(2)] + [Fraction(2 - r)] * (a - 1)
            for am, cm in zip(self.seifert.orders, self.seifert.cofactors):
                for l in range(1, cm):
                    coeffs[am * l] += 1
            self._alpha = GAVector(a, tuple(coeffs))
        return self._alpha

    def basis(self, g: int) -> GAVector:
        return GAVector.basis(self.a, g)

    def bilinear(self, v: GAVector, w: GAVector) -> Fraction:
        """<v, w> = (alpha.v | w) / 2."""
        if v.modulus != self.a or w.modulus != self.a:
            raise IncompatibleAlgebraError(f"vectors must live in Z_{self.a}")
        return self.alpha_hat().convolve(v).pairing(w) / 2

    def fourier_symbol(self) -> FourierProfile:
        return dft(self.alpha_hat())

    def zero_modes(self) -> list[int]:
        """Modes k with F_k[alpha] = 0, detected exactly."""
        alpha = self.alpha_hat()
        return [k for k in range(self.a) if fourier_vanishes(alpha, k)]

    def image_dimension(self) -> int:
        return convolution_rank(self.alpha_hat())

    def convexity_symbol(self, k: float) -> float:
        """Q(k) = (2 - r) coth(pi k) + sum_m coth(a_m pi k)."""
        if k <= 0:
            raise DomainError(f"convexity symbol needs k > 0, got {k}")
        s = self.seifert
        value = (2 - s.r) / np.tanh(np.pi * k)
        for am in s.orders:
            value += 1.0 / np.tanh(am * np.pi * k)
        return float(value)

    def positivity_scan(self, k_max: float, samples: int | None = None) -> PositivityVerdict:
        """
        Grid check of Q(k) > 0 on a log-spaced grid over (0, k_max].

        Args:
            k_max: Right end of the scanned interval
            samples: Grid size, defaults to settings.SCAN_SAMPLES

        Returns:
            PositiveOnGrid, or NegativeAt with the first offending k
        """
        if k_max <= 0:
            raise DomainError(f"k_max must be positive, got {k_max}")
        samples = samples or settings.SCAN_SAMPLES
        grid = np.geomspace(k_max * CONVEXITY_SCAN_FLOOR, k_max, samples)
        values = np.array([self.convexity_symbol(k) for k in grid])
        negative = np.nonzero(values <= 0)[0]
        logger.debug("positivity_scan", geometry=self.seifert.label, samples=samples, negatives=len(negative))
        if len(negative):
            i = int(negative[0])
            return PositivityVerdict(kind="NegativeAt", k=float(grid[i]), value=float(values[i]), samples=samples)
        return PositivityVerdict(kind="PositiveOnGrid", k=None, value=float(values.min()), samples=samples)
