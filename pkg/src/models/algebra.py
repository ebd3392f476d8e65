"""
Group-algebra value types.

GAVector is an element of Q[Z_a] with cyclic indexing; SeifertData is the
parameter record of a geometry with exceptional fibers a_1..a_r.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.core.exceptions import IncompatibleAlgebraError


def _frac(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class GAVector:
    """Rational-coefficient element of the group algebra of Z_a."""

    modulus: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.modulus:
            raise IncompatibleAlgebraError(
                f"{len(self.coeffs)} coefficients for modulus {self.modulus}"
            )
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in self.coeffs))

    @classmethod
    def of(cls, values: Iterable) -> GAVector:
        values = tuple(values)
        return cls(len(values), tuple(_frac(v) for v in values))

    @classmethod
    def zeros(cls, a: int) -> GAVector:
        return cls(a, (Fraction(0),) * a)

    @classmethod
    def basis(cls, a: int, g: int) -> GAVector:
        coeffs = [Fraction(0)] * a
        coeffs[g % a] = Fraction(1)
        return cls(a, tuple(coeffs))

    @classmethod
    def from_array(cls, arr: np.ndarray, scale: int = 1) -> GAVector:
        return cls(len(arr), tuple(Fraction(int(c), scale) for c in arr))

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j % self.modulus]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return self.modulus

    def _check(self, other: GAVector) -> None:
        if not isinstance(other, GAVector) or other.modulus != self.modulus:
            raise IncompatibleAlgebraError(
                f"modulus {self.modulus} against {getattr(other, 'modulus', other)!r}"
            )

    def __add__(self, other: GAVector) -> GAVector:
        self._check(other)
        return GAVector(self.modulus, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: GAVector) -> GAVector:
        self._check(other)
        return GAVector(self.modulus, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> GAVector:
        return GAVector(self.modulus, tuple(-x for x in self.coeffs))

    def __mul__(self, scalar) -> GAVector:
        if isinstance(scalar, GAVector):
            return self.convolve(scalar)
        s = _frac(scalar)
        return GAVector(self.modulus, tuple(s * x for x in self.coeffs))

    __rmul__ = __mul__

    def convolve(self, other: GAVector) -> GAVector:
        """(v.w)(g) = sum_h v(g - h) w(h)."""
        self._check(other)
        a = self.modulus
        out = [Fraction(0)] * a
        for h, wh in enumerate(other.coeffs):
            if wh == 0:
                continue
            for g0, vg in enumerate(self.coeffs):
                if vg:
                    out[(g0 + h) % a] += vg * wh
        return GAVector(a, tuple(out))

    def shift(self, j: int) -> GAVector:
        """epsilon_j(v)(l) = v(l + j)."""
        return GAVector(self.modulus, tuple(self[l + j] for l in range(self.modulus)))

    def inversion(self) -> GAVector:
        """e_j -> e_{-j}."""
        return GAVector(self.modulus, tuple(self[-l] for l in range(self.modulus)))

    def pairing(self, other: GAVector) -> Fraction:
        self._check(other)
        return sum((x * y for x, y in zip(self.coeffs, other.coeffs)), Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(g for g, c in enumerate(self.coeffs) if c)

    @property
    def n0(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))

    @property
    def n1(self) -> Fraction:
        return sum((l * c for l, c in enumerate(self.coeffs)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def denominator(self) -> int:
        return lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1

    def to_array(self) -> np.ndarray:
        """Integer numpy array; raises when a coefficient is not an integer."""
        if self.denominator() != 1:
            raise ValueError(f"{self} is not integral")
        return np.array([int(c) for c in self.coeffs], dtype=np.int64)

    def to_complex(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=complex)

    def key(self) -> str:
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"

    def to_strings(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    def __str__(self) -> str:
        return self.key()


@dataclass(frozen=True)
class FourierProfile:
    """F_k[v] = sum_j zeta_a^{jk} v(j) for k in Z_a."""

    modulus: int
    values: tuple[complex, ...]

    def __getitem__(self, k: int) -> complex:
        return self.values[k % self.modulus]


class SeifertData(BaseModel):
    """Exceptional-fiber orders and the invariants derived from them."""

    model_config = ConfigDict(frozen=True)

    orders: tuple[int, ...]
    b: int = 0
    b_orders: tuple[int, ...] | None = None

    @property
    def r(self) -> int:
        return len(self.orders)

    @property
    def a(self) -> int:
        return lcm(*self.orders)

    @property
    def cofactors(self) -> tuple[int, ...]:
        return tuple(self.a // am for am in self.orders)

    @property
    def chi(self) -> Fraction:
        return 2 - self.r + sum((Fraction(1, am) for am in self.orders), Fraction(0))

    @property
    def sigma(self) -> Fraction | None:
        if self.b_orders is None:
            return None
        return self.b + sum((Fraction(bm, am) for am, bm in zip(self.orders, self.b_orders)), Fraction(0))

    @property
    def label(self) -> str:
        return ",".join(str(am) for am in self.orders)

    def coprime_surgery(self) -> bool:
        return self.b_orders is None or all(
            gcd(am, bm) == 1 for am, bm in zip(self.orders, self.b_orders)
        )

