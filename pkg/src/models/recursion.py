"""Initial data and correlator tables of the topological recursion."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from src.core.exceptions import DomainError, PoleEvaluationError
from src.models.series import FLOAT, CoefficientField

# basis index (branch, m): the m-th expansion coefficient of omega_2^(0)(., z) at that branch point
BasisIndex = tuple[int, int]


@dataclass(frozen=True)
class BidifferentialTerm:
    """coefficient * dz1 dz2 / (z2 - rotation * z1)^2"""

    coefficient: Any
    rotation: Any


@dataclass(frozen=True)
class RecursionCurve:
    """
    Rational spectral curve with its recursion data.

    x and y are ratios of polynomials in the global coordinate z, coefficients
    lowest degree first. omega_1^(0) = scale * ln(-y) dx/x and omega_2^(0) is the
    sum of the bidifferential terms. Only the listed branch points enter the
    recursion.
    """

    field: CoefficientField = field(repr=False, compare=False)
    x_num: tuple
    x_den: tuple
    y_num: tuple
    y_den: tuple
    branch_points: tuple
    bidifferential: tuple[BidifferentialTerm, ...]
    scale: float = 1.0
    a: int = 1
    u: float | None = None
    label: str = ""

    @property
    def exact(self) -> bool:
        return self.field.exact

    @cached_property
    def numeric(self) -> RecursionCurve:
        """The same curve with complex coefficients."""
        if not self.exact:
            return self
        c = self.field.to_complex
        return RecursionCurve(
            field=FLOAT,
            x_num=tuple(c(v) for v in self.x_num),
            x_den=tuple(c(v) for v in self.x_den),
            y_num=tuple(c(v) for v in self.y_num),
            y_den=tuple(c(v) for v in self.y_den),
            branch_points=tuple(c(v) for v in self.branch_points),
            bidifferential=tuple(BidifferentialTerm(c(t.coefficient), c(t.rotation)) for t in self.bidifferential),
            scale=self.scale,
            a=self.a,
            u=self.u,
            label=self.label,
        )

    def _poly(self, coeffs, z, derivative: bool = False):
        c = np.asarray(getattr(self.numeric, coeffs), dtype=complex)[::-1]
        if derivative:
            c = np.polyder(c) if len(c) > 1 else np.zeros(1, dtype=complex)
        return np.polyval(c, np.asarray(z, dtype=complex))

    def x(self, z):
        return self._poly("x_num", z) / self._poly("x_den", z)

    def dlog_x(self, z):
        """x'(z) / x(z)."""
        return self._poly("x_num", z, True) / self._poly("x_num", z) - self._poly("x_den", z, True) / self._poly(
            "x_den", z
        )

    def y(self, z):
        return self._poly("y_num", z) / self._poly("y_den", z)

    @property
    def gamma(self) -> float:
        """x at the first branch point, the right edge of the cut."""
        return float(np.real(self.x(self.numeric.branch_points[0])))

    def omega1(self, z) -> complex:
        """omega_1^(0)(z) / dz."""
        return complex(self.scale * np.log(-self.y(z)) * self.dlog_x(z))

    def omega2(self, z1, z2) -> complex:
        """omega_2^(0)(z1, z2) / dz1 dz2."""
        total = 0j
        for term in self.numeric.bidifferential:
            gap = z2 - term.rotation * z1
            if abs(gap) < 1e-12:
                raise PoleEvaluationError(f"omega_2 evaluated on its diagonal at z1={z1}, z2={z2}")
            total += term.coefficient / gap**2
        return total

    def basis(self, index: BasisIndex, z) -> complex:
        """
        chi_(b, m)(z) = [s^m] omega_2^(0)(a_b + s, z) / ds dz.

        For a term c / (z - r z1)^2 this is c (m + 1) r^m / (z - r a_b)^(m + 2).
        """
        branch, m = index
        a = self.numeric.branch_points[branch]
        total = 0j
        for term in self.numeric.bidifferential:
            total += term.coefficient * (m + 1) * term.rotation**m / (z - term.rotation * a) ** (m + 2)
        return complex(total)


@dataclass(frozen=True)
class CorrelatorTable:
    """
    omega_n^(g) for 2g - 2 + n > 0 as coefficient tensors.

    omega_n^(g)(z_0, ..., z_{n-1}) = scale^(2 - 2g - n) sum_key T[key] prod_i chi_{key_i}(z_i) dz_i,
    where each key is a tuple of basis indices. Coefficients are unit-scale
    field elements, exact or complex depending on the curve.
    """

    curve: RecursionCurve
    order: int
    entries: dict[tuple[int, int], dict[tuple[BasisIndex, ...], Any]] = field(repr=False)

    @cached_property
    def numeric_entries(self) -> dict[tuple[int, int], dict[tuple[BasisIndex, ...], complex]]:
        to_complex = self.curve.field.to_complex
        return {gn: {key: to_complex(c) for key, c in tensor.items()} for gn, tensor in self.entries.items()}

    def covers(self, g: int, n: int) -> bool:
        return (g, n) in self.entries or (g, n) in ((0, 1), (0, 2))

    def tensor(self, g: int, n: int) -> dict[tuple[BasisIndex, ...], Any]:
        if (g, n) not in self.entries:
            raise DomainError(f"table does not cover (g, n) = ({g}, {n})")
        return self.entries[(g, n)]

    def evaluate(self, g: int, n: int, points) -> complex:
        """omega_n^(g) at the points, divided by dz_0 ... dz_{n-1}."""
        points = tuple(complex(z) for z in points)
        if len(points) != n:
            raise DomainError(f"omega_{n}^({g}) takes {n} points, got {len(points)}")
        if (g, n) == (0, 1):
            return self.curve.omega1(points[0])
        if (g, n) == (0, 2):
            return self.curve.omega2(*points)
        self.tensor(g, n)
        total = 0j
        for key, coeff in self.numeric_entries[(g, n)].items():
            product = coeff
            for index, z in zip(key, points):
                product *= self.curve.basis(index, z)
            total += product
        return total * self.curve.scale ** (2 - 2 * g - n)

    def evaluation_record(self, g: int, n: int, points) -> dict:
        value = self.evaluate(g, n, points)
        return {
            "g": g,
            "n": n,
            "points": [[complex(z).real, complex(z).imag] for z in points],
            "value": [value.real, value.imag],
        }

    def to_dict(self) -> dict:
        to_complex = self.curve.field.to_complex
        return {
            "label": self.curve.label,
            "u": self.curve.u,
            "scale": self.curve.scale,
            "field": self.curve.field.name,
            "order": self.order,
            "tensors": {
                f"{g},{n}": {
                    ";".join(f"{b}:{m}" for b, m in key): [to_complex(c).real, to_complex(c).imag]
                    for key, c in sorted(tensor.items())
                }
                for (g, n), tensor in sorted(self.entries.items())
            },
        }
