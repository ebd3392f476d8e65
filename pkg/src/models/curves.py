"""Spectral-curve parametrizations and equilibrium densities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

CurveFamily = Literal["even", "odd", "torus", "elliptic", "p233"]


@dataclass(frozen=True)
class RationalCurveParam:
    """
    Closed-form parametrization of a (2,2,p) spectral curve.

    For the even family x(z) = z (z^p - k^2) / (k^2 z^p - 1); for the odd family
    the parametrized coordinate is x^2(z) = z^-2 (k^2 z^2p - 1) / (z^2p - k^2).
    """

    family: Literal["even", "odd"]
    p: int
    kappa: float
    u: float
    z_plus: float

    @property
    def z_minus(self) -> float:
        return 1.0 / self.z_plus

    @property
    def k2(self) -> float:
        return self.kappa**2

    @property
    def a(self) -> int:
        return self.p if self.family == "even" else 2 * self.p

    @property
    def z_edge(self) -> float:
        """
        The branch point over the right edge x = gamma > 1.

        The pair z_+, 1/z_+ maps to x and 1/x; for the odd family z_+ lands on
        the left edge, so the edge is whichever of the two has |x| > 1.
        """
        if abs(self.coordinate(self.z_plus)) >= 1:
            return self.z_plus
        return self.z_minus

    @property
    def gamma(self) -> float:
        """Right edge of the support in x."""
        return float(np.real(self.x(self.z_edge)))

    def coordinate(self, z):
        """x(z) for the even family, x^2(z) for the odd family."""
        z = np.asarray(z, dtype=complex)
        if self.family == "even":
            return z * (z**self.p - self.k2) / (self.k2 * z**self.p - 1)
        w = z ** (2 * self.p)
        return (self.k2 * w - 1) / (z**2 * (w - self.k2))

    def x(self, z):
        c = self.coordinate(z)
        return c if self.family == "even" else np.sqrt(c)

    def y(self, z):
        z = np.asarray(z, dtype=complex)
        h = z ** (self.p // 2) if self.family == "even" else z**self.p
        k = self.kappa
        return -(h - k) * (k * h + 1) / ((k * h - 1) * (h + k))

    def coordinate_equation(self, X: complex) -> np.ndarray:
        """Polynomial in z, highest degree first, whose roots solve coordinate(z) = X."""
        p, k2 = self.p, self.k2
        if self.family == "even":
            coeffs = np.zeros(p + 2, dtype=complex)
            coeffs[0] = 1.0
            coeffs[1] = -X * k2
            coeffs[p] += -k2
            coeffs[p + 1] += X
            return coeffs
        coeffs = np.zeros(2 * p + 3, dtype=complex)
        coeffs[0] = -X
        coeffs[2] = k2
        coeffs[2 * p] += X * k2
        coeffs[2 * p + 2] += -1.0
        return coeffs

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "kappa": self.kappa,
            "u": self.u,
            "z_plus": self.z_plus,
            "z_minus": self.z_minus,
            "z_edge": self.z_edge,
            "gamma": self.gamma,
        }


@dataclass(frozen=True)
class DensityCurve:
    """
    Equilibrium density on a grid of t values.

    The support is [-a ln gamma, a ln gamma] in t, that is [1/gamma, gamma] in x.
    """

    t: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)
    gamma: float
    a: float
    mass: float
    label: str = ""
    center: float = 0.0

    @property
    def edge(self) -> float:
        return float(self.a * np.log(self.gamma))

    def evaluate(self, t) -> np.ndarray:
        """Linear interpolation of the density, zero outside the support."""
        t = np.asarray(t, dtype=float)
        values = np.interp(t, self.t, self.rho, left=0.0, right=0.0)
        return np.where(np.abs(t - self.center) <= self.edge, values, 0.0)

    def rows(self) -> list[tuple[float, float]]:
        return [(float(t), float(r)) for t, r in zip(self.t, self.rho)]


@dataclass(frozen=True)
class Elliptic2222Solution:
    """
    Direct solution of the (2,2,2,2) model.

    phi_1(x) - phi_1(-x) = C_E (E[x/g; g^2] - algebraic part) + C_F F[x/g; g^2],
    evaluated on the upper lip by `odd_part`.
    """

    u: float
    gamma: float
    c_e: float
    c_f: float
    odd_part: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    density: DensityCurve = field(repr=False, compare=False)

    def to_dict(self) -> dict:
        return {"u": self.u, "gamma": self.gamma, "c_e": self.c_e, "c_f": self.c_f, "mass": self.density.mass}


@dataclass(frozen=True)
class P233Solution:
    """Branch-point data and fitted density of the (2,3,3) curve."""

    u: float
    m2: float
    m3: float
    w: float
    z: float
    density: DensityCurve | None = field(default=None, repr=False, compare=False)

    @property
    def gamma_tilde(self) -> float:
        """Right edge of the support in x^2, the larger root of x + 1/x = w."""
        return float((self.w + np.sqrt(self.w**2 - 4.0)) / 2.0)

    def to_dict(self) -> dict:
        return {"u": self.u, "m2": self.m2, "m3": self.m3, "w": self.w, "z": self.z}
