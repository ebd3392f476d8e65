"""
Two-point function service.

This service handles particular solutions of the inhomogeneous two-point
equation mode by mode, the residue vectors C^(j), matrices of singularities
with their sparse decomposition, and the closed-form omega_2^(0) for (2,2,p even).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np
import sympy
from sympy import QQ

from src.core.constants import LOG_BRANCH, LOG_BRANCHES
from src.core.exceptions import BranchConventionError, DomainError, IncompatibleAlgebraError, PoleEvaluationError
from src.core.logging import get_logger
from src.models.algebra import GAVector, SeifertData
from src.models.orbit import Orbit
from src.models.two_point import ModeRecord, ResidueVectors, SingularityMatrix, SparseDecomposition
from src.services.algebra_service import AlgebraService, fourier_vanishes

logger = get_logger(__name__)

_z = sympy.Symbol("z")


def _rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def branch_offsets(a: int, branch: str) -> tuple[list[Fraction], Fraction]:
    """
    Offsets s_g with ln(zeta^g x) / 2 i pi = ln x / 2 i pi + s_g, and the lower-lip offset.

    Args:
        a: Order of the rotation group
        branch: One of "positive", "negative", "symmetrized"

    Returns:
        (offsets for g in Z_a, offset of ln(x - i0) relative to ln(x + i0))
    """
    if branch == "positive":
        return [Fraction(g, a) for g in range(a)], Fraction(1)
    if branch == "negative":
        return [Fraction(0)] + [Fraction(g - a, a) for g in range(1, a)], Fraction(-1)
    if branch == "symmetrized":
        return [Fraction(g, a) if 2 * g <= a else Fraction(g - a, a) for g in range(a)], Fraction(1)
    raise BranchConventionError(f"unknown branch convention {branch!r}, expected one of {LOG_BRANCHES}")


class CyclotomicField:
    """Q(zeta_a) as polynomials in z modulo the a-th cyclotomic polynomial."""

    def __init__(self, a: int):
        self.a = a
        self.modulus = sympy.Poly(sympy.cyclotomic_poly(a, _z), _z, domain=QQ)

    def reduce(self, poly: sympy.Poly) -> sympy.Poly:
        return poly.rem(self.modulus)

    def power(self, n: int) -> sympy.Poly:
        return self.reduce(sympy.Poly(_z ** (n % self.a), _z, domain=QQ))

    def from_terms(self, terms: dict[int, Fraction]) -> sympy.Poly:
        expr = sum((_rational(c) * _z ** (n % self.a) for n, c in terms.items()), sympy.Integer(0))
        return self.reduce(sympy.Poly(expr, _z, domain=QQ))

    def inverse(self, poly: sympy.Poly) -> sympy.Poly:
        return poly.invert(self.modulus)

    def to_complex(self, poly: sympy.Poly) -> complex:
        zeta = np.exp(2j * np.pi / self.a)
        return complex(sum(complex(float(c)) * zeta**n for (n,), c in poly.terms()))

    @staticmethod
    def rational_value(poly: sympy.Poly) -> Fraction | None:
        if poly.is_zero:
            return Fraction(0)
        if poly.degree() > 0:
            return None
        c = poly.LC()
        return Fraction(int(c.numerator), int(c.denominator))


class TwoPointService:
    """Service for the two-point function of a geometry."""

    def __init__(self, seifert: SeifertData, algebra: AlgebraService | None = None, branch: str = LOG_BRANCH):
        self.seifert = seifert
        self.algebra = algebra or AlgebraService(seifert)
        self.branch = branch
        self.field = CyclotomicField(seifert.a)

    @property
    def a(self) -> int:
        return self.seifert.a

    def mode_value(self, k: int, j: int) -> sympy.Poly:
        """
        Constant term multiplying c when c x^{k-1} L^j dx is plugged into the equation.

        With L = ln x / 2 i pi, the lips contribute L^j and (L + lower)^j and the
        rotated sheets contribute alpha(g) zeta^{gk} (L + s_g)^j.
        """
        alpha = self.algebra.alpha_hat()
        offsets, lower = branch_offsets(self.a, self.branch)
        terms: dict[int, Fraction] = {0: (Fraction(1) if j == 0 else Fraction(0)) + lower**j}
        for g in range(1, self.a):
            if alpha[g]:
                n = (g * k) % self.a
                terms[n] = terms.get(n, Fraction(0)) + alpha[g] * offsets[g] ** j
        return self.field.from_terms(terms)

    def solve_mode(self, k: int) -> tuple[int, sympy.Poly]:
        """Minimal log-order j_k and the coefficient c_k = 1 / M_{j_k}(k) in Q(zeta_a)."""
        for j in range(self.a + 3):
            value = self.mode_value(k, j)
            if not value.is_zero:
                return j, self.field.inverse(value)
        raise BranchConventionError(f"no particular solution for mode k={k} under {self.branch!r}")

    def residue_vectors(self) -> ResidueVectors:
        """
        Residue vectors C^(j)(i) = (1/a) sum_{k : j_k = j} c_k zeta^{-ik}.

        Returns:
            ResidueVectors with trailing zero vectors trimmed and the per-mode records

        Raises:
            BranchConventionError: a coefficient vector comes out irrational
        """
        a = self.a
        solutions = {k: self.solve_mode(k) for k in range(a)}
        max_order = max(j for j, _ in solutions.values())
        vectors = []
        for j in range(max_order + 1):
            coeffs = []
            for i in range(a):
                total = sympy.Poly(0, _z, domain=QQ)
                for k, (order, c) in solutions.items():
                    if order == j:
                        total = total + c * self.field.power(-i * k)
                value = CyclotomicField.rational_value(self.field.reduce(total))
                if value is None:
                    raise BranchConventionError(f"C^({j})({i}) is not rational under {self.branch!r}")
                coeffs.append(value / a)
            vectors.append(GAVector(a, tuple(coeffs)))
        while len(vectors) > 1 and vectors[-1].is_zero():
            vectors.pop()
        modes = tuple(
            ModeRecord(k=k, order=order, coefficient=self.field.to_complex(c)) for k, (order, c) in sorted(solutions.items())
        )
        logger.info("residue_vectors", geometry=self.seifert.label, orders=[m.order for m in modes])
        return ResidueVectors(vectors=tuple(vectors), modes=modes)

    def log_modes(self) -> list[ModeRecord]:
        return self.residue_vectors().log_modes

    def higher_terms_vanish(self, orbit: Orbit, rv: ResidueVectors) -> bool:
        """Log-order terms drop out of B^(0) when every member vanishes on the log modes."""
        return all(fourier_vanishes(v, m.k) for m in rv.log_modes for v in orbit.members)

    def singularity_matrix(self, orbit: Orbit, rv: ResidueVectors) -> SingularityMatrix:
        """
        B^(0)(i; v1, v2) = sum_j sum_{l, l'} (l'/a)^j C^(j)(l) v1(l') v2(l + l' - i).

        Args:
            orbit: Finite complete orbit
            rv: Residue vectors of the same geometry

        Returns:
            SingularityMatrix over the orbit members
        """
        if orbit.modulus != self.a or rv[0].modulus != self.a:
            raise IncompatibleAlgebraError("orbit and residue vectors must live in Z_a")
        if not orbit.is_finite:
            raise DomainError("singularity matrices need a finite orbit")
        a = self.a
        exact = not self.higher_terms_vanish(orbit, rv)
        W = orbit.array.astype(object) if exact else orbit.array
        scale = orbit.scale
        # X[m][p, q] = sum_l' w_p(l') w_q(l' + m)
        X = np.stack([W @ np.roll(W, -m, axis=1).T for m in range(a)])
        orders = range(len(rv.vectors)) if exact else range(1)
        denominator = lcm(*(rv[j].denominator() * a**j for j in orders)) * scale * scale
        total = None
        for j in orders:
            C = rv[j]
            if C.is_zero():
                continue
            if j == 0:
                Xj = X
            else:
                weights = np.array([l**j for l in range(a)], dtype=object)
                Wj = W * weights
                Xj = np.stack([Wj @ np.roll(W, -m, axis=1).T for m in range(a)])
            factor = denominator // (C.denominator() * a**j * scale * scale)
            numer = [int(c * C.denominator()) * factor for c in C.coeffs]
            term = np.stack([sum(numer[l] * Xj[(l - i) % a] for l in range(a)) for i in range(a)], axis=-1)
            total = term if total is None else total + term
        if total is None:
            total = np.zeros((orbit.size, orbit.size, a), dtype=np.int64)
        if not exact:
            total = total.astype(np.int64)
        logger.info("singularity_matrix", geometry=self.seifert.label, size=orbit.size, exact_higher=exact)
        return SingularityMatrix(members=orbit.members, numerators=total, denominator=denominator)

    @staticmethod
    def sparse_decompose(matrix: SingularityMatrix) -> SparseDecomposition:
        """
        Split B^(0) = B J + B_sp choosing B coordinatewise as the most frequent value.

        Ties go to the smallest value, which makes B the lexicographically
        smallest minimizer of the number of nonzero sparse entries.
        """
        a = matrix.modulus
        plain_numerators = []
        for i in range(a):
            values, counts = np.unique(matrix.numerators[:, :, i], return_counts=True)
            plain_numerators.append(values[np.flatnonzero(counts == counts.max())[0]])
        plain_arr = np.array(plain_numerators, dtype=matrix.numerators.dtype)
        sparse = SingularityMatrix(
            members=matrix.members,
            numerators=matrix.numerators - plain_arr[None, None, :],
            denominator=matrix.denominator,
        )
        plain = GAVector(a, tuple(Fraction(int(x), matrix.denominator) for x in plain_arr))
        return SparseDecomposition(plain=plain, sparse=sparse)


def omega2_even(p: int, z1: complex, z2: complex) -> complex:
    """
    Coefficient of dz1 dz2 in sum_l (-1)^l d(zeta^l z1) dz2 / (z2 - zeta^l z1)^2.

    Raises:
        DomainError: p is not a positive even integer
        PoleEvaluationError: z2 coincides with a rotation of z1
    """
    if p < 2 or p % 2:
        raise DomainError(f"omega2_even needs an even p >= 2, got {p}")
    zeta = np.exp(2j * np.pi / p)
    rotations = zeta ** np.arange(p)
    gaps = z2 - rotations * z1
    if np.min(np.abs(gaps)) <= 1e-12 * max(1.0, abs(z1), abs(z2)):
        raise PoleEvaluationError(f"z2 = {z2} meets a rotation of z1 = {z1}")
    signs = (-1.0) ** np.arange(p)
    return complex(np.sum(signs * rotations / gaps**2))


def omega2_even_closed(p: int, z1: complex, z2: complex) -> complex:
    """Closed form of omega2_even in the variables z^{p/2}."""
    h = p // 2
    w1, w2 = z1**h, z2**h
    if abs(w1 - w2) <= 1e-12 or abs(w1 + w2) <= 1e-12:
        raise PoleEvaluationError(f"z2 = {z2} meets a rotation of z1 = {z1}")
    return complex(h * h * z1 ** (h - 1) * z2 ** (h - 1) * (1 / (w1 - w2) ** 2 + 1 / (w1 + w2) ** 2))
