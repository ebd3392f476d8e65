"""
Sheet dynamics service.

This service handles the pseudoreflections of the group algebra, breadth-first
orbit enumeration, skeleton graphs, genus counts and shift symmetries of orbits.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

import numpy as np

from src.core.config import settings
from src.core.constants import ORBIT_COEFF_LIMIT
from src.core.exceptions import DomainError, NonIntegerGenusError
from src.core.logging import get_logger
from src.models.algebra import GAVector, SeifertData
from src.models.orbit import Orbit, SkeletonGraph
from src.services.algebra_service import AlgebraService, fourier_vanishes

logger = get_logger(__name__)


class SheetDynamicsService:
    """Service for the reflection dynamics of a fixed geometry."""

    def __init__(self, seifert: SeifertData, algebra: AlgebraService | None = None):
        self.seifert = seifert
        self.algebra = algebra or AlgebraService(seifert)
        alpha = self.algebra.alpha_hat().to_array()
        # row g holds alpha . e_g, i.e. alpha rolled by g
        self._rolled = np.stack([np.roll(alpha, g) for g in range(seifert.a)])

    @property
    def a(self) -> int:
        return self.seifert.a

    def reflect(self, v: GAVector, g: int) -> GAVector:
        """T_g(v) = v - v(g) * (alpha . e_g)."""
        coeff = v[g]
        if coeff == 0:
            return v
        alpha = self.algebra.alpha_hat()
        return GAVector(self.a, tuple(v[h] - coeff * alpha[h - g] for h in range(self.a)))

    def enumerate_orbit(self, seed: GAVector, cap: int | None = None) -> Orbit:
        """
        Breadth-first closure of seed under all pseudoreflections.

        Args:
            seed: Starting vector
            cap: Maximum orbit size before reporting InfiniteBeyond

        Returns:
            Orbit with verdict Finite or InfiniteBeyond(cap)
        """
        cap = cap or settings.ORBIT_CAP
        if cap < 1:
            raise DomainError(f"orbit cap must be >= 1, got {cap}")
        scale = seed.denominator()
        start = np.array([int(c * scale) for c in seed.coeffs], dtype=np.int64)
        seen = {start.tobytes(): 0}
        arrays = [start]
        queue = deque([start])
        verdict = "Finite"
        while queue:
            v = queue.popleft()
            for g in np.nonzero(v)[0]:
                w = v - v[g] * self._rolled[g]
                if np.abs(w).max() > ORBIT_COEFF_LIMIT:
                    verdict = "InfiniteBeyond"
                    break
                key = w.tobytes()
                if key not in seen:
                    seen[key] = len(arrays)
                    arrays.append(w)
                    queue.append(w)
                    if len(arrays) > cap:
                        verdict = "InfiniteBeyond"
                        break
            if verdict != "Finite":
                break
        members = tuple(GAVector.from_array(arr, scale) for arr in arrays[:cap])
        logger.info("orbit_enumerated", geometry=self.seifert.label, size=len(members), verdict=verdict)
        return Orbit(
            seed=seed,
            members=members,
            verdict=verdict,
            cap=cap,
            array=np.stack(arrays[:cap]),
            scale=scale,
        )

    def skeleton(self, orbit: Orbit) -> SkeletonGraph:
        """Edges (i, j, g) with member j = T_g(member i), g in the support of member i."""
        if not orbit.is_finite:
            raise DomainError("skeleton graphs need a finite orbit")
        lookup = {arr.tobytes(): i for i, arr in enumerate(orbit.array)}
        edges = []
        for i, v in enumerate(orbit.array):
            for g in np.nonzero(v)[0]:
                w = v - v[g] * self._rolled[g]
                edges.append((i, lookup[w.tobytes()], int(g)))
        return SkeletonGraph(vertices=orbit.members, edges=tuple(edges))

    @staticmethod
    def orbit_genus(graph: SkeletonGraph, cut_components: int = 1) -> int:
        """
        Riemann-Hurwitz genus of the surface glued from the skeleton.

        Args:
            graph: Skeleton graph of a finite orbit
            cut_components: Number of segments of the cut

        Returns:
            1 - d + (cut_components / 2) * sum of support sizes
        """
        total = cut_components * sum(len(v.support()) for v in graph.vertices)
        if total % 2:
            raise NonIntegerGenusError(f"support total {total} is odd")
        return 1 - len(graph.vertices) + total // 2

    def n0_after_reflection(self, v: GAVector, j: int) -> Fraction:
        """n0[T_j v] = n0[v] - a chi v(j)."""
        return v.n0 - self.a * self.seifert.chi * v[j]

    @staticmethod
    def shift_classes(orbit: Orbit, j: int) -> list[tuple[GAVector, ...]]:
        """Partition of the orbit into classes under the shift epsilon_j."""
        remaining = list(orbit.members)
        members = set(remaining)
        classes = []
        while remaining:
            v = remaining.pop(0)
            cls = [v]
            w = v.shift(j)
            while w != v and w in members:
                cls.append(w)
                w = w.shift(j)
            for u in cls[1:]:
                if u in remaining:
                    remaining.remove(u)
            classes.append(tuple(cls))
        return classes

    def tilde_power(self, orbit: Orbit) -> int:
        """a / j for the smallest divisor j of a whose shift preserves the orbit."""
        members = set(orbit.members)
        for j in range(1, self.a + 1):
            if self.a % j == 0 and all(v.shift(j) in members for v in orbit.members):
                return self.a // j
        return 1

    def carried_modes(self) -> list[int]:
        """Modes k with F_k[alpha] != 0, i.e. the multiples of some a / a_m."""
        silent = set(self.algebra.zero_modes())
        return [k for k in range(self.a) if k not in silent]

    def completeness_check(self, orbit: Orbit) -> bool:
        """
        Every carried mode k has some member with F_k or F_{k+1} nonzero.

        Orbit members lie in the image of alpha, so modes killed by alpha are
        silent for every member and hold no holonomy moment; they are skipped.
        """
        modes = self.carried_modes()
        nonzero = set()
        for v in orbit.members:
            for k in range(self.a):
                if k not in nonzero and not fourier_vanishes(v, k):
                    nonzero.add(k)
        missing = [k for k in modes if k not in nonzero and (k + 1) % self.a not in nonzero]
        logger.info("completeness_check", geometry=self.seifert.label, modes=len(modes), missing=missing)
        return not missing

    def affine_seed(self) -> GAVector:
        """e_0 - e_{a-1}, the short cycle seed used when chi = 0."""
        return GAVector.basis(self.a, 0) - GAVector.basis(self.a, -1)

