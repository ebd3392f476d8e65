"""
Root system service.

This service handles the reduced root system on E = Im(alpha.), its ADE
identification, Weyl orders, Dynkin sub-diagrams and minimal-orbit vectors.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import factorial, gcd, lcm

import numpy as np
import sympy

from src.core.config import settings
from src.core.exceptions import ClassificationFailureError, NoFiniteMinimalOrbitError
from src.core.logging import get_logger
from src.models.algebra import GAVector, SeifertData
from src.models.reports import RootSystemReport
from src.services.algebra_service import AlgebraService, convolution_matrix
from src.services.sheet_dynamics_service import SheetDynamicsService

logger = get_logger(__name__)

EXCEPTIONAL = {(6, 72): "E6", (7, 126): "E7", (8, 240): "E8"}
EXCEPTIONAL_WEYL = {"E6": 51_840, "E7": 2_903_040, "E8": 696_729_600}


def identify_type(rank: int, root_count: int) -> str:
    """ADE label from (rank, number of roots)."""
    if root_count == rank * (rank + 1):
        return f"A{rank}"
    if rank >= 4 and root_count == 2 * rank * (rank - 1):
        return f"D{rank}"
    if (rank, root_count) in EXCEPTIONAL:
        return EXCEPTIONAL[(rank, root_count)]
    raise ClassificationFailureError(f"no ADE type with rank {rank} and {root_count} roots")


def weyl_order(label: str) -> int:
    family, n = label[0], int(label[1:])
    if family == "A":
        return factorial(n + 1)
    if family == "D":
        return 2 ** (n - 1) * factorial(n)
    return EXCEPTIONAL_WEYL[label]


def root_count(label: str) -> int:
    family, n = label[0], int(label[1:])
    if family == "A":
        return n * (n + 1)
    if family == "D":
        return 2 * n * (n - 1)
    return {"E6": 72, "E7": 126, "E8": 240}[label]


def dynkin_component_type(nodes: list[int], adjacency: dict[int, set[int]]) -> str:
    """Type of a connected simply-laced Dynkin diagram."""
    k = len(nodes)
    branch = [n for n in nodes if len(adjacency[n]) == 3]
    if not branch:
        return f"A{k}"
    center = branch[0]
    legs = []
    for start in adjacency[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [n for n in adjacency[cur] if n != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[0] == 1 and legs[1] == 1:
        return f"D{k}"
    return {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}[tuple(legs)]


def sub_diagram_weyl_order(cartan: np.ndarray, removed: int) -> int:
    """Weyl order of the diagram with one node removed."""
    nodes = [i for i in range(len(cartan)) if i != removed]
    adjacency = {i: {j for j in nodes if j != i and cartan[i, j] != 0} for i in nodes}
    order, seen = 1, set()
    for n in nodes:
        if n in seen:
            continue
        comp, queue = [], [n]
        seen.add(n)
        while queue:
            cur = queue.pop()
            comp.append(cur)
            for m in adjacency[cur]:
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        order *= weyl_order(dynkin_component_type(comp, adjacency))
    return order


class RootSystemService:
    """Service for the reduced root system of a geometry."""

    def __init__(self, seifert: SeifertData, algebra: AlgebraService | None = None):
        self.seifert = seifert
        self.algebra = algebra or AlgebraService(seifert)
        self.dynamics = SheetDynamicsService(seifert, self.algebra)
        self._alpha_matrix = self.algebra.alpha_hat().to_array()
        a = seifert.a
        self._circulant = np.array(
            [[int(self._alpha_matrix[(g - h) % a]) for h in range(a)] for g in range(a)], dtype=np.int64
        )
        self._projection: np.ndarray | None = None
        self._denominator = 1
        self._roots: np.ndarray | None = None

    @property
    def a(self) -> int:
        return self.seifert.a

    def _build_projection(self) -> None:
        """Integer matrix D * P, P the orthogonal projection onto Im(alpha.)."""
        A = convolution_matrix(self.algebra.alpha_hat())
        B = sympy.Matrix.hstack(*A.columnspace())
        P = B * (B.T * B).inv() * B.T
        D = lcm(*(int(sympy.fraction(x)[1]) for x in P))
        self._denominator = int(D)
        self._projection = np.array([[int(x) for x in row] for row in (P * D).tolist()], dtype=np.int64)

    def reduced_reflection(self, R: np.ndarray, g: int) -> np.ndarray:
        """T_g(v) = v - 2<v, e_g> e_g on a root stored as D * v."""
        if self._projection is None:
            self._build_projection()
        D = self._denominator
        pairing = int(self._circulant[g] @ R)
        if pairing % D:
            raise ClassificationFailureError(f"non-integral pairing {pairing}/{D} at g={g}")
        return R - (pairing // D) * self._projection[:, g]

    def reduced_roots(self) -> np.ndarray:
        """Closure of the projected basis vectors under the reduced reflections."""
        if self._roots is not None:
            return self._roots
        if self._projection is None:
            self._build_projection()
        cap = settings.ROOT_CLOSURE_CAP
        seeds = [s * self._projection[:, g] for g in range(self.a) for s in (1, -1)]
        seen, roots = {}, []
        queue = deque()
        for R in seeds:
            if R.tobytes() not in seen:
                seen[R.tobytes()] = len(roots)
                roots.append(R)
                queue.append(R)
        while queue:
            R = queue.popleft()
            for g in range(self.a):
                S = self.reduced_reflection(R, g)
                key = S.tobytes()
                if key not in seen:
                    seen[key] = len(roots)
                    roots.append(S)
                    queue.append(S)
                    if len(roots) > cap:
                        raise ClassificationFailureError(f"root closure exceeded {cap}")
        self._roots = np.stack(roots)
        return self._roots

    def simple_roots(self) -> np.ndarray:
        """Positive roots, under a generic functional, that are not sums of two positive roots."""
        roots = self.reduced_roots()
        functional = np.sqrt(np.array(list(sympy.primerange(2, 2 + 20 * self.a))[: self.a], dtype=float))
        heights = roots @ functional
        positive = roots[heights > 0]
        keys = {R.tobytes() for R in positive}
        decomposable = set()
        for i in range(len(positive)):
            for j in range(i + 1, len(positive)):
                key = (positive[i] + positive[j]).tobytes()
                if key in keys:
                    decomposable.add(key)
        simple = [R for R in positive if R.tobytes() not in decomposable]
        return np.stack(simple)

    def cartan_matrix(self, simple: np.ndarray) -> np.ndarray:
        """2 <s_i, s_j> for the simple roots."""
        D2 = self._denominator ** 2
        gram = simple @ self._circulant @ simple.T
        return gram // D2

    def classify_root_system(self) -> RootSystemReport:
        """
        Identify the reduced root system of the geometry.

        Returns:
            Report with ADE type, root count, Weyl order and minimal orbit order;
            affine flag for chi = 0 and type Infinite for chi < 0
        """
        chi = self.seifert.chi
        rank = self.algebra.image_dimension()
        if chi < 0:
            logger.info("root_system_classified", geometry=self.seifert.label, type="Infinite")
            return RootSystemReport(rank=rank, type="Infinite", chi=str(chi))
        roots = self.reduced_roots()
        label = identify_type(rank, len(roots))
        order = weyl_order(label)
        if chi == 0:
            d = self.dynamics.enumerate_orbit(self.dynamics.affine_seed()).size
            affine = f"{label}-hat"
        else:
            cartan = self.cartan_matrix(self.simple_roots())
            d = order // max(sub_diagram_weyl_order(cartan, i) for i in range(len(cartan)))
            affine = None
        report = RootSystemReport(
            rank=rank,
            type=label,
            root_count=len(roots),
            weyl_order=order,
            minimal_orbit_order=d,
            affine=affine,
            chi=str(chi),
            coxeter_matches=(len(roots) // rank == self.a),
        )
        logger.info("root_system_classified", geometry=self.seifert.label, type=label, roots=len(roots), d=d)
        return report

    def _coweight_image(self, simple: np.ndarray, cartan: np.ndarray, node: int) -> GAVector:
        """alpha . v* for the fundamental coweight of `node`, as a primitive integral vector."""
        coweight = sympy.Matrix(cartan.tolist()).inv()[:, node]
        D = self._denominator
        image = self._circulant @ simple.T  # columns alpha . s_k, times D
        weights = [Fraction(str(coweight[k])) for k in range(len(simple))]
        coeffs = [
            sum((Fraction(int(image[h, k]), D) * weights[k] for k in range(len(simple))), Fraction(0))
            for h in range(self.a)
        ]
        scale = lcm(*(c.denominator for c in coeffs))
        ints = [int(c * scale) for c in coeffs]
        divisor = gcd(*ints)
        return GAVector.of(x // divisor for x in ints)

    def _holds_antipodal_pair(self, seed: GAVector) -> bool:
        """True if the orbit of `seed` contains e_h + e_(h + a/2) for some h."""
        if self.a % 2:
            return False
        half = self.a // 2
        for member in self.dynamics.enumerate_orbit(seed).members:
            support = [h for h, c in enumerate(member.coeffs) if c]
            if len(support) == 2 and support[1] - support[0] == half and all(member[h] == 1 for h in support):
                return True
        return False

    def minimal_orbit_vector(self) -> GAVector:
        """
        Vector whose orbit realizes the minimal order d.

        Deletes a simple root whose removal leaves the largest Weyl group and
        returns alpha . v* for the matching fundamental coweight v*. Nodes tied
        on Weyl order (the outer nodes of D4, the two ends of A_n and E6) are
        broken in favor of the orbit holding e_h + e_(h + a/2), then by node
        index. For (2,2,p odd) this is the vector node, whose orbit contains
        e_0 + e_p.

        Raises:
            NoFiniteMinimalOrbitError: chi <= 0
        """
        if self.seifert.chi <= 0:
            raise NoFiniteMinimalOrbitError(f"chi = {self.seifert.chi} has no finite minimal orbit")
        simple = self.simple_roots()
        cartan = self.cartan_matrix(simple)
        orders = [sub_diagram_weyl_order(cartan, i) for i in range(len(cartan))]
        best = max(orders)
        tied = [i for i, o in enumerate(orders) if o == best]
        candidates = [(self._coweight_image(simple, cartan, i), i) for i in tied]
        if len(candidates) > 1:
            candidates.sort(key=lambda c: (not self._holds_antipodal_pair(c[0]), c[1]))
        vector, removed = candidates[0]
        logger.info(
            "minimal_orbit_vector", geometry=self.seifert.label, vector=vector.key(), removed=removed, ties=len(tied)
        )
        return vector
