"""
Branch tracking along a cut.

Follows one root of a real-coefficient polynomial family as the real parameter
moves across the support, always keeping the representative in the upper half
plane, and integrates densities with edge-weighted Gauss-Legendre nodes.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from src.core.exceptions import BranchTrackingError
from src.core.logging import get_logger

logger = get_logger(__name__)

Equation = Callable[[float], np.ndarray]


def upper_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of the polynomial reflected into the closed upper half plane."""
    roots = np.roots(coeffs)
    return np.where(roots.imag < 0, roots.conj(), roots)


class BranchTracker:
    """
    Root of equation(t) followed continuously from a branch point.

    Args:
        equation: Maps the real parameter t to polynomial coefficients in z
        t_start: Parameter value at the branch point
        t_end: Opposite end of the cut
        z_start: Double root at t_start
        steps: Number of tracking steps
    """

    def __init__(self, equation: Equation, t_start: float, t_end: float, z_start: complex, steps: int = 4000):
        self.equation = equation
        self.t_start = float(t_start)
        self.t_end = float(t_end)
        # clustered toward both ends, where the tracked roots move fastest
        theta = np.linspace(0.0, np.pi, steps + 1)
        self._path = self.t_start + (self.t_end - self.t_start) * (1 - np.cos(theta)) / 2
        track = np.empty(len(self._path), dtype=complex)
        current = complex(z_start)
        for i, t in enumerate(self._path):
            candidates = upper_roots(equation(t))
            current = candidates[np.argmin(np.abs(candidates - current))]
            track[i] = current
        self._track = track
        middle = track[len(track) // 2]
        if abs(middle.imag) <= 1e-9 * max(1.0, abs(middle)):
            raise BranchTrackingError(f"no conjugate pair over the cut near t={self._path[len(track) // 2]:.6g}")
        order = np.argsort(self._path)
        self._sorted_path = self._path[order]
        self._sorted_track = track[order]

    @property
    def end_root(self) -> complex:
        return complex(self._track[-1])

    def root_at(self, t: float) -> complex:
        """Root on the tracked branch at parameter t inside the cut."""
        idx = int(np.clip(np.searchsorted(self._sorted_path, t), 0, len(self._sorted_path) - 1))
        neighbors = [idx - 1, idx] if idx > 0 else [idx]
        ref = self._sorted_track[min(neighbors, key=lambda j: abs(self._sorted_path[j] - t))]
        candidates = upper_roots(self.equation(t))
        return complex(candidates[np.argmin(np.abs(candidates - ref))])

    def roots_at(self, ts) -> np.ndarray:
        return np.array([self.root_at(float(t)) for t in np.atleast_1d(ts)], dtype=complex)


def gauss_theta(nodes: int, edge: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights for integrals over [-edge, edge] in t = edge * cos(theta).

    Square-root edge behaviour becomes smooth in theta, so Gauss-Legendre
    converges geometrically.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = np.pi * (x + 1) / 2
    return edge * np.cos(theta), w * (np.pi / 2) * edge * np.sin(theta)


def default_grid(edge: float, points: int = 201) -> np.ndarray:
    return np.linspace(-edge, edge, points)
