"""Orbit and skeleton-graph value types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.models.algebra import GAVector


@dataclass(frozen=True)
class Orbit:
    """Breadth-first closure of a seed under the pseudoreflections."""

    seed: GAVector
    members: tuple[GAVector, ...]
    verdict: Literal["Finite", "InfiniteBeyond"]
    cap: int
    # integer representation: members == array / scale
    array: np.ndarray = field(repr=False, compare=False, default=None)
    scale: int = 1

    @property
    def is_finite(self) -> bool:
        return self.verdict == "Finite"

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def modulus(self) -> int:
        return self.seed.modulus

    def index(self) -> dict[GAVector, int]:
        return {v: i for i, v in enumerate(self.members)}

    def describe(self) -> str:
        if self.is_finite:
            return f"Finite({self.size})"
        return f"InfiniteBeyond({self.cap})"


@dataclass(frozen=True)
class SkeletonGraph:
    """Orbit members glued along the rotated cuts, edges labeled by the rotation."""

    vertices: tuple[GAVector, ...]
    edges: tuple[tuple[int, int, int], ...]

    def labels_at(self, i: int) -> set[int]:
        return {g for (src, _, g) in self.edges if src == i}

    def to_edge_list(self) -> str:
        lines = [f"{self.vertices[i].key()} {self.vertices[j].key()} {g}" for i, j, g in self.edges]
        return "\n".join(lines) + ("\n" if lines else "")
