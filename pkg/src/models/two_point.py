"""Residue vectors and singularity matrices of the two-point function."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from src.models.algebra import GAVector


@dataclass(frozen=True)
class ModeRecord:
    """Particular solution c * x^{k-1} (ln x / 2 i pi)^order dx for Fourier mode k."""

    k: int
    order: int
    coefficient: complex


@dataclass(frozen=True)
class ResidueVectors:
    vectors: tuple[GAVector, ...]
    modes: tuple[ModeRecord, ...]

    def __getitem__(self, j: int) -> GAVector:
        if j < len(self.vectors):
            return self.vectors[j]
        return GAVector.zeros(self.vectors[0].modulus)

    @property
    def log_modes(self) -> list[ModeRecord]:
        return [m for m in self.modes if m.order > 0]

    def to_dict(self) -> dict:
        """C^(j) as "num/den" strings, and the log modes with their orders."""
        return {
            "vectors": [v.to_strings() for v in self.vectors],
            "log_modes": [{"k": m.k, "order": m.order} for m in self.log_modes],
        }


@dataclass(frozen=True)
class SingularityMatrix:
    """
    Matrix of GAVectors indexed by orbit members.

    Stored as an integer tensor numerators[p, q, i] over a common denominator.
    """

    members: tuple[GAVector, ...]
    numerators: np.ndarray = field(repr=False)
    denominator: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def modulus(self) -> int:
        return self.numerators.shape[2]

    def entry(self, p: int, q: int) -> GAVector:
        return GAVector(self.modulus, tuple(Fraction(int(x), self.denominator) for x in self.numerators[p, q]))

    def coordinate(self, i: int) -> np.ndarray:
        """Scalar d x d matrix of the i-th coefficient, as floats."""
        return self.numerators[:, :, i].astype(float) / self.denominator

    def to_dict(self) -> dict:
        keys = [v.key() for v in self.members]
        return {
            keys[p]: {keys[q]: self.entry(p, q).to_strings() for q in range(self.size)}
            for p in range(self.size)
        }


@dataclass(frozen=True)
class SparseDecomposition:
    """B = plain * J + sparse with J the all-ones matrix."""

    plain: GAVector
    sparse: SingularityMatrix

    def row_nonzero_counts(self, i: int) -> np.ndarray:
        return np.count_nonzero(self.sparse.numerators[:, :, i], axis=1)

    def entry_values(self) -> set[Fraction]:
        values = np.unique(self.sparse.numerators)
        return {Fraction(int(x), self.sparse.denominator) for x in values}
