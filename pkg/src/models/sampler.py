"""Monte Carlo model specifications, chain settings and histograms."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from src.core.exceptions import DomainError, InvalidFiberOrderError, InvalidTorusLabelError

FAMILIES = ("A", "B", "C", "D", "Torus")


@dataclass(frozen=True)
class ModelSpec:
    """
    One sinh-ensemble.

    The A, B, C and D families take Seifert fiber orders; the torus family
    takes a coprime pair (p, q) and ignores ``orders``.
    """

    family: str
    u: float
    n: int
    orders: tuple[int, ...] = ()
    torus: tuple[int, int] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not self.u > 0:
            raise DomainError(f"u must be > 0, got {self.u}")
        if self.n < 2:
            raise DomainError(f"N must be >= 2, got {self.n}")
        if self.family == "Torus":
            if self.torus is None or len(self.torus) != 2:
                raise InvalidTorusLabelError("the torus family needs a label (p, q)")
            p, q = self.torus
            if p < 2 or q < 2 or gcd(p, q) != 1:
                raise InvalidTorusLabelError(f"(p, q) = ({p}, {q}) must be coprime and >= 2")
        elif not self.orders or any(am < 2 for am in self.orders):
            raise InvalidFiberOrderError(f"fiber orders must be >= 2, got {self.orders}")

    @property
    def a(self) -> int:
        if self.family == "Torus":
            return self.torus[0] * self.torus[1]
        return lcm(*self.orders)

    @property
    def chi(self) -> Fraction:
        orders = self.torus if self.family == "Torus" else self.orders
        return 2 - len(orders) + sum((Fraction(1, am) for am in orders), Fraction(0))

    @property
    def label(self) -> str:
        if self.family == "Torus":
            return f"T({self.torus[0]},{self.torus[1]})"
        return f"{self.family}({','.join(str(am) for am in self.orders)})"

    def with_u(self, u: float) -> ModelSpec:
        return ModelSpec(self.family, u, self.n, self.orders, self.torus)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "u": self.u,
            "n": self.n,
            "orders": list(self.orders),
            "torus": list(self.torus) if self.torus else None,
        }


@dataclass(frozen=True)
class ChainConfig:
    """
    Metropolis chain settings.

    ``range`` fixes the histogram window; when omitted it is set after the
    warm-up from the extent of the configuration. ``moment_orders`` lists the
    k whose per-sweep traces (1/N) sum_i e^(k t_i / a) are recorded.
    """

    warmup: int = 1_000
    sweeps: int = 10_000
    width: float = 0.5
    seed: int = 0
    bins: int = 100
    range: tuple[float, float] | None = None
    batches: int = 20
    moment_orders: tuple[int, ...] = (1, 2)

    def __post_init__(self):
        if self.warmup < 0 or self.sweeps < 1:
            raise DomainError(f"need warmup >= 0 and sweeps >= 1, got {self.warmup}, {self.sweeps}")
        if not self.width > 0 or self.bins < 1 or self.seed < 0:
            raise DomainError("width and bins must be positive and the seed non-negative")
        if self.batches < 2 or self.batches > self.sweeps:
            raise DomainError(f"batches must lie in [2, sweeps], got {self.batches}")
        if self.range is not None and not self.range[0] < self.range[1]:
            raise DomainError(f"empty histogram range {self.range}")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["range"] = list(self.range) if self.range else None
        data["moment_orders"] = list(self.moment_orders)
        return data


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    stderr: float


def batch_means(trace: np.ndarray, batches: int) -> MomentEstimate:
    """Mean of a correlated series with the batch-means standard error."""
    trace = np.asarray(trace, dtype=float)
    if len(trace) < batches:
        raise DomainError(f"{len(trace)} samples cannot fill {batches} batches")
    size = len(trace) // batches
    means = trace[: size * batches].reshape(batches, size).mean(axis=1)
    return MomentEstimate(float(trace.mean()), float(means.std(ddof=1) / np.sqrt(batches)))


@dataclass(frozen=True)
class Histogram:
    """
    Normalized particle histogram in t.

    ``density`` integrates to one over the window; ``outside`` is the fraction
    of binned positions that fell outside it. ``stderr`` comes from batch means
    over the measurement sweeps.
    """

    edges: np.ndarray
    density: np.ndarray
    stderr: np.ndarray
    samples: int
    n: int
    a: int
    outside: float = 0.0
    acceptance: float = 0.0
    width: float = 0.0
    batches: int = 20
    traces: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def centers(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def mass(self) -> float:
        return float(self.density @ self.widths)

    def same_binning(self, other: Histogram) -> bool:
        return self.edges.shape == other.edges.shape and bool(np.allclose(self.edges, other.edges, rtol=0, atol=1e-12))

    def moment(self, k: int) -> MomentEstimate:
        """<(1/N) sum_i e^(k t_i / a)> from the recorded trace."""
        if k not in self.traces:
            raise DomainError(f"no trace recorded for k={k}; recorded {sorted(self.traces)}")
        return batch_means(self.traces[k], self.batches)

    def rows(self) -> list[tuple[float, float, float]]:
        return [(float(t), float(r), float(e)) for t, r, e in zip(self.centers, self.density, self.stderr)]

    @classmethod
    def merge(cls, parts: list[Histogram]) -> Histogram:
        """Weighted average of chains with identical binning, traces joined in chain order."""
        if not parts:
            raise DomainError("nothing to merge")
        first = parts[0]
        if any(not first.same_binning(h) for h in parts[1:]):
            raise DomainError("histograms with different binning cannot be merged")
        weights = np.array([h.samples for h in parts], dtype=float)
        weights /= weights.sum()
        density = sum(w * h.density for w, h in zip(weights, parts))
        stderr = np.sqrt(sum((w * h.stderr) ** 2 for w, h in zip(weights, parts)))
        traces = {k: np.concatenate([h.traces[k] for h in parts]) for k in first.traces}
        return cls(
            edges=first.edges,
            density=density,
            stderr=stderr,
            samples=sum(h.samples for h in parts),
            n=first.n,
            a=first.a,
            outside=float(sum(w * h.outside for w, h in zip(weights, parts))),
            acceptance=float(sum(w * h.acceptance for w, h in zip(weights, parts))),
            width=first.width,
            batches=first.batches,
            traces=traces,
        )
