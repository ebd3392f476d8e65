"""
Monte Carlo sampler service.

This service handles the sinh-ensemble energies, the Metropolis chain with
incremental energy updates, moment estimation and the BCD diagnostics.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from src.core.constants import ACCEPTANCE_BAND, INFINITE_ENERGY
from src.core.exceptions import DiagnosticWindowError, DomainError
from src.core.logging import get_logger
from src.models.reports import BCDComparison
from src.models.sampler import ChainConfig, Histogram, ModelSpec, MomentEstimate, batch_means

logger = get_logger(__name__)

LN2 = math.log(2.0)

# alpha . t for the short or long simple roots e_i (B) and 2 e_i (C)
SINGLE_ROOT_FACTOR = {"B": 1.0, "C": 2.0}


def log_abs_sinh(x) -> np.ndarray:
    """ln|sinh x| without overflow; -inf at x = 0."""
    x = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore"):
        return x + np.log1p(-np.exp(-2.0 * x)) - LN2


def acceptance_probability(delta: float) -> float:
    """Metropolis ratio min(1, exp(-delta))."""
    if delta <= 0:
        return 1.0
    return math.exp(-delta)


class EnsembleEnergy:
    """
    E = -sum_{i<j} ln R(t_i, t_j) + N sum_i V(t_i) for one model.

    Every positive root alpha contributes ln|f(alpha . t)| with
    f(d) = sinh^(2-r)(d/2) prod_m sinh(d/(2 a_m)). The A series has the roots
    t_i - t_j; BCD adds t_i + t_j and the single-particle roots. The torus model
    uses f(d) = sinh(d/2p) sinh(d/2q) and V = t^2 / (2 u p q).
    """

    def __init__(self, model: ModelSpec):
        self.model = model
        self.family = model.family
        if model.family == "Torus":
            p, q = model.torus
            self._terms = ((1 / (2 * p), 1.0), (1 / (2 * q), 1.0))
            self._v = 1 / (2 * model.u * p * q)
        else:
            r = len(model.orders)
            terms = [(1 / (2 * am), 1.0) for am in model.orders]
            if r != 2:
                terms.insert(0, (0.5, float(2 - r)))
            self._terms = tuple(terms)
            self._v = 1 / (2 * model.u)
        self.mirrored = model.family in ("B", "C", "D")
        self._single = SINGLE_ROOT_FACTOR.get(model.family)

    def root_log(self, d) -> np.ndarray:
        """ln|f(d)| elementwise, -inf where d = 0."""
        d = np.asarray(d, dtype=float)
        with np.errstate(invalid="ignore"):
            total = sum(power * log_abs_sinh(scale * d) for scale, power in self._terms)
        return np.where(d == 0, -np.inf, total)

    def potential(self, t) -> np.ndarray:
        return self._v * np.asarray(t, dtype=float) ** 2

    def _particle_logs(self, value: float, others: np.ndarray) -> np.ndarray:
        logs = self.root_log(value - others)
        if self.mirrored:
            logs = np.concatenate([logs, self.root_log(value + others)])
        if self._single is not None:
            logs = np.append(logs, self.root_log(self._single * value))
        return logs

    def energy(self, config) -> float:
        t = np.asarray(config, dtype=float)
        n = len(t)
        i, j = np.triu_indices(n, k=1)
        logs = [self.root_log(t[i] - t[j])]
        if self.mirrored:
            logs.append(self.root_log(t[i] + t[j]))
        if self._single is not None:
            logs.append(self.root_log(self._single * t))
        logs = np.concatenate(logs)
        if np.any(np.isneginf(logs)):
            return INFINITE_ENERGY
        return float(-logs.sum() + n * self.potential(t).sum())

    def delta(self, config: np.ndarray, index: int, value: float) -> float:
        """E(config with t_index = value) - E(config), in O(N)."""
        others = np.delete(config, index)
        new = self._particle_logs(value, others)
        if np.any(np.isneginf(new)):
            return INFINITE_ENERGY
        old = self._particle_logs(float(config[index]), others)
        n = len(config)
        return float(-(new - old).sum() + n * (self.potential(value) - self.potential(config[index])))


def energy(config, model: ModelSpec) -> float:
    """
    Energy of a configuration of t values.

    Returns INFINITE_ENERGY when an interaction factor vanishes: coincident
    particles, t_i = -t_j in the BCD families, or t_i = 0 for B and C.
    """
    return EnsembleEnergy(model).energy(config)


def initial_configuration(model: ModelSpec) -> np.ndarray:
    """Distinct starting positions on the scale of the support."""
    scale = math.sqrt(model.u * (model.a if model.family == "Torus" else 1))
    if model.family in ("B", "C", "D"):
        return scale * np.linspace(0.05, 1.5, model.n)
    return scale * np.linspace(-1.5, 1.5, model.n)


def default_range(model: ModelSpec) -> tuple[float, float]:
    """Histogram window shared by parallel chains: four times the Gaussian scale."""
    scale = math.sqrt(model.u * (model.a if model.family == "Torus" else 1))
    half = math.ceil(40 * scale) / 10
    return -half, half


def estimate_moments(samples, a: int, k: int, batches: int = 20) -> MomentEstimate:
    """
    <(1/N) sum_i e^(k t_i / a)> over stored configurations.

    Args:
        samples: Array of shape (sweeps, N)
        a: Exponent scale, the lcm of the fiber orders
        k: Power of U
        batches: Number of batches for the standard error

    Returns:
        MomentEstimate with the batch-means error bar
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2:
        raise DomainError(f"samples must have shape (sweeps, N), got {samples.shape}")
    return batch_means(np.exp(k * samples / a).mean(axis=1), batches)


def expected_dirac_mass(model: ModelSpec) -> Fraction:
    """-a chi / 4 for B and C, +a chi / 4 for D."""
    if model.family not in ("B", "C", "D"):
        raise DomainError(f"no Dirac peak for family {model.family}")
    mass = model.a * model.chi / 4
    return mass if model.family == "D" else -mass


class MonteCarloService:
    """Service for Metropolis sampling of the sinh-ensembles."""

    def _sweep(self, ensemble: EnsembleEnergy, t: np.ndarray, width: float, rng: np.random.Generator) -> int:
        steps = rng.normal(0.0, width, len(t))
        draws = rng.random(len(t))
        accepted = 0
        for i in range(len(t)):
            value = t[i] + steps[i]
            if draws[i] < acceptance_probability(ensemble.delta(t, i, value)):
                t[i] = value
                accepted += 1
        return accepted

    @staticmethod
    def _auto_range(t: np.ndarray) -> tuple[float, float]:
        half = math.ceil(12.5 * float(np.max(np.abs(t)))) / 10
        return -half, half

    def run_chain(self, model: ModelSpec, config: ChainConfig, seed=None) -> Histogram:
        """
        Run one Metropolis chain and histogram the measurement sweeps.

        The proposal width is tuned toward ACCEPTANCE_BAND during warm-up and
        frozen afterwards.

        Args:
            model: Ensemble to sample
            config: Chain settings
            seed: Optional SeedSequence or integer overriding config.seed

        Returns:
            Normalized Histogram with batch-means error bars and moment traces
        """
        rng = np.random.default_rng(config.seed if seed is None else seed)
        ensemble = EnsembleEnergy(model)
        t = initial_configuration(model)
        n = len(t)
        width = config.width
        low, high = ACCEPTANCE_BAND
        for _ in range(config.warmup):
            rate = self._sweep(ensemble, t, width, rng) / n
            if rate < low:
                width *= 0.9
            elif rate > high:
                width *= 1.1

        edges = np.linspace(*(config.range or self._auto_range(t)), config.bins + 1)
        widths = np.diff(edges)
        batch_size = config.sweeps // config.batches
        counts = np.zeros((config.batches, config.bins))
        traces = {k: np.empty(config.sweeps) for k in config.moment_orders}
        binned = 0
        accepted = 0
        for sweep in range(config.sweeps):
            accepted += self._sweep(ensemble, t, width, rng)
            # the BCD measure is invariant under each t_i -> -t_i
            values = np.concatenate([t, -t]) if ensemble.mirrored else t
            counts[min(sweep // batch_size, config.batches - 1)] += np.histogram(values, bins=edges)[0]
            binned += len(values)
            for k, trace in traces.items():
                trace[sweep] = np.mean(np.exp(k * t / model.a))

        inside = counts.sum()
        if inside == 0:
            raise DomainError(f"no samples fell inside the histogram range {edges[0]}..{edges[-1]}")
        density = counts.sum(axis=0) / (inside * widths)
        per_batch = counts / (np.maximum(counts.sum(axis=1, keepdims=True), 1) * widths)
        stderr = per_batch.std(axis=0, ddof=1) / np.sqrt(config.batches)
        acceptance = accepted / (n * config.sweeps)
        logger.info(
            "chain_finished",
            model=model.label,
            u=model.u,
            n=n,
            sweeps=config.sweeps,
            acceptance=acceptance,
            width=width,
        )
        return Histogram(
            edges=edges,
            density=density,
            stderr=stderr,
            samples=int(binned),
            n=n,
            a=model.a,
            outside=float(1 - inside / binned),
            acceptance=float(acceptance),
            width=float(width),
            batches=config.batches,
            traces=traces,
        )

    @staticmethod
    def l1_distance(hist: Histogram, reference, exclude: float = 0.0) -> float:
        """
        Integral of |rho_hist - rho_ref| over bins with |t| >= exclude.

        ``reference`` is a histogram with the same binning, an object with an
        ``evaluate(t)`` method such as a DensityCurve, or a callable.
        """
        if isinstance(reference, Histogram):
            if not hist.same_binning(reference):
                raise DomainError("histograms must share their binning")
            ref = reference.density
        elif hasattr(reference, "evaluate"):
            ref = reference.evaluate(hist.centers)
        else:
            ref = np.asarray(reference(hist.centers), dtype=float)
        mask = np.abs(hist.centers) >= exclude
        return float(np.sum(np.abs(hist.density - ref)[mask] * hist.widths[mask]))

    @staticmethod
    def support_width(hist: Histogram, threshold: float = 1e-3) -> float:
        """Width of the region where the density exceeds threshold times its maximum."""
        occupied = np.nonzero(hist.density > threshold * hist.density.max())[0]
        if len(occupied) == 0:
            return 0.0
        return float(hist.edges[occupied[-1] + 1] - hist.edges[occupied[0]])

    def dirac_mass(self, hist_g: Histogram, hist_a: Histogram, window: float, n: int | None = None) -> float:
        """
        N times the excess mass of the BCD histogram over the A histogram in |t| < window.

        Raises:
            DiagnosticWindowError: the window is not inside the support
        """
        if not hist_g.same_binning(hist_a):
            raise DomainError("histograms must share their binning")
        if window <= 0 or 2 * window >= self.support_width(hist_g):
            raise DiagnosticWindowError(
                f"window {window} is not inside the support of width {self.support_width(hist_g):.4g}"
            )
        mask = np.abs(hist_g.centers) < window
        excess = float(np.sum((hist_g.density - hist_a.density)[mask] * hist_g.widths[mask]))
        return excess * (n or hist_g.n)

    def bcd_compare(
        self, hist_a: Histogram, hist_g: Histogram, window: float = 0.2, model: ModelSpec | None = None
    ) -> BCDComparison:
        """
        Compare a BCD histogram at u with the A-series histogram at 2u.

        Args:
            hist_a: A-series histogram at 2u
            hist_g: B, C or D histogram at u, same binning
            window: Half-width of the excluded region around t = 0
            model: The BCD model, used for the expected peak mass

        Returns:
            BCDComparison with the L1 distance outside the window and the peak mass
        """
        peak = self.dirac_mass(hist_g, hist_a, window)
        expected = float(expected_dirac_mass(model)) if model is not None else None
        comparison = BCDComparison(
            family=model.family if model is not None else "?",
            window=window,
            l1_outside=self.l1_distance(hist_g, hist_a, exclude=window),
            peak_mass=peak,
            expected_mass=expected,
        )
        logger.info("bcd_compared", **comparison.model_dump())
        return comparison
