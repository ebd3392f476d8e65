"""Tests for Monte Carlo model specs, chain settings and histograms."""

from fractions import Fraction

import numpy as np
import pytest

from src.core.exceptions import DomainError, InvalidFiberOrderError, InvalidTorusLabelError
from src.models.sampler import ChainConfig, Histogram, ModelSpec, batch_means


def make_histogram(density, samples=100, trace=None, stderr=None):
    density = np.asarray(density, dtype=float)
    edges = np.linspace(-1.0, 1.0, len(density) + 1)
    return Histogram(
        edges=edges,
        density=density,
        stderr=np.zeros_like(density) if stderr is None else np.asarray(stderr, dtype=float),
        samples=samples,
        n=4,
        a=4,
        acceptance=0.5,
        batches=2,
        traces={1: np.asarray(trace if trace is not None else [1.0, 1.0, 1.0, 1.0])},
    )


class TestModelSpec:

    def test_geometry(self):
        spec = ModelSpec("A", 1.0, 10, orders=(2, 2, 4))
        assert spec.a == 4
        assert spec.chi == Fraction(1, 4)
        assert spec.label == "A(2,2,4)"

    def test_torus(self):
        spec = ModelSpec("Torus", 1.0, 10, torus=(2, 3))
        assert spec.a == 6
        assert spec.label == "T(2,3)"

    @pytest.mark.parametrize("torus", [(2, 4), (1, 3), None])
    def test_bad_torus(self, torus):
        with pytest.raises(InvalidTorusLabelError):
            ModelSpec("Torus", 1.0, 10, torus=torus)

    @pytest.mark.parametrize("orders", [(), (1, 2, 3)])
    def test_bad_orders(self, orders):
        with pytest.raises(InvalidFiberOrderError):
            ModelSpec("B", 1.0, 10, orders=orders)

    @pytest.mark.parametrize(
        "family,u,n",
        [("E", 1.0, 10), ("A", 0.0, 10), ("A", 1.0, 1)],
    )
    def test_bad_values(self, family, u, n):
        with pytest.raises(DomainError):
            ModelSpec(family, u, n, orders=(2, 2, 2))

    def test_with_u(self):
        spec = ModelSpec("C", 1.0, 10, orders=(2, 3, 3)).with_u(2.0)
        assert spec.u == 2.0
        assert spec.family == "C"
        assert spec.to_dict()["orders"] == [2, 3, 3]


class TestChainConfig:

    def test_defaults(self):
        config = ChainConfig()
        assert config.batches <= config.sweeps
        assert config.to_dict()["range"] is None

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"sweeps": 0},
            {"warmup": -1},
            {"width": 0.0},
            {"bins": 0},
            {"seed": -1},
            {"batches": 1},
            {"sweeps": 5, "batches": 10},
            {"range": (1.0, -1.0)},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            ChainConfig(**kwargs)

    def test_to_dict_lists(self):
        data = ChainConfig(range=(-2.0, 2.0), moment_orders=(1, 3)).to_dict()
        assert data["range"] == [-2.0, 2.0]
        assert data["moment_orders"] == [1, 3]


class TestBatchMeans:

    def test_constant_trace(self):
        estimate = batch_means(np.full(40, 2.5), 4)
        assert estimate.value == 2.5
        assert estimate.stderr == 0.0

    def test_alternating_batches(self):
        trace = np.repeat([1.0, 3.0], 10)
        estimate = batch_means(trace, 2)
        assert estimate.value == 2.0
        assert estimate.stderr == pytest.approx(np.std([1.0, 3.0], ddof=1) / np.sqrt(2))

    def test_too_short(self):
        with pytest.raises(DomainError):
            batch_means(np.ones(3), 4)


class TestHistogram:

    def test_mass_and_rows(self):
        h = make_histogram([0.25, 0.75])
        assert h.mass == pytest.approx(1.0)
        assert h.rows() == [(-0.5, 0.25, 0.0), (0.5, 0.75, 0.0)]

    def test_moment(self):
        h = make_histogram([0.5, 0.5], trace=[1.0, 2.0, 3.0, 4.0])
        assert h.moment(1).value == pytest.approx(2.5)
        with pytest.raises(DomainError):
            h.moment(2)

    def test_merge_weights(self):
        merged = Histogram.merge(
            [make_histogram([1.0, 0.0], samples=300), make_histogram([0.0, 1.0], samples=100)]
        )
        assert merged.density == pytest.approx([0.75, 0.25])
        assert merged.samples == 400
        assert merged.mass == pytest.approx(1.0)
        assert len(merged.traces[1]) == 8

    def test_merge_stderr(self):
        merged = Histogram.merge(
            [make_histogram([0.5, 0.5], stderr=[0.2, 0.2]), make_histogram([0.5, 0.5], stderr=[0.2, 0.2])]
        )
        assert merged.stderr == pytest.approx([0.2 / np.sqrt(2)] * 2)

    def test_merge_rejects_other_binning(self):
        with pytest.raises(DomainError):
            Histogram.merge([make_histogram([0.5, 0.5]), make_histogram([1 / 3] * 3)])

    def test_merge_empty(self):
        with pytest.raises(DomainError):
            Histogram.merge([])
