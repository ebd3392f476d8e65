"""Tests for the (2,2,2,2) elliptic solution."""

import numpy as np
import pytest

from src.core.exceptions import DomainError
from src.services.elliptic_service import EllipticService, legendre_e, legendre_f


@pytest.fixture(scope="module")
def solution():
    return EllipticService(1.0).elliptic_2222()


class TestLegendreIntegrals:

    def test_zero_modulus(self):
        assert complex(legendre_f(0.5, 0.0)) == pytest.approx(np.arcsin(0.5))
        assert complex(legendre_e(0.5, 0.0)) == pytest.approx(np.arcsin(0.5))


class TestElliptic2222:

    def test_mass(self, solution):
        assert solution.density.mass == pytest.approx(1.0, abs=1e-8)
        assert solution.gamma > 1

    def test_saddle_relation(self, solution):
        residuals = EllipticService.saddle_residual(solution)
        assert len(residuals) == 10
        assert np.max(np.abs(residuals)) <= 1e-6

    def test_density_is_non_negative(self, solution):
        assert np.all(solution.density.rho >= -1e-10)

    def test_support_edge(self, solution):
        assert solution.density.edge == pytest.approx(2 * np.log(solution.gamma))

    def test_to_dict(self, solution):
        data = solution.to_dict()
        assert set(data) == {"u", "gamma", "c_e", "c_f", "mass"}

    def test_non_positive_u(self):
        with pytest.raises(DomainError):
            EllipticService(-1.0)
