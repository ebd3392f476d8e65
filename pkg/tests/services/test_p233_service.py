"""Tests for the (2,3,3) branch-point constraints and fit."""

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from src.core.exceptions import DomainError
from src.services.p233_service import P233Service, branch_quintic, m3_at, quartic


class TestConstraints:

    def test_coupling_constant(self):
        assert P233Service(1.0).c == pytest.approx(np.exp(-1 / 72))

    @pytest.mark.parametrize("w", [2.5, 4.0, 20.0])
    def test_solutions_are_double_roots(self, w):
        service = P233Service(1.0)
        found = service.solutions(-0.01, w)
        assert found
        for z, m3 in found:
            coeffs = quartic(service.c, -0.01, m3, w)
            assert abs(P.polyval(z, coeffs)) < 1e-8
            assert abs(P.polyval(z, P.polyder(coeffs))) < 1e-8

    def test_weak_coupling_double_root(self):
        quintic = branch_quintic(1.0, 0.0, 2.0)
        for z in (-2.0, 2.0):
            assert P.polyval(z, quintic) == pytest.approx(0.0, abs=1e-12)
            assert P.polyval(z, P.polyder(quintic)) == pytest.approx(0.0, abs=1e-12)
        assert P.polyval(-1.5, quintic) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("c,m2,w", [(0.98, -0.01, 2.5), (0.7, -0.41, 30.0), (1.0, 0.2, 3.0)])
    def test_minus_two_is_never_crossed(self, c, m2, w):
        expected = -24 * c * (w - 2 * c * c - 4 * m2) ** 2
        assert P.polyval(-2.0, branch_quintic(c, m2, w)) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("u,m2,w", [(1.0, -0.01, 2.5), (1.0, -0.01, 4.0), (27.0, -0.41, 30.0)])
    def test_constraints_take_outer_root(self, u, m2, w):
        service = P233Service(u)
        sol = service.p233_constraints(m2, w)
        assert sol.z < -2
        coeffs = quartic(service.c, m2, sol.m3, w)
        assert abs(P.polyval(sol.z, coeffs)) < 1e-8
        assert abs(P.polyval(sol.z, P.polyder(coeffs))) < 1e-8
        assert sol.m3 == pytest.approx(m3_at(service.c, m2, w, sol.z))

    def test_w_must_exceed_two(self):
        with pytest.raises(DomainError):
            P233Service(1.0).p233_constraints(-0.01, 1.5)

    def test_non_positive_u(self):
        with pytest.raises(DomainError):
            P233Service(0.0)


@pytest.mark.slow
class TestFit:

    def test_weak_coupling(self):
        fitted = P233Service(1.0).p233_fit(-0.01)
        assert fitted.m3 == pytest.approx(-0.0203, abs=5e-3)
        assert fitted.density.mass == pytest.approx(1.0, abs=1e-6)

    def test_strong_coupling(self):
        fitted = P233Service(27.0).p233_fit(-0.41)
        assert fitted.m3 == pytest.approx(-0.6884, abs=2e-2)
