"""Tests for Newton-polygon scaffolds of minimal orbits."""

import pytest

from src.core.exceptions import DomainError
from src.models.algebra import GAVector
from src.services.algebra_service import make_seifert
from src.services.newton_service import NewtonService, slope_polynomial
from src.services.root_system_service import RootSystemService


def scaffold(*orders: int):
    roots = RootSystemService(make_seifert(orders))
    orbit = roots.dynamics.enumerate_orbit(roots.minimal_orbit_vector())
    return NewtonService(roots.dynamics).degree_data(orbit), orbit


class TestSlopePolynomial:

    def test_cyclotomic(self):
        # roots zeta_4^1, zeta_4^3 give xi^2 + 1
        assert slope_polynomial([1, 3], 4) == [1, 0, 1]

    def test_single_root(self):
        assert slope_polynomial([0], 6) == [1, -1]

    def test_not_integral(self):
        with pytest.raises(DomainError):
            slope_polynomial([1], 3)


class TestDegreeData:

    def test_2_3_3(self):
        data, orbit = scaffold(2, 3, 3)
        assert data.deg_y == orbit.size == 8
        assert data.deg_x == 8
        assert data.minimal_x_power == 4

    def test_2_3_4(self):
        data, _ = scaffold(2, 3, 4)
        assert data.deg_x == 36
        assert data.deg_y == 27
        assert data.tilde_power == 6

    def test_2_3_5(self):
        data, _ = scaffold(2, 3, 5)
        assert data.deg_x == 540
        assert data.deg_y == 240
        assert data.minimal_x_power == 270

    def test_2_3_5_slope_polynomials(self):
        data, _ = scaffold(2, 3, 5)
        by_n0 = {abs(s.n0): s.polynomial for s in data.slopes}
        assert by_n0[6] == [1, 0, 0, 0, 0, 1]
        assert by_n0[3] == [1] + [0] * 9 + [-2] + [0] * 9 + [1]

    def test_multiplicities_cover_the_orbit(self):
        data, orbit = scaffold(2, 3, 4)
        assert sum(s.multiplicity for s in data.slopes) == orbit.size

    def test_boundary_endpoints(self):
        data, _ = scaffold(2, 3, 3)
        terms = {(t.y_power, t.x_power): t.coefficient for t in data.boundary}
        S = data.minimal_x_power
        assert terms[(0, S)] == 1
        assert abs(terms[(data.deg_y, S)]) == 1

    def test_needs_finite_orbit(self):
        roots = RootSystemService(make_seifert((2, 3, 7)))
        orbit = roots.dynamics.enumerate_orbit(GAVector.basis(42, 0), cap=20)
        with pytest.raises(DomainError):
            NewtonService(roots.dynamics).degree_data(orbit)
