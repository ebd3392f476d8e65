"""Tests for planar moments, the residue oracle and singular loci."""

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from src.core.exceptions import DomainError
from src.models.reports import MomentRequest
from src.services.invariants_service import (
    InvariantsService,
    _g_coefficient_binomial,
    _g_coefficient_hypergeometric,
    _odd_even_power_parts,
    beta,
    beta2,
    hyp2f1_terminating,
)
from src.services.spectral_curve_service import SpectralCurveService, solve_kappa
from src.services.toporec_service import ToporecService


@pytest.fixture(scope="module")
def invariants():
    return InvariantsService()


@pytest.fixture(scope="module")
def curves():
    return SpectralCurveService()


class TestHypergeometric:

    def test_zero_degree(self):
        assert hyp2f1_terminating(0, 0.3, 1.0, 0.7) == 1.0

    def test_linear(self):
        assert hyp2f1_terminating(-1, 0.5, 2.0, 0.4) == pytest.approx(1 - 0.5 * 0.4 / 2.0)

    def test_positive_parameter_rejected(self):
        with pytest.raises(DomainError):
            hyp2f1_terminating(2, 0.5, 1.0, 0.1)

    @given(
        n=st.sampled_from([1.0, 1.5, 2.0, 3.0, 4.5, 6.0]),
        m=st.integers(min_value=0, max_value=5),
        kappa=st.floats(min_value=0.3, max_value=0.99),
    )
    @hypothesis_settings(max_examples=60, deadline=None)
    def test_term_recursion_matches_binomial_sum(self, n, m, kappa):
        a = _g_coefficient_hypergeometric(n, m, kappa)
        b = _g_coefficient_binomial(n, m, kappa)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12 * max(1.0, abs(b)))

    @pytest.mark.parametrize("p,m", [(3, 1), (3, 2), (5, 1), (5, 3), (7, 2)])
    def test_odd_parts_both_ways(self, p, m):
        hyper = _odd_even_power_parts(p, m, 0.8)
        binomial = _odd_even_power_parts(p, m, 0.8, hypergeometric=False)
        assert hyper == pytest.approx(binomial, rel=1e-12)


class TestPlanarEven:

    @pytest.mark.parametrize("p,u", [(2, 0.5), (2, 1.0), (4, 1.0), (6, 2.0)])
    def test_first_moment_closed_form(self, invariants, p, u):
        kappa = solve_kappa(p, u)
        expected = 2 * p / u * kappa ** (-p) * (1 / kappa - kappa)
        assert invariants.planar_moment_even(p, u, 0) == pytest.approx(expected, rel=1e-12)
        assert invariants.planar_homfly_k2(p, u) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("p", [2, 4])
    @pytest.mark.parametrize("u", [0.5, 1.0])
    @pytest.mark.parametrize("m", [0, 1])
    def test_oracle_agreement(self, invariants, curves, p, u, m):
        k = p * (2 * m + 1) // 2
        closed = invariants.planar_moment_even(p, u, m)
        oracle = invariants.lagrange_oracle(curves.curve_even(p, u), k)
        assert closed == pytest.approx(oracle, rel=1e-8)

    def test_inverse_power_oracle(self, invariants, curves):
        curve = curves.curve_even(2, 1.0)
        assert invariants.lagrange_oracle(curve, -1) == pytest.approx(invariants.lagrange_oracle(curve, 1), rel=1e-8)

    def test_oracle_node_doubling(self, invariants, curves):
        curve = curves.curve_even(4, 1.0)
        coarse = invariants.lagrange_oracle(curve, 2, nodes=400)
        fine = invariants.lagrange_oracle(curve, 2, nodes=800)
        assert abs(coarse - fine) <= 1e-10 * abs(fine)

    def test_oracle_zero_index(self, invariants, curves):
        assert invariants.lagrange_oracle(curves.curve_even(2, 1.0), 0) == 0.0

    @pytest.mark.parametrize("p,m", [(3, 0), (4, -1)])
    def test_domain(self, invariants, p, m):
        with pytest.raises(DomainError):
            invariants.planar_moment_even(p, 1.0, m)


class TestPlanarOdd:

    @pytest.mark.parametrize("p", [3, 5])
    @pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
    def test_homfly_kp(self, invariants, p, u):
        assert invariants.planar_moment_odd(p, u, 2) == pytest.approx(invariants.planar_homfly_kp(p, u), rel=1e-10)

    @pytest.mark.parametrize("p,u,k", [(3, 1.0, 2), (3, 0.5, 4), (5, 1.0, 2), (5, 2.0, 4)])
    def test_oracle_even_powers(self, invariants, curves, p, u, k):
        closed = invariants.planar_moment_odd(p, u, k)
        oracle = invariants.lagrange_oracle(curves.curve_odd(p, u), k)
        assert closed == pytest.approx(oracle, rel=1e-8)

    @pytest.mark.parametrize("p", [3, 5])
    def test_odd_powers_continue_even_formula(self, invariants, p):
        kappa = solve_kappa(p, 1.0)
        assert invariants.planar_moment_odd(p, 1.0, p) == pytest.approx(
            InvariantsService._even_formula(p, 1.0, 0, kappa), rel=1e-10
        )
        assert invariants.planar_moment_odd(p, 1.0, 3 * p) == pytest.approx(
            InvariantsService._even_formula(p, 1.0, 1, kappa), rel=1e-10
        )

    def test_odd_powers_off_lattice_vanish(self, invariants):
        assert invariants.planar_moment_odd(3, 1.0, 1) == 0.0
        assert invariants.planar_moment_odd(3, 1.0, 5) == 0.0

    @pytest.mark.parametrize("p,k", [(4, 2), (3, 0)])
    def test_domain(self, invariants, p, k):
        with pytest.raises(DomainError):
            invariants.planar_moment_odd(p, 1.0, k)


class TestDispatch:

    def test_normalization(self, invariants):
        assert invariants.planar_moment(4, 1.0, 0) == 1.0

    def test_sign_symmetry(self, invariants):
        assert invariants.planar_moment(4, 1.0, -2) == invariants.planar_moment(4, 1.0, 2)

    def test_even_family_gaps(self, invariants):
        # only k = p(2m + 1)/2 survives for p even
        assert invariants.planar_moment(4, 1.0, 1) == 0.0
        assert invariants.planar_moment(4, 1.0, 4) == 0.0
        assert invariants.planar_moment(4, 1.0, 6) == pytest.approx(invariants.planar_moment_even(4, 1.0, 1))

    def test_request_genus_zero(self, invariants):
        request = MomentRequest(p=2, u=1.0, k=1)
        assert invariants.moment(request) == pytest.approx(invariants.planar_moment_even(2, 1.0, 0))

    def test_moment_table_rows(self, invariants):
        rows = invariants.moment_table(4, [0.5, 1.0], 0, [2, 6])
        assert [(r.u, r.k) for r in rows] == [(0.5, 2), (0.5, 6), (1.0, 2), (1.0, 6)]
        assert all(r.g == 0 and r.p == 4 for r in rows)


class TestHigherMoments:

    @pytest.fixture(scope="class")
    def table(self, curves):
        return ToporecService.for_curve(curves.curve_even(2, 1.0)).correlator_table(1, 1)

    def test_genus_zero_from_table(self, invariants, table):
        assert invariants.higher_moment(table, 0, 1) == pytest.approx(invariants.planar_moment_even(2, 1.0, 0), rel=1e-8)

    def test_genus_zero_third_power(self, invariants, table):
        assert invariants.higher_moment(table, 0, 3) == pytest.approx(invariants.planar_moment_even(2, 1.0, 1), rel=1e-8)

    def test_genus_one_request(self, invariants, table):
        value = invariants.moment(MomentRequest(p=2, u=1.0, k=1, g=1), table)
        assert np.isfinite(value)
        assert value == invariants.higher_moment(table, 1, 1)


class TestLimits:

    @pytest.mark.parametrize("p", [2, 4, 6])
    def test_gaussian_limit(self, invariants, p):
        moment, semicircle = invariants.gaussian_limit(p, 1e-3)
        assert semicircle == pytest.approx(1 + 1e-3 / 8)
        assert moment == pytest.approx(semicircle, abs=1e-4)


class TestSingularityLocus:

    def test_kappa_star(self):
        assert abs(InvariantsService.singularity_locus(3).kappa_star - np.sqrt(2)) <= 1e-12

    def test_s_value(self):
        assert InvariantsService.singularity_locus(2).s_value == pytest.approx(3 * np.log(3), rel=1e-14)

    def test_six_values_and_period(self):
        locus = InvariantsService.singularity_locus(4)
        assert len(locus.u_values) == 6
        assert locus.u_values[0] == 0
        assert locus.period == pytest.approx(8j * np.pi * 16)
        assert locus.note == "u = 0 removed"

    def test_small_p(self):
        with pytest.raises(DomainError):
            InvariantsService.singularity_locus(1)

    @pytest.mark.parametrize("p", [2, 3, 4, 7])
    def test_beta_at_one(self, p):
        assert beta(p, 1.0) == pytest.approx(4.0)
        assert beta2(p, 1.0) == pytest.approx(0.0)

    @pytest.mark.parametrize("p", [2, 4, 6])
    def test_beta_is_square_of_branch_sum(self, curves, p):
        curve = curves.curve_even(p, 1.0)
        h = p // 2
        assert beta(p, curve.kappa) == pytest.approx((curve.z_plus**h + curve.z_plus**-h) ** 2, rel=1e-10)
