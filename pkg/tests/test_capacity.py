import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fblec.capacity import (Method, closed_form_j, delay_outage_prob, ec_at, ec_upper_bound,
                            effective_capacity, grid_optimal_epsilon, optimal_epsilon, psi,
                            psi_closed_form, psi_oracle, shannon_ec, theta_upper_bound)
from fblec.errors import DomainError
from fblec.power import asymptotic_F
from fblec.rate import SystemParams

from oracles import psi_trapezoid

# quad oracle at (500, 1e-4, 0.01, 10^2.5); the graded 1e6-point trapezoid gives 0.0009991000422718633
PSI_25DB = 0.0009991000741367832
# golden-section eps* at (n=500, theta=0.01, rho=100) and the 1e4-point log-grid argmin
EPS_STAR_GOLDEN = 1.2078840614e-4
EPS_STAR_GRID = 0.0001209084697532694


def params(rho=10 ** 2.5, **kw):
    values = dict(n=500, eps=1e-4, theta=0.01, rho=rho)
    values.update(kw)
    return SystemParams(**values)


def rel(a, b):
    return abs(a - b) / abs(b)


class TestOracle:
    def test_reference_value(self):
        assert rel(psi_oracle(params()), PSI_25DB) <= 1e-9

    def test_agrees_with_trapezoid(self):
        assert rel(psi_trapezoid(500, 1e-4, 0.01, 10 ** 2.5), PSI_25DB) <= 1e-7

    def test_vanishing_theta(self):
        # psi - 1 ~ -n*theta*E[r], so the SNR is kept at 0 dB
        assert abs(psi_oracle(params(rho=1.0, theta=1e-9)) - 1.0) <= 1e-6

    def test_diagnostics(self):
        value, diag = psi_oracle(params(), return_diagnostics=True)
        assert diag["abserr"] <= 1e-10 * value
        assert diag["tail_bound"] <= math.exp(-37.0)

    @pytest.mark.parametrize("rho", [0.5, 10.0, 1e3, 1e5])
    def test_half_eps_matches_closed_form(self, rho):
        # with beta = 0 the kernel is exactly (1+rho z)^alpha and the closed form is exact
        p = params(rho=rho, eps=0.5)
        assert rel(psi_closed_form(p), psi_oracle(p)) <= 1e-9


class TestClosedForm:
    def test_matches_oracle_at_25db(self):
        p = params()
        assert rel(psi_closed_form(p), psi_oracle(p)) <= 5e-4

    def test_high_snr_gap(self):
        p = params(rho=1e6)
        gap = (psi_closed_form(p) - p.eps) / (1 - p.eps)
        predicted = math.exp(1e-6) * 1e-6 * asymptotic_F(p.aux)
        assert rel(gap, predicted) <= 0.01

    def test_j_consistent(self):
        p = params()
        assert psi_closed_form(p) == pytest.approx(p.eps + (1 - p.eps) * closed_form_j(p), rel=1e-15)

    def test_dispatch(self):
        p = params()
        assert psi(p, "closed") == psi_closed_form(p)
        assert psi(p, Method.ORACLE) == psi_oracle(p)


class TestEffectiveCapacity:
    @pytest.mark.parametrize("method", list(Method))
    def test_fields_consistent(self, method):
        r = effective_capacity(params(), method)
        assert r.method is method
        assert r.psi > 0
        assert r.ec == -math.log(r.psi) / (500 * 0.01)

    def test_psi_tends_to_one(self):
        # log psi -> 0 as theta -> 0 while the EC itself tends to the mean rate
        r = effective_capacity(params(rho=1.0, theta=1e-12), Method.ORACLE)
        assert -math.log(r.psi) <= 1e-9
        assert 0.0 < r.ec < 1.0

    def test_near_ceiling_at_40db(self):
        ec = effective_capacity(params(rho=1e4)).ec
        assert rel(ec, 1.842068) <= 0.02

    def test_monotone_pair(self):
        lo = effective_capacity(params(rho=10.0), Method.ORACLE).ec
        hi = effective_capacity(params(rho=100.0), Method.ORACLE).ec
        assert lo < hi

    def test_floor_at_eps(self):
        r = effective_capacity(params(rho=1e9, theta=0.1))
        assert r.psi >= 1e-4
        assert r.ec <= ec_upper_bound(500, 0.1, 1e-4)

    def test_ec_at(self):
        assert ec_at(500, 1e-4, 0.01, 100.0) == effective_capacity(params(rho=100.0)).ec


SNR_GRID_DB = np.arange(0.0, 41.0, 1.0)
THETAS = (0.001, 0.01, 0.1)


@pytest.fixture(scope="module")
def ec_table():
    table = {}
    for theta in THETAS:
        for s in SNR_GRID_DB:
            p = params(rho=10 ** (s / 10), theta=theta)
            table[theta, s] = (effective_capacity(p).ec, effective_capacity(p, Method.ORACLE).ec)
    return table


class TestInvariants:
    @pytest.mark.parametrize("theta", THETAS)
    def test_oracle_agreement_high_snr(self, ec_table, theta):
        worst = max(rel(*ec_table[theta, s]) for s in SNR_GRID_DB if 15 <= s <= 30)
        assert worst <= 5e-4

    @pytest.mark.parametrize("theta", THETAS)
    def test_oracle_agreement_low_snr(self, ec_table, theta):
        worst = max(rel(*ec_table[theta, s]) for s in SNR_GRID_DB if s < 15)
        assert worst <= 2e-2

    @pytest.mark.parametrize("theta", THETAS)
    def test_below_ceiling(self, ec_table, theta):
        bound = ec_upper_bound(500, theta, 1e-4)
        assert all(ec_table[theta, s][k] < bound for s in SNR_GRID_DB for k in (0, 1))

    @pytest.mark.parametrize("theta", [0.01, 0.1])
    def test_close_to_ceiling_at_40db(self, ec_table, theta):
        assert ec_table[theta, 40.0][1] >= 0.95 * ec_upper_bound(500, theta, 1e-4)

    @pytest.mark.parametrize("theta", THETAS)
    @pytest.mark.parametrize("k", [0, 1])
    def test_increasing_in_snr(self, ec_table, theta, k):
        ec = [ec_table[theta, s][k] for s in SNR_GRID_DB]
        assert all(a < b for a, b in zip(ec, ec[1:]))

    @settings(max_examples=5, deadline=None, derandomize=True)
    @given(st.integers(200, 2000), st.floats(-3, -1), st.floats(1, 4))
    def test_psi_convex_in_eps(self, n, log_theta, log_rho):
        theta, rho = 10 ** log_theta, 10 ** log_rho
        eps = np.geomspace(1e-8, 0.3, 50)
        v = np.array([psi_closed_form(SystemParams(n, e, theta, rho)) for e in eps])
        # divided differences: the grid is not uniform in eps
        slope = np.diff(v) / np.diff(eps)
        assert np.all(np.diff(slope) >= -1e-9)

    def test_shannon_ec_exceeds_finite_blocklength(self):
        for s in (5.0, 20.0, 35.0):
            rho = 10 ** (s / 10)
            assert shannon_ec(500, 0.01, rho) > effective_capacity(params(rho=rho)).ec


class TestBounds:
    def test_ec_bound_values(self):
        assert ec_upper_bound(500, 0.01, 1e-4) == pytest.approx(1.842068074, abs=1e-9)
        assert ec_upper_bound(500, 0.1, 1e-4) == pytest.approx(0.1842068074, abs=1e-10)
        assert ec_upper_bound(500, 0.01, 0.999999) == pytest.approx(2e-7, rel=1e-5)

    def test_theta_bound_values(self):
        assert theta_upper_bound(500, 1.0, 1e-4) == pytest.approx(0.01842068, abs=1e-8)
        assert theta_upper_bound(500, 2.0, 1e-4) == theta_upper_bound(500, 1.0, 1e-4) / 2

    @settings(max_examples=200)
    @given(st.integers(100, 10000), st.floats(1e-4, 1.0), st.floats(-12, -0.01))
    def test_duality(self, n, theta, log_eps):
        eps = 10 ** log_eps
        assert theta_upper_bound(n, ec_upper_bound(n, theta, eps), eps) == pytest.approx(theta, rel=1e-14)

    @pytest.mark.parametrize("args", [(99, 0.01, 1e-4), (500, 0.0, 1e-4), (500, 0.01, 1.0),
                                      (500, 0.01, 0.0)])
    def test_ec_bound_domain(self, args):
        with pytest.raises(DomainError):
            ec_upper_bound(*args)

    @pytest.mark.parametrize("args", [(500, 0.0, 1e-4), (500, 1.0, 1.0)])
    def test_theta_bound_domain(self, args):
        with pytest.raises(DomainError):
            theta_upper_bound(*args)


class TestDelayOutage:
    def test_zero_rate(self):
        assert delay_outage_prob(0.01, 0.0, 1000.0) == 1.0

    def test_value(self):
        assert delay_outage_prob(0.01, 1.0, 1000.0) == pytest.approx(4.539993e-5, rel=1e-6)

    def test_doubling_squares(self):
        p = delay_outage_prob(0.01, 1.3, 400.0)
        assert delay_outage_prob(0.01, 1.3, 800.0) == pytest.approx(p * p, rel=1e-13)

    @pytest.mark.parametrize("args", [(0.0, 1.0, 10.0), (0.01, -1.0, 10.0), (0.01, 1.0, 0.0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            delay_outage_prob(*args)


@pytest.fixture(scope="module")
def result():
    return optimal_epsilon(500, 0.01, 100.0)


class TestOptimalEpsilon:
    def test_golden_value(self, result):
        assert rel(result.eps_star, EPS_STAR_GOLDEN) <= 1e-6

    def test_matches_grid(self, result):
        eps_grid, ec_grid, grid, values = grid_optimal_epsilon(500, 0.01, 100.0)
        assert eps_grid == EPS_STAR_GRID
        assert rel(result.eps_star, eps_grid) <= 5e-3
        assert result.ec_max >= ec_grid * (1 - 1e-9)

    def test_bracket(self, result):
        lo, hi = result.bracket
        assert lo < result.eps_star < hi
        assert hi / lo - 1 <= 1e-3
        assert 0 < result.iterations <= 200
        for e in (lo, hi):
            assert result.ec_max >= ec_at(500, e, 0.01, 100.0)

    def test_local_optimality(self, result):
        e = result.eps_star
        ec = ec_at(500, e, 0.01, 100.0)
        assert ec >= ec_at(500, 10 * e, 0.01, 100.0)
        assert ec >= ec_at(500, e / 10, 0.01, 100.0)
        f = [psi_closed_form(params(rho=100.0, eps=x)) for x in (e / 2, e, 2 * e)]
        assert f[0] - 2 * f[1] + f[2] >= 0

    def test_oracle_backend(self):
        r = optimal_epsilon(500, 0.01, 100.0, Method.ORACLE)
        assert 1e-5 < r.eps_star < 1e-3
