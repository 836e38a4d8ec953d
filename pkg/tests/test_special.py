import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ttestkit import special
from ttestkit.errors import DomainError

NU_GRID = [1, 2, 3, 5, 10, 30, 49, 100, 1_000, 100_000, 1_000_000]
X_GRID = [-40.0, -8.0, -3.0, -1.96, -0.5, 0.0, 0.3, 1.0, 2.5, 6.0, 25.0]

NCT_GRID = [
    (-0.4951, 49, 0.4951),
    (0.0, 49, 0.4951),
    (-3.5355, 49, 0.4951),
    (2.0, 5, 1.0),
    (-3.0, 3, -2.0),
    (10.0, 30, 8.0),
    (0.5, 1, 3.0),
    (-1.0, 2, 4.0),
    (1.5, 200, -1.2),
    (7.0, 10, 6.5),
    (-0.2, 1_000, 0.1),
    (50.0, 1_000, 45.0),
    (3.0, 20, 9.0),
]


class TestCentralT:
    @pytest.mark.parametrize("nu", NU_GRID)
    def test_cdf_matches_high_precision_oracle(self, nu):
        for x in X_GRID:
            assert special.t_cdf(x, nu).value == pytest.approx(oracles.t_cdf(x, nu), abs=1e-12)

    @pytest.mark.parametrize("nu", [1, 4, 49, 10_000])
    def test_pdf_matches_closed_form(self, nu):
        for x in X_GRID:
            assert special.t_pdf(x, nu).value == pytest.approx(oracles.t_pdf(x, nu), rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("x,nu", [(-40.0, 3), (-200.0, 49), (-12.0, 1_000), (-1e4, 1)])
    def test_deep_tail_logcdf_keeps_relative_accuracy(self, x, nu):
        assert special.t_logcdf(x, nu) == pytest.approx(oracles.t_logcdf(x, nu), rel=1e-11)

    def test_cdf_at_zero_is_half(self):
        for nu in NU_GRID:
            assert special.t_cdf(0.0, nu).value == 0.5

    @given(x=st.floats(-1e3, 1e3), nu=st.floats(1.0, 1e6))
    @settings(max_examples=200, deadline=None)
    def test_symmetry(self, x, nu):
        assert special.t_cdf(x, nu).value + special.t_cdf(-x, nu).value == pytest.approx(1.0, abs=1e-12)

    @given(x=st.floats(-50, 50), dx=st.floats(1e-3, 5.0), nu=st.floats(1.0, 1e4))
    @settings(max_examples=200, deadline=None)
    def test_cdf_monotone(self, x, dx, nu):
        assert special.t_cdf(x, nu).value <= special.t_cdf(x + dx, nu).value

    def test_large_nu_approaches_normal(self):
        for x in (-2.0, -0.5, 1.0):
            assert special.t_cdf(x, 1e6).value == pytest.approx(special.norm_cdf(x), abs=1e-6)

    @pytest.mark.parametrize("nu", [0.5, 0.0, -3.0, math.nan, math.inf])
    def test_rejects_bad_nu(self, nu):
        with pytest.raises(DomainError):
            special.t_cdf(1.0, nu)

    def test_infinite_arguments(self):
        assert special.t_cdf(math.inf, 5).value == 1.0
        assert special.t_cdf(-math.inf, 5).value == 0.0
        assert special.t_pdf(math.inf, 5).value == 0.0


class TestIncompleteBeta:
    @pytest.mark.parametrize("a,b", [(0.5, 0.5), (2.0, 3.0), (24.5, 0.5), (0.5, 24.5), (150.0, 80.0), (1e4, 0.5)])
    def test_matches_mpmath(self, a, b):
        for x in (1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 0.999999):
            assert special.betainc(a, b, x) == pytest.approx(oracles.betainc(a, b, x), abs=1e-13, rel=1e-11)

    @given(a=st.floats(0.5, 500), b=st.floats(0.5, 500), x=st.floats(0.0, 1.0, exclude_min=True, exclude_max=True))
    @settings(max_examples=200, deadline=None)
    def test_reflection(self, a, b, x):
        lhs = special.betainc(a, b, x) + special.betainc(b, a, 1.0 - x, x)
        assert lhs == pytest.approx(1.0, abs=1e-11)


class TestNoncentralT:
    @pytest.mark.parametrize("x,nu,theta", NCT_GRID)
    def test_pdf_matches_quadrature_oracle(self, x, nu, theta):
        assert special.nct_pdf(x, nu, theta).value == pytest.approx(oracles.nct_pdf(x, nu, theta), abs=1e-10)

    @pytest.mark.parametrize("x,nu,theta", NCT_GRID)
    def test_cdf_matches_quadrature_oracle(self, x, nu, theta):
        assert special.nct_cdf(x, nu, theta).value == pytest.approx(oracles.nct_cdf(x, nu, theta), abs=1e-10)

    @pytest.mark.parametrize("x,nu,theta", [(0.7, 4, 1.3), (-2.0, 49, 0.4951), (5.0, 12, 4.0), (-1.0, 2, -3.0)])
    def test_pdf_is_derivative_of_cdf(self, x, nu, theta):
        h = 1e-4
        slope = (special.nct_cdf(x + h, nu, theta).value - special.nct_cdf(x - h, nu, theta).value) / (2 * h)
        assert slope == pytest.approx(special.nct_pdf(x, nu, theta).value, rel=1e-6, abs=1e-9)

    @given(x=st.floats(-30, 30), nu=st.floats(1.0, 1e4))
    @settings(max_examples=100, deadline=None)
    def test_zero_noncentrality_is_central(self, x, nu):
        assert special.nct_cdf(x, nu, 0.0).value == pytest.approx(special.t_cdf(x, nu).value, abs=1e-13)
        assert special.nct_pdf(x, nu, 0.0).value == pytest.approx(special.t_pdf(x, nu).value, rel=1e-12)

    @given(x=st.floats(-20, 20), nu=st.floats(1.0, 500), theta=st.floats(-8, 8))
    @settings(max_examples=150, deadline=None)
    def test_reflection(self, x, nu, theta):
        assert special.nct_pdf(x, nu, theta).value == pytest.approx(special.nct_pdf(-x, nu, -theta).value,
                                                                     rel=1e-9, abs=1e-12)
        total = special.nct_cdf(x, nu, theta).value + special.nct_cdf(-x, nu, -theta).value
        assert total == pytest.approx(1.0, abs=2e-10)

    @given(x=st.floats(-10, 10), nu=st.floats(1.0, 200), theta=st.floats(-6, 6), dt=st.floats(0.05, 2.0))
    @settings(max_examples=100, deadline=None)
    def test_cdf_decreases_in_theta(self, x, nu, theta, dt):
        assert special.nct_cdf(x, nu, theta + dt).value <= special.nct_cdf(x, nu, theta).value + 1e-10

    def test_error_bound_is_reported(self):
        r = special.nct_cdf(1.0, 10, 2.0)
        assert 0.0 <= r.abs_error_bound <= special.NONCENTRAL_TOL

    def test_logpdf_consistent_with_pdf(self):
        for x, nu, theta in NCT_GRID:
            assert math.exp(special.nct_logpdf(x, nu, theta)) == pytest.approx(
                special.nct_pdf(x, nu, theta).value, rel=1e-12)

    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            special.nct_pdf(0.0, 0.5, 1.0)
        with pytest.raises(DomainError):
            special.nct_cdf(0.0, 5, math.nan)


class TestMills:
    @pytest.mark.parametrize("x", [0.0, 0.5, 3.0, -3.0, 7.9, 8.1, 20.0, 100.0, 1e4])
    def test_exact_matches_mpmath(self, x):
        assert special.mills_exact(x) == pytest.approx(oracles.mills(x), rel=1e-13)

    def test_asymptotic_error_shrinks(self):
        xs = [3.0, 4.0, 6.0, 10.0, 30.0, 100.0]
        errs = [abs(special.mills_asymptotic(x) / special.mills_exact(x) - 1.0) for x in xs]
        assert errs[0] <= 0.11
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_asymptotic_undefined_at_zero(self):
        with pytest.raises(DomainError):
            special.mills_asymptotic(0.0)

    def test_modified_exact_at_zero(self):
        assert special.mills_modified(0.0) == pytest.approx(special.mills_exact(0.0), rel=1e-15)
        assert special.mills_modified(0.0) == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-15)

    def test_log_normal_cdf_far_tail(self):
        assert special.norm_logcdf(-40.0) == pytest.approx(float(oracles.mp.log(oracles.mp.ncdf(-40))), rel=1e-13)
