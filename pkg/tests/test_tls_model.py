import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from oracles import grid_argmin, nll_direct, tls_log_pdf_mp, tls_pdf_mp
from swdknn.exceptions import DegenerateSample, EmptySample, InvalidParams, NotConverged
from swdknn.tls_model import (
    FitConfig,
    TlsParams,
    fit_mle,
    log_norm_const,
    make_rng,
    neg_log_likelihood,
    tls_log_pdf,
    tls_pdf,
    tls_sample,
)

finite = st.floats(-1e3, 1e3)
scale = st.floats(1e-3, 1e3)
shape = st.floats(0.05, 1e5)


# --- density ---------------------------------------------------------------

def test_cauchy_center():
    assert tls_pdf(0.0, TlsParams(0, 1, 1)) == pytest.approx(1 / math.pi, rel=1e-12)
    assert tls_log_pdf(0.0, TlsParams(0, 1, 1)) == pytest.approx(-math.log(math.pi), rel=1e-12)


def test_center_nu5_matches_50_digit_oracle():
    # frozen from tls_pdf_mp(0, 0, 1, 5)
    expected = 0.37960668982249443
    assert float(tls_pdf_mp(0, 0, 1, 5)) == pytest.approx(expected, rel=1e-15)
    assert tls_pdf(0.0, TlsParams(0, 1, 5)) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("nu", [0.3, 1.0, 2.5, 7.0, 49.0, 50.0, 51.0, 1e3, 1e6])
@pytest.mark.parametrize("x", [-40.0, -1.3, 0.0, 0.7, 5.0, 1e4])
def test_log_pdf_against_oracle_grid(x, nu):
    p = TlsParams(0.4, 1.7, nu)
    ref = float(tls_log_pdf_mp(x, p.mu, p.sigma, p.nu))
    assert tls_log_pdf(x, p) == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_huge_argument_stays_finite():
    v = tls_log_pdf(1e100, TlsParams(0, 1, 3))
    # hand asymptote: -(nu+1)/2 * ln(x^2/nu) + log constant
    asym = -2.0 * (200 * math.log(10) - math.log(3)) + log_norm_const(3.0)
    assert math.isfinite(v) and v < 0
    assert v == pytest.approx(asym, rel=1e-12)
    assert v == pytest.approx(-919.83770146990556, rel=1e-13)  # 50-digit oracle
    assert math.isfinite(tls_log_pdf(1e150, TlsParams(0, 1, 3)))


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-1e4, 1e4), mu=finite, sigma=scale, nu=shape)
def test_exp_log_pdf_identity(x, mu, sigma, nu):
    p = TlsParams(mu, sigma, nu)
    pdf = tls_pdf(x, p)
    if pdf > 1e-300:
        assert math.exp(tls_log_pdf(x, p)) == pytest.approx(pdf, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(d=st.floats(0, 1e6), mu=finite, sigma=scale, nu=shape)
def test_symmetry(d, mu, sigma, nu):
    p = TlsParams(mu, sigma, nu)
    assert tls_log_pdf(mu + d, p) == pytest.approx(tls_log_pdf(mu - d, p), rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-1e3, 1e3), mu=finite, sigma=scale, nu=shape)
def test_location_scale_equivariance(x, mu, sigma, nu):
    lhs = tls_pdf(x, TlsParams(mu, sigma, nu))
    rhs = tls_pdf((x - mu) / sigma, TlsParams(0, 1, nu)) / sigma
    if rhs > 1e-300:
        assert lhs == pytest.approx(rhs, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-1e3, 1e3), mu=finite, sigma=scale)
def test_cauchy_special_case(x, mu, sigma):
    z = (x - mu) / sigma
    cauchy = 1 / (math.pi * sigma * (1 + z * z))
    assert tls_pdf(x, TlsParams(mu, sigma, 1)) == pytest.approx(cauchy, rel=1e-12)


def test_normal_limit():
    x = np.linspace(-5, 5, 1001)
    phi = np.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    assert np.max(np.abs(tls_pdf(x, TlsParams(0, 1, 1e6)) - phi)) < 1e-5


@pytest.mark.parametrize("nu", [0.5, 1, 2, 5, 30])
def test_integrates_to_one_over_real_line(nu):
    p = TlsParams(1.5, 2.0, nu)
    total, _ = integrate.quad(lambda x: tls_pdf(x, p), -np.inf, np.inf, epsabs=1e-12, epsrel=1e-12, limit=400)
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("nu", [0.5, 1, 2, 5, 30])
def test_truncated_mass_matches_student_t_cdf(nu):
    # the quadrature over the finite window misses exactly the t tail mass
    p = TlsParams(0.0, 1.0, nu)
    half = 60 * max(1.0, math.sqrt(nu))
    mass, _ = integrate.quad(lambda x: tls_pdf(x, p), -half, half, epsabs=1e-13, epsrel=1e-13, limit=400,
                             points=[0.0])
    expected = stats.t.cdf(half, nu) - stats.t.cdf(-half, nu)
    assert mass == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("bad", [(0, 0, 1), (0, -1, 1), (0, 1, 0), (0, 1, -2), (math.nan, 1, 1),
                                 (0, math.inf, 1)])
def test_invalid_params(bad):
    with pytest.raises(InvalidParams):
        TlsParams(*bad)
    with pytest.raises(InvalidParams):
        tls_pdf(0.0, bad)


# --- likelihood ------------------------------------------------------------

def test_nll_single_cauchy_point():
    assert neg_log_likelihood([0.0], TlsParams(0, 1, 1)) == pytest.approx(math.log(math.pi), rel=1e-12)


def test_nll_three_points_oracle():
    # frozen from -sum(log(tls_pdf_mp(x, 0, 1, 2))) over x in (-1, 0, 1)
    expected = 4.335557636844247
    assert neg_log_likelihood([-1, 0, 1], TlsParams(0, 1, 2)) == pytest.approx(expected, rel=1e-13)
    assert nll_direct([-1, 0, 1], 0, 1, 2) == pytest.approx(expected, rel=1e-13)


def test_nll_doubles_on_duplication():
    x = tls_sample(TlsParams(0, 1, 3), 101, seed=5)
    p = TlsParams(0.1, 0.9, 3.3)
    assert neg_log_likelihood(np.r_[x, x], p) == pytest.approx(2 * neg_log_likelihood(x, p), rel=1e-14)


def test_nll_empty():
    with pytest.raises(EmptySample):
        neg_log_likelihood([], TlsParams(0, 1, 1))


# --- sampling --------------------------------------------------------------

def test_sample_determinism():
    p = TlsParams(1, 2, 3)
    a = tls_sample(p, 1000, seed=42)
    b = tls_sample(p, 1000, seed=42)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, tls_sample(p, 1000, seed=43))


def test_sample_uses_documented_construction():
    p = TlsParams(-1, 3, 2.5)
    rng = make_rng(9)
    z = rng.standard_normal(50)
    v = rng.chisquare(2.5, 50)
    np.testing.assert_array_equal(tls_sample(p, 50, seed=9), -1 + 3 * z / np.sqrt(v / 2.5))


def test_sample_median():
    x = tls_sample(TlsParams(10, 1, 3), 100_000, seed=1)
    assert abs(np.median(x) - 10) < 0.05


def test_sample_cauchy_quartiles():
    x = tls_sample(TlsParams(0, 1, 1), 100_000, seed=2)
    # P(|X| > 1) = 1 - 2 * atan(1) / pi = 0.5 for the standard Cauchy
    assert abs(np.mean(np.abs(x) > 1) - (1 - 2 * math.atan(1) / math.pi)) < 0.01


def test_sample_matches_t_distribution():
    x = tls_sample(TlsParams(2, 0.5, 4), 20_000, seed=3)
    assert stats.kstest((x - 2) / 0.5, stats.t(4).cdf).pvalue > 1e-3


# --- fitting ---------------------------------------------------------------

def test_fit_recovers_parameters_and_grid_oracle_agrees():
    x = tls_sample(TlsParams(2, 0.5, 4), 10_000, seed=11)
    fit = fit_mle(x)
    p = fit.params
    assert fit.converged
    assert 1.9 <= p.mu <= 2.1 and 0.45 <= p.sigma <= 0.55 and 3.0 <= p.nu <= 5.5
    mus = np.linspace(1.9, 2.1, 21)
    sigmas = np.linspace(0.45, 0.55, 21)
    nus = np.linspace(3.0, 5.5, 26)
    g_mu, g_sigma, g_nu = grid_argmin(x, mus, sigmas, nus)
    assert abs(g_mu - p.mu) <= mus[1] - mus[0]
    assert abs(g_sigma - p.sigma) <= sigmas[1] - sigmas[0]
    assert abs(g_nu - p.nu) <= nus[1] - nus[0]
    assert fit.neg_log_likelihood == pytest.approx(nll_direct(x, p.mu, p.sigma, p.nu), rel=1e-12)
    assert fit.neg_log_likelihood <= nll_direct(x, g_mu, g_sigma, g_nu)


def test_fit_normal_sample_goes_to_large_shape():
    x = make_rng(7).standard_normal(10_000)
    p = fit_mle(x).params
    assert p.nu >= 20
    assert abs(p.mu) < 0.1 and abs(p.sigma - 1) < 0.1
    # grid oracle: the likelihood keeps improving as nu grows
    g = grid_argmin(x, [0.0], np.linspace(0.9, 1.1, 21), [5, 10, 20, 50, 200, 1e4])
    assert g[2] >= 20


def test_fit_stationary():
    x = tls_sample(TlsParams(-3, 2, 6), 5000, seed=4)
    fit = fit_mle(x)
    p = fit.params
    theta = np.array([p.mu, math.log(p.sigma), math.log(p.nu)])

    def f(t):
        return nll_direct(x, t[0], math.exp(t[1]), math.exp(t[2]))

    h = 1e-5
    grad = [(f(theta + h * e) - f(theta - h * e)) / (2 * h) for e in np.eye(3)]
    assert max(abs(g) for g in grad) < 1e-3 * max(1.0, abs(fit.neg_log_likelihood))


@pytest.mark.parametrize("a,b", [(3.0, 10.0), (0.01, -5.0), (250.0, 0.0)])
def test_fit_affine_equivariance(a, b):
    x = tls_sample(TlsParams(0.3, 1.2, 3.5), 4000, seed=21)
    p = fit_mle(x).params
    q = fit_mle(a * x + b).params
    assert q.mu == pytest.approx(a * p.mu + b, abs=1e-4 * a)
    assert q.sigma == pytest.approx(a * p.sigma, rel=1e-4)
    assert q.nu == pytest.approx(p.nu, rel=1e-3)


def test_fit_degenerate():
    with pytest.raises(DegenerateSample):
        fit_mle([5.0] * 20)


def test_fit_needs_eight_points():
    with pytest.raises(ValueError):
        fit_mle([1.0, 2.0, 3.0])
    with pytest.raises(EmptySample):
        fit_mle([])


def test_fit_not_converged_keeps_best_report():
    x = tls_sample(TlsParams(0, 1, 4), 500, seed=8)
    with pytest.raises(NotConverged) as info:
        fit_mle(x, FitConfig(max_iter=5))
    rep = info.value.report
    assert rep.converged is False and rep.iterations == 5
    assert rep.neg_log_likelihood == pytest.approx(
        nll_direct(x, rep.params.mu, rep.params.sigma, rep.params.nu), rel=1e-12)
