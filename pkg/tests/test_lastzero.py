from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import owens_t

from zerocross.errors import DomainError
from zerocross.lastzero import (CDF_FORMS, PDF_FORMS, DriftClock, arcsine_cdf, last_zero_cdf,
                                last_zero_cdf_infinite_horizon, last_zero_mean, last_zero_mgf,
                                last_zero_moment, last_zero_pdf, last_zero_small_mu, mixture_weight)
from zerocross.quad import QuadratureBudget, integrate_adaptive, integrate_sqrt_endpoints
from zerocross.specfun import kummer_half_one

GRID = [(mu, t) for mu in (0.0, 0.5, 1.0, 2.0) for t in (0.5, 1.0, 4.0)]


def owen_cdf(mu: float, t: float, a: float) -> float:
    # 1 - (2/pi) int_0^h e^{-k^2(1+y^2)/2}/(1+y^2) dy with k = |mu| sqrt(a)
    return 1.0 - 4.0 * float(owens_t(abs(mu) * math.sqrt(a), math.sqrt((t - a) / a)))


def test_driftless_examples():
    c = DriftClock(0.0, 1.0)
    assert last_zero_cdf(c, 0.25) == pytest.approx(1 / 3, abs=1e-12)
    assert last_zero_cdf(c, 0.5) == pytest.approx(0.5, abs=1e-12)
    assert last_zero_cdf(c, 1.0) == 1.0
    assert last_zero_pdf(c, 0.5) == pytest.approx(2 / math.pi, abs=1e-14)
    assert last_zero_pdf(c, 0.25) == pytest.approx(4 / (math.pi * math.sqrt(3)), abs=1e-14)


def test_drifted_cdf_frozen():
    # mpmath quadrature of the s-integral, 30 digits
    assert last_zero_cdf(DriftClock(1.0, 1.0), 0.5) == pytest.approx(0.6354600614016982, abs=1e-13)
    assert last_zero_cdf(DriftClock(1.0, 1.0), 0.3) == pytest.approx(0.4972621185808298, abs=1e-13)


@pytest.mark.parametrize("mu,t", GRID)
def test_forms_agree_and_match_owen(mu, t):
    clock = DriftClock(mu, t)
    for frac in (0.05, 0.3, 0.5, 0.8, 0.97):
        a = frac * t
        cdfs = [last_zero_cdf(clock, a, form=f) for f in CDF_FORMS]
        assert max(cdfs) - min(cdfs) < 1e-8
        assert cdfs[0] == pytest.approx(owen_cdf(mu, t, a), abs=1e-10)
        pdfs = [last_zero_pdf(clock, a, form=f) for f in PDF_FORMS]
        assert max(pdfs) - min(pdfs) < 1e-8 * max(1.0, max(pdfs))


@pytest.mark.parametrize("mu,t", GRID)
def test_normalization(mu, t):
    clock = DriftClock(mu, t)
    total = integrate_sqrt_endpoints(lambda a: last_zero_pdf(clock, a) if 0 < a < t else 0.0, 0.0, t,
                                     QuadratureBudget(1e-12, 1e-12))
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("mu,t,a", [(1.0, 1.0, 0.3), (0.5, 4.0, 1.1), (2.0, 0.5, 0.2)])
def test_derivative_consistency(mu, t, a):
    clock = DriftClock(mu, t)
    h = 1e-5
    fd = (last_zero_cdf(clock, a + h) - last_zero_cdf(clock, a - h)) / (2 * h)
    assert fd == pytest.approx(last_zero_pdf(clock, a), abs=1e-5)


def test_pdf_exceeds_damped_arcsine():
    clock = DriftClock(1.0, 1.0)
    for a in (0.1, 0.5, 0.9):
        head = math.exp(-0.5) / (math.pi * math.sqrt(a * (1 - a)))
        assert last_zero_pdf(clock, a) > head


@given(st.floats(0.01, 3.0), st.floats(0.2, 5.0), st.floats(0.02, 0.98))
@settings(max_examples=60, deadline=None)
def test_sign_invariance_and_monotone_in_mu(mu, t, frac):
    a = frac * t
    assert last_zero_cdf(DriftClock(mu, t), a) == last_zero_cdf(DriftClock(-mu, t), a)
    assert last_zero_pdf(DriftClock(mu, t), a) == last_zero_pdf(DriftClock(-mu, t), a)
    # the drifted path leaves zero for good earlier
    assert last_zero_cdf(DriftClock(mu, t), a) >= last_zero_cdf(DriftClock(0.0, t), a) - 1e-13


def test_domain_errors():
    c = DriftClock(0.0, 1.0)
    for bad in (0.0, -1.0, 1.5):
        with pytest.raises(DomainError):
            last_zero_cdf(c, bad)
    with pytest.raises(DomainError):
        last_zero_pdf(c, 1.0)
    with pytest.raises(DomainError):
        DriftClock(0.0, 0.0)
    with pytest.raises(DomainError):
        DriftClock(math.nan, 1.0)
    with pytest.raises(ValueError):
        last_zero_cdf(c, 0.5, form="nope")


def test_moments():
    assert last_zero_moment(DriftClock(0.0, 1.0), 1) == 0.5
    assert last_zero_moment(DriftClock(0.0, 1.0), 2) == 0.375
    assert last_zero_moment(DriftClock(math.sqrt(2), 1.0), 1) == pytest.approx(0.31606027941427883,
                                                                              abs=1e-14)
    for mu in (0.3, 1.0, 2.5):
        for t in (0.5, 2.0):
            clock = DriftClock(mu, t)
            expected = (1 - math.exp(-mu * mu * t / 2)) / (mu * mu)
            assert last_zero_mean(clock) == pytest.approx(expected, abs=1e-12)
            assert last_zero_moment(clock, 1) == pytest.approx(expected, abs=1e-12)
            for m in (1, 2, 3, 4):
                assert last_zero_moment(clock, m) < last_zero_moment(DriftClock(0.0, t), m)


@pytest.mark.parametrize("mu,t", [(1.0, 1.0), (2.0, 4.0), (0.0, 4.0)])
def test_moments_match_density(mu, t):
    clock = DriftClock(mu, t)
    for m in (1, 2, 3, 4):
        direct = integrate_sqrt_endpoints(lambda a: a ** m * last_zero_pdf(clock, a) if 0 < a < t else 0.0,
                                          0.0, t, QuadratureBudget(1e-12, 1e-12))
        assert last_zero_moment(clock, m) == pytest.approx(direct, rel=1e-6)


def test_mgf():
    assert last_zero_mgf(DriftClock(1.0, 1.0), 0.0) == pytest.approx(1.0, abs=1e-13)
    assert last_zero_mgf(DriftClock(0.0, 1.0), 1.0) == pytest.approx(kummer_half_one(1.0), abs=1e-15)
    clock = DriftClock(1.0, 1.0)
    series = 1.0 + sum(0.7 ** m * last_zero_moment(clock, m) / math.factorial(m) for m in range(1, 26))
    assert last_zero_mgf(clock, 0.7) == pytest.approx(series, abs=1e-8)


def test_infinite_horizon_limit():
    assert last_zero_cdf_infinite_horizon(1.0, 2.0) == pytest.approx(0.8427007929497149, abs=1e-15)
    assert last_zero_cdf_infinite_horizon(1.0, math.inf) == 1.0
    with pytest.raises(DomainError):
        last_zero_cdf_infinite_horizon(0.0, 1.0)
    long = DriftClock(1.0, 1e4)
    for a in (0.5, 1.0, 2.0, 4.0):
        assert abs(last_zero_cdf(long, a) - last_zero_cdf_infinite_horizon(1.0, a)) < 1e-3
    # mean of the limit law from its cdf equals 1/mu^2
    mean = integrate_adaptive(lambda a: 1.0 - last_zero_cdf_infinite_horizon(1.3, a) if a > 0 else 1.0,
                              0.0, math.inf)
    assert mean == pytest.approx(1 / 1.3 ** 2, rel=1e-8)
    assert last_zero_mean(DriftClock(1.0, 60.0)) == pytest.approx(1.0, abs=1e-12)


def test_small_mu():
    pdf, cdf = last_zero_small_mu(DriftClock(0.0, 1.0), 0.3)
    assert cdf == pytest.approx(arcsine_cdf(1.0, 0.3), abs=1e-15)
    assert pdf == pytest.approx(last_zero_pdf(DriftClock(0.0, 1.0), 0.3), rel=1e-15)
    pdf_mid, _ = last_zero_small_mu(DriftClock(0.4, 1.0), 0.5)
    assert pdf_mid == pytest.approx(2 / math.pi, rel=1e-15)
    exact = last_zero_cdf(DriftClock(0.1, 1.0), 0.3)
    _, cdf = last_zero_small_mu(DriftClock(0.1, 1.0), 0.3)
    assert cdf == pytest.approx(exact, abs=1e-4)
    # the mu^2/2 coefficient misses by about 8e-4
    _, cdf_printed = last_zero_small_mu(DriftClock(0.1, 1.0), 0.3, printed=True)
    assert abs(cdf_printed - exact) > 5e-4


def test_small_mu_cdf_integrates_pdf_approximation():
    clock, a = DriftClock(0.3, 2.0), 0.7
    from zerocross.quad import integrate_left_sqrt_singular
    # pdf approximation times sqrt(s) is smooth at 0; integrate over (0, a)
    approx = integrate_left_sqrt_singular(
        lambda s: math.sqrt(s) * last_zero_small_mu(clock, s)[0] if s > 0 else 1 / (math.pi * math.sqrt(2.0)),
        0.0, a)
    assert approx == pytest.approx(last_zero_small_mu(clock, a)[1], abs=1e-10)


def test_mixture_weight():
    w = mixture_weight(DriftClock(math.sqrt(2), 1.0), 0.5)
    assert w.atom_at_t == pytest.approx(math.exp(-1), abs=1e-15)
    w0 = mixture_weight(DriftClock(0.0, 1.0), 0.5)
    assert (w0.density, w0.atom_at_t) == (0.0, 1.0)
    clock, a = DriftClock(1.0, 1.0), 0.4
    from zerocross.quad import integrate_left_sqrt_singular
    body = integrate_left_sqrt_singular(
        lambda v: mixture_weight(clock, v).density / (math.pi * math.sqrt(a)), a, 1.0)
    rebuilt = body + mixture_weight(clock, 1.0).atom_at_t / (math.pi * math.sqrt(a * (1 - a)))
    assert rebuilt == pytest.approx(last_zero_pdf(clock, a), abs=1e-8)
    total = integrate_adaptive(lambda v: mixture_weight(clock, v).density, 0.0, 1.0)
    assert total + mixture_weight(clock, 1.0).atom_at_t == pytest.approx(1.0, abs=1e-12)
