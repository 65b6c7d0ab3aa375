import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpldp.deviations.cutoff import CutoffFunction
from sharpldp.deviations.distribution import dp_distribution, exact_distribution, window_measure_sum
from sharpldp.deviations.measures import fourier_rho, mgf, rho_from_distribution
from sharpldp.deviations.montecarlo import window_probability
from sharpldp.deviations.report import chernoff_log_bound, chernoff_window_bound
from sharpldp.errors import DomainError
from sharpldp.ratefn import mean_interval, rate
from sharpldp.thermo import pressure_derivatives

from conftest import CORPUS, corpus
from strategies import pairs


def test_mgf_bernoulli(bernoulli):
    for z in (0.37, -1.2, 0.3 + 2j):
        got = mgf(*bernoulli, z, 40)[0]
        want = ((1 + np.exp(z)) / 2) ** 40
        assert abs(got - want) <= 1e-13 * abs(want)


def test_mgf_large_n(bernoulli):
    z = 0.2 + 0.9j
    got = mgf(*bernoulli, z, 1000)[0]
    want = np.exp(1000 * np.log((1 + np.exp(z)) / 2))
    assert abs(got - want) <= 1e-10 * abs(want)


def test_mgf_vs_atoms():
    mf, phi, psi = corpus("trinary-nonlattice")
    ex = exact_distribution(mf.model, phi, psi, 8)
    m = ex.merged()
    mid = 0.5 * (m.mass_lo + m.mass_hi)
    for z in (0.5, 1j, -0.3 + 0.4j):
        want = np.sum(mid * np.exp(z * (m.lower - 8 * 0.8)))
        assert abs(mgf(mf.model, phi, psi, z, 8, p=0.8)[0] - want) <= 1e-12


def test_fourier_vs_distribution():
    mf, phi, psi = corpus("trinary-nonlattice")
    chi = CutoffFunction()
    p = 0.8138
    xi = rate(mf.model, phi, psi, p).xi_p
    for n in (10, 60):
        fr = fourier_rho(mf.model, phi, psi, p, chi, n, 1.0, xi=xi)
        lo, hi = rho_from_distribution(exact_distribution(mf.model, phi, psi, n) if n <= 10 else
                                       dp_distribution(mf.model, phi, psi, n, 1e-5), chi, n * p, 1.0)
        assert fr.value + fr.error >= lo and fr.value - fr.error <= hi
        assert fr.error < 1e-9


def test_fourier_xi_independent():
    mf, phi, psi = corpus("trinary-nonlattice")
    chi = CutoffFunction()
    a = fourier_rho(mf.model, phi, psi, 0.7, chi, 30, 0.5, xi=0.0)
    b = fourier_rho(mf.model, phi, psi, 0.7, chi, 30, 0.5, xi=0.4)
    assert abs(a.value - b.value) <= a.error + b.error + 1e-12


def test_rho_needs_eps(bernoulli):
    ex = exact_distribution(*bernoulli, 4)
    with pytest.raises(DomainError):
        rho_from_distribution(ex, CutoffFunction(), 2.0, 0.0)


def test_chernoff_bernoulli_closed_form(bernoulli):
    rs = rate(*bernoulli, 0.65)
    b = chernoff_window_bound(*bernoulli, 0.7, 0.05, 200, 0.5)
    assert b == pytest.approx(math.exp(-200 * rs.J), rel=1e-10)
    assert chernoff_window_bound(*bernoulli, 0.5, 0.1, 200, 0.5) == 1.0


def test_montecarlo_covers_exact(bernoulli):
    est = window_probability(*bernoulli, 10, 0.7, 0.05, samples=40_000, seed=3)
    assert est.ci_lo <= 0.1171875 <= est.ci_hi
    again = window_probability(*bernoulli, 10, 0.7, 0.05, samples=40_000, seed=3)
    assert again == est


@pytest.mark.parametrize("name", CORPUS)
def test_chernoff_corpus(name):
    mf, phi, psi = corpus(name)
    iv = mean_interval(mf.model, psi)
    mean = pressure_derivatives(mf.model, phi, psi, 0.0)[1]
    for n in (4, 8, 11):
        ex = exact_distribution(mf.model, phi, psi, n)
        for t in (0.15, 0.3, 0.7, 0.85):
            p = iv.lo + t * (iv.hi - iv.lo)
            delta = 0.02 * (iv.hi - iv.lo)
            w = window_measure_sum(ex, n * (p - delta), n * (p + delta))
            assert w.lo <= chernoff_window_bound(mf.model, phi, psi, p, delta, n, mean) * (1 + 1e-9)


@given(pairs(), st.integers(1, 9), st.floats(0.1, 0.9), st.floats(0.1, 3))
def test_chernoff_half_line(data, n, t, xi):
    model, phi, psi = data
    iv = mean_interval(model, psi)
    a = iv.lo + t * (iv.hi - iv.lo)
    ex = exact_distribution(model, phi, psi, n)
    up = window_measure_sum(ex, n * a - 1e-9, math.inf)
    assert math.log(max(up.lo, 1e-300)) <= chernoff_log_bound(model, phi, psi, a, n, xi) + 1e-9


@given(pairs(), st.integers(1, 9), st.floats(0.05, 0.95), st.floats(0.05, 1.5), st.floats(0.05, 0.9))
def test_chi_sandwich(data, n, t, eps, eta):
    model, phi, psi = data
    iv = mean_interval(model, psi)
    p = iv.lo + t * (iv.hi - iv.lo)
    ex = exact_distribution(model, phi, psi, n)
    w = window_measure_sum(ex, n * p - eps, n * p + eps)
    lo_minus, _ = rho_from_distribution(ex, CutoffFunction.lower(eta), n * p, eps)
    _, hi_plus = rho_from_distribution(ex, CutoffFunction.upper(eta), n * p, eps)
    assert lo_minus <= w.hi * (1 + 1e-12) + 1e-300
    assert w.lo <= hi_plus * (1 + 1e-12) + 1e-300
