import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpldp.errors import DomainError
from sharpldp.potentials import Potential
from sharpldp.ratefn import mean_interval, rate, rate_curve, solve_xi

from conftest import J07, corpus
from strategies import pairs


def test_bernoulli_rate(bernoulli):
    rs = rate(*bernoulli, 0.7)
    assert rs.J == pytest.approx(J07, abs=1e-12)
    assert rs.xi_p == pytest.approx(math.log(7 / 3), abs=1e-12)
    assert rs.sigma2_at_xi == pytest.approx(0.21, abs=1e-12)
    assert abs(rs.J - rs.J_inf) < 1e-9


def test_rate_grid_forms_agree(bernoulli):
    for rs in rate_curve(*bernoulli, np.linspace(0.05, 0.95, 19)):
        p = rs.p
        assert rs.J == pytest.approx(math.log(2) + p * math.log(p) + (1 - p) * math.log(1 - p), abs=1e-10)
        assert abs(rs.J - rs.J_inf) < 1e-9


def test_interval_and_domain(bernoulli, golden):
    model, phi, psi = bernoulli
    iv = mean_interval(model, psi)
    assert (iv.lo, iv.hi) == (0.0, 1.0) and not iv.degenerate
    with pytest.raises(DomainError):
        rate(model, phi, psi, 1.0)
    with pytest.raises(DomainError):
        rate(model, phi, psi, -0.2)
    c = Potential.constant(golden, 0.5)
    assert mean_interval(golden, c).degenerate


def test_rate_zero_at_mean(bernoulli):
    assert rate(*bernoulli, 0.5).J == pytest.approx(0.0, abs=1e-14)
    assert solve_xi(*bernoulli, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_corpus_nonlattice_rate():
    mf, phi, psi = corpus("golden-nonlattice")
    rs = rate(mf.model, phi, psi, 1.13)
    assert rs.J > 0 and abs(rs.J - rs.J_inf) < 1e-9


@given(pairs(), st.floats(-3, 3), st.floats(0.1, 0.9))
def test_shift_covariance(data, c, t):
    model, phi, psi = data
    iv = mean_interval(model, psi)
    p = iv.lo + t * (iv.hi - iv.lo)
    a = rate(model, phi, psi, p)
    b = rate(model, phi, psi.shift(c), p + c)
    assert a.J == pytest.approx(b.J, abs=1e-10)
    assert a.xi_p == pytest.approx(b.xi_p, abs=1e-7)


@given(pairs())
def test_rate_convex(data):
    model, phi, psi = data
    iv = mean_interval(model, psi)
    ps = np.linspace(iv.lo, iv.hi, 21)[4:-4]
    J = np.array([r.J for r in rate_curve(model, phi, psi, ps, check=False)])
    assert (J[2:] - 2 * J[1:-1] + J[:-2] >= -1e-9).all()
    assert (J >= -1e-12).all()
