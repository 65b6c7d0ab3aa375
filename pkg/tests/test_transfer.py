import math

import numpy as np
import pytest
from hypothesis import given

from sharpldp.errors import ModelError
from sharpldp.potentials import Potential, edge_form
from sharpldp.transfer import (build_operator, iterate_norm_growth, perron, spectral_radius,
                               spectral_sweep, twisted_operator)

from conftest import GOLDEN, corpus
from strategies import potentials


def test_perron_full2(full2):
    pd = perron(build_operator(full2, Potential.constant(full2, 0)))
    assert pd.lam == pytest.approx(2.0, abs=1e-13)
    assert pd.residual < 1e-12


def test_perron_golden(golden):
    pd = perron(build_operator(golden, Potential.constant(golden, 0)))
    assert math.log(pd.lam) == pytest.approx(GOLDEN, abs=1e-13)
    assert (pd.right > 0).all() and (pd.left > 0).all()


def test_build_operator_shape_check(golden):
    sys_ = edge_form(golden, Potential.constant(golden, 0))
    with pytest.raises(ModelError):
        build_operator(golden, (sys_, np.zeros((3, 3))))


def test_integer_psi_period_2pi(bernoulli):
    model, phi, psi = bernoulli
    sys_ = edge_form(model, phi, psi)
    r = spectral_radius(twisted_operator(sys_, 0.3, 2 * math.pi)).value
    lam = perron(twisted_operator(sys_, 0.3, 0.0)).lam
    assert r == pytest.approx(lam, abs=1e-10)


def test_sweep_nonlattice_gap():
    mf, phi, psi = corpus("golden-nonlattice")
    sw = spectral_sweep(phi, psi, 0.0, 0.5, 50, 200)
    assert sw.rho_hat < 1 - 1e-3
    assert 0.5 <= sw.u_at_max <= 50


def test_norm_growth_matches_radius():
    mf, phi, psi = corpus("golden-nonlattice")
    g = iterate_norm_growth(phi, psi, 0.0, 1.7, 200)
    sys_ = edge_form(mf.model, phi, psi)
    r = spectral_radius(twisted_operator(sys_, 0.0, 1.7)).value
    assert g.rate == pytest.approx(math.log(r), abs=2e-2)


@given(potentials())
def test_perron_vs_dense(g):
    pd = perron(build_operator(g.model, g))
    dense = np.abs(np.linalg.eigvals(build_operator(g.model, g).entries)).max()
    assert pd.lam == pytest.approx(dense, rel=1e-10)


@given(potentials())
def test_twist_never_exceeds(g):
    model = g.model
    sys_ = edge_form(model, Potential.constant(model, 0), g)
    lam = perron(twisted_operator(sys_, 0.0, 0.0)).lam
    for u in (0.7, 3.1):
        assert spectral_radius(twisted_operator(sys_, 0.0, u)).lo <= lam * (1 + 1e-10)
