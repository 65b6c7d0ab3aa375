import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpldp.potentials import Potential
from sharpldp.thermo import (check_variational, entropy, equilibrium_measure, pressure,
                             pressure_curve, pressure_derivatives, pressure_fd, variational_gap)

from conftest import GOLDEN
from strategies import pairs, potentials


def test_pressure_closed_forms(full2, golden):
    assert pressure(full2, Potential.constant(full2, 0)) == pytest.approx(math.log(2), abs=1e-12)
    assert pressure(golden, Potential.constant(golden, 0)) == pytest.approx(GOLDEN, abs=1e-12)


def test_parry_entropy(golden):
    m = equilibrium_measure(golden, Potential.constant(golden, 0))
    assert entropy(m) == pytest.approx(GOLDEN, abs=1e-12)
    g = (1 + math.sqrt(5)) / 2
    assert m.cylinder_measure((0,)) == pytest.approx(g * g / (1 + g * g), abs=1e-12)


def test_bernoulli_derivatives(bernoulli):
    model, phi, psi = bernoulli
    pr, d1, d2 = pressure_derivatives(model, phi, psi, 0.0)
    assert (pr, d1, d2) == pytest.approx((math.log(2), 0.5, 0.25), abs=1e-12)
    q = 0.4
    e = math.exp(q)
    pr, d1, d2 = pressure_derivatives(model, phi, psi, q)
    assert d1 == pytest.approx(e / (1 + e), abs=1e-12)
    assert d2 == pytest.approx(e / (1 + e) ** 2, abs=1e-12)


@given(pairs(), st.floats(-1.5, 1.5))
def test_derivatives_vs_fd(data, q):
    model, phi, psi = data
    pr, d1, d2 = pressure_derivatives(model, phi, psi, q)
    f0, f1, f2 = pressure_fd(model, phi, psi, q)
    assert pr == pytest.approx(f0, abs=1e-11)
    assert d1 == pytest.approx(f1, abs=1e-7)
    assert d2 == pytest.approx(f2, abs=1e-4)


@given(pairs())
def test_pressure_convex(data):
    model, phi, psi = data
    qs = np.linspace(-2, 2, 21)
    vals = pressure_curve(model, phi, psi, qs).values
    assert (vals[2:] - 2 * vals[1:-1] + vals[:-2] >= -1e-9).all()


@given(potentials())
def test_variational_identity(g):
    assert abs(variational_gap(g.model, g)) < 1e-9
    check_variational(g.model, g)


@given(potentials(), st.floats(-3, 3))
def test_pressure_shift(g, c):
    assert pressure(g.model, g.shift(c)) == pytest.approx(pressure(g.model, g) + c, abs=1e-11)
