import math

import pytest

from sharpldp.deviations.cutoff import CutoffFunction
from sharpldp.deviations.report import (distribution_for, run_schedule, sharp_prefactor_check)
from sharpldp.deviations.schedules import WindowSchedule
from sharpldp.errors import DegenerateError, DomainError
from sharpldp.potentials import Potential

from conftest import J07, corpus


def test_bernoulli_small_n(bernoulli):
    rep = run_schedule(*bernoulli, 0.7, WindowSchedule.parse("poly:c=1,beta=2"), [100, 200], sweep_steps=20)
    assert rep.target == pytest.approx(-J07, abs=1e-12)
    assert rep.lattice == "lattice" and rep.alpha0 == 0
    for r in rep.rows:
        assert r.slope_lo <= r.slope_hi < 0 and not r.error
    assert rep.to_dict()["passed"] == rep.passed


def test_constant_window_rate(bernoulli):
    rep = run_schedule(*bernoulli, 0.7, WindowSchedule.parse("const:delta=0.05"), [400], sweep_steps=20)
    r = rep.last
    assert r.window_rate > r.target
    assert abs(r.slope_lo - r.window_rate) < 0.02


def test_exp_refused_on_lattice(bernoulli):
    with pytest.raises(DomainError):
        run_schedule(*bernoulli, 0.7, WindowSchedule.parse("exp:c=1,alpha0=0.01"), [50])


def test_resource_error_recorded():
    mf, phi, psi = corpus("golden-nonlattice")
    rep = run_schedule(mf.model, phi, psi, 1.13, WindowSchedule.parse("exp:c=1,alpha0=0.01"), [18, 200],
                       budget_states=0, budget_bins=1e4, sweep_steps=20)
    assert rep.rows[-1].error and math.isnan(rep.rows[-1].slope_lo)
    assert rep.last.n == 18


def test_distribution_for_switch(bernoulli):
    assert distribution_for(*bernoulli, 10, 0.1).mode == "exact-atoms"
    assert distribution_for(*bernoulli, 10, 0.1, budget_states=10).mode == "bracketed-bins"


def test_prefactor_guards(bernoulli, golden):
    chi = CutoffFunction()
    sched = WindowSchedule.parse("poly:c=1,beta=1.25")
    with pytest.raises(DomainError):
        sharp_prefactor_check(*bernoulli, 0.7, chi, sched, [50])
    mf, phi, psi = corpus("golden")
    cob = Potential(golden, 2, {(0, 0): 0.0, (0, 1): 1.0, (1, 0): -1.0})
    # a coboundary plus a constant has zero variance; it is also lattice, which is checked first
    with pytest.raises(DomainError):
        sharp_prefactor_check(golden, phi, cob, 0.0, chi, sched, [50])
    assert issubclass(DegenerateError, DomainError)


def test_prefactor_methods_agree():
    mf, phi, psi = corpus("trinary-nonlattice")
    chi, sched = CutoffFunction(), WindowSchedule.parse("poly:c=1,beta=1.25")
    a = sharp_prefactor_check(mf.model, phi, psi, 0.81, chi, sched, [100])
    b = sharp_prefactor_check(mf.model, phi, psi, 0.81, chi, sched, [100], method="fourier")
    ra, rb = a.row(100), b.row(100)
    assert ra.ratio_lo <= rb.ratio_hi + 1e-9 and rb.ratio_lo <= ra.ratio_hi + 1e-9
    assert a.C >= 0
    with pytest.raises(KeyError):
        a.row(7)


def test_prefactor_amplitude_invariant():
    mf, phi, psi = corpus("trinary-nonlattice")
    sched = WindowSchedule.parse("poly:c=1,beta=1.25")
    a = sharp_prefactor_check(mf.model, phi, psi, 0.81, CutoffFunction(), sched, [100]).row(100)
    b = sharp_prefactor_check(mf.model, phi, psi, 0.81, CutoffFunction(amp=2.0), sched, [100]).row(100)
    assert a.ratio == pytest.approx(b.ratio, rel=1e-6)
