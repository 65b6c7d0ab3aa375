import math

import pytest
from hypothesis import given, strategies as st

from sharpldp.errors import DomainError
from sharpldp.potentials import Potential, birkhoff_sum, lip_ratio
from sharpldp.sft import MarkovModel, admissible_words
from sharpldp.suspension import (QUINTIC, SMOOTHSTEP, OrbitProfile, RoofFunction,
                                 build_bump_observable, discretize, orbit_integral, profile_range,
                                 psi_from_profile, verify_return_identity)

from conftest import corpus


def golden_setup():
    gm = MarkovModel.golden_mean()
    tau = RoofFunction(Potential(gm, 1, {(0,): 1.0, (1,): math.sqrt(2)}, positive=True))
    f = Potential(gm, 2, {(0, 0): 0.5, (0, 1): math.pi / 4, (1, 0): (1 + math.sqrt(5)) / 6})
    return gm, tau, f


def test_roof_positive():
    gm = MarkovModel.golden_mean()
    with pytest.raises(DomainError):
        RoofFunction(Potential(gm, 1, {(0,): 1.0, (1,): 0.0}))


@pytest.mark.parametrize("ramp", [SMOOTHSTEP, QUINTIC])
def test_bump_reproduces_target(ramp):
    gm, tau, f = golden_setup()
    prof = build_bump_observable(f, tau, 1.0, ramp)
    psi = psi_from_profile(prof, tau)
    for w in admissible_words(gm, 2):
        assert psi.value(w) == pytest.approx(f.value(w), abs=1e-14)


def test_ramp_endpoints():
    for r in (SMOOTHSTEP, QUINTIC):
        assert (r.lam(0.0), r.lam(1.0), r.dlam(0.0), r.dlam(1.0)) == (0.0, 1.0, 0.0, 0.0)


def test_return_identity_corpus():
    mf, _, _ = corpus("suspension")
    prof, roof = mf.profiles["psi"]
    words = admissible_words(mf.model, 9)[:40]
    assert verify_return_identity(prof, roof, 8, words) < 1e-12


def test_g0_integrates_to_one():
    gm, tau, _ = golden_setup()
    prof = OrbitProfile("g0", 1)
    psi = psi_from_profile(prof, tau)
    assert all(v == pytest.approx(1.0, abs=1e-14) for v in psi.values.values())


def test_profile_range_and_lip():
    gm, tau, f = golden_setup()
    prof = build_bump_observable(f, tau, 1.0)
    lo, hi = profile_range(prof, tau)
    assert lo <= 0.5 / 1 <= hi
    r = lip_ratio(discretize(prof, tau, 257))
    assert r.defined and r.lip_e > 0


def test_orbit_integral_short_word():
    gm, tau, f = golden_setup()
    prof = build_bump_observable(f, tau, 1.0)
    with pytest.raises(DomainError):
        orbit_integral(prof, tau, (0, 0), 10.0)


@given(st.lists(st.sampled_from([0, 1]), min_size=10, max_size=20), st.integers(1, 8))
def test_return_identity_property(word, n):
    gm, tau, f = golden_setup()
    word = tuple(word)
    if not gm.is_admissible(word):
        return
    prof = build_bump_observable(f, tau, 1.3)
    psi = psi_from_profile(prof, tau)
    T = birkhoff_sum(tau.potential, word, n)
    assert orbit_integral(prof, tau, word[: n + 1], T) == pytest.approx(birkhoff_sum(psi, word, n), abs=1e-11)
