import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpldp.errors import DegenerateError, DomainError, ModelError
from sharpldp.potentials import (Potential, birkhoff_sum, edge_form, lattice_check, lip_ratio,
                                 normalize_pair)
from sharpldp.sft import admissible_words

from strategies import potentials


def test_missing_and_inadmissible(golden):
    with pytest.raises(ModelError):
        Potential(golden, 2, {(0, 0): 1, (0, 1): 0})
    with pytest.raises(ModelError):
        Potential(golden, 2, {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 2})
    with pytest.raises(ModelError):
        Potential(golden, 1, {(0,): 1, (1,): 0}, positive=True)


def test_exact_values_kept(full2):
    p = Potential(full2, 1, {(0,): Fraction(1, 3), (1,): 2})
    assert p.exact == {(0,): Fraction(1, 3), (1,): Fraction(2)}
    assert Potential(full2, 1, {(0,): 0.5, (1,): 2}).exact is None


def test_birkhoff_short_word(full2):
    with pytest.raises(DomainError):
        birkhoff_sum(Potential.indicator(full2, 0), (0, 1), 3)


def test_edge_form_golden_m2(golden):
    psi = Potential(golden, 2, {(0, 0): 1, (0, 1): 0, (1, 0): 0})
    sys_ = edge_form(golden, psi)
    assert sys_.edge_length == 2 and sys_.size == 2 and len(sys_.edges()) == 3
    # memory 3 recode: states are 2-words, 5 edges
    assert len(edge_form(golden, psi, edge_length=3).edges()) == 5


def test_lattice_integer(full2):
    v = lattice_check(Potential.indicator(full2, 0))
    assert v.is_lattice and abs(1 / v.c - round(1 / v.c)) < 1e-9


def test_lattice_golden_sqrt2_is_lattice(golden):
    psi = Potential(golden, 2, {(0, 0): 1, (0, 1): math.sqrt(2), (1, 0): 0})
    v = lattice_check(psi)
    assert v.is_lattice
    assert abs(v.c - (2 - math.sqrt(2))) < 1e-9 or abs(v.c / (2 - math.sqrt(2)) - round(v.c / (2 - math.sqrt(2)))) < 1e-6


def test_lattice_nonlattice(full2):
    v = lattice_check(Potential(full2, 1, {(0,): 1.0, (1,): math.sqrt(2)}).shift(0) -
                      Potential.constant(full2, 0))
    # i.i.d. two values: differences of orbit sums span (1 - sqrt2) Z, which is lattice
    assert v.is_lattice
    psi = Potential(full2, 2, {(0, 0): 0.0, (0, 1): 1.0, (1, 0): math.pi / 4, (1, 1): math.sqrt(2)})
    assert lattice_check(psi).kind == "no-lattice-found"


def test_lattice_needs_orbits():
    from sharpldp.sft import MarkovModel
    with pytest.raises(DomainError):
        lattice_check(Potential.indicator(MarkovModel.full_shift(2), 0), max_period=1)
    assert issubclass(DegenerateError, DomainError)


def test_lip_ratio(full2):
    p = Potential(full2, 2, {(0, 0): 1.0, (0, 1): 1.5, (1, 0): 2.0, (1, 1): 2.0}, positive=True)
    r = lip_ratio(p)
    assert r.defined and r.lip_e == pytest.approx(1.0) and r.ratio == pytest.approx(1.0)
    assert not lip_ratio(Potential.indicator(full2, 0)).defined


@given(potentials(), st.integers(1, 6), st.integers(1, 6), st.data())
def test_cocycle_additivity(psi, n, k, data):
    words = admissible_words(psi.model, n + k + psi.memory - 1)
    w = data.draw(st.sampled_from(words))
    total = birkhoff_sum(psi, w, n + k)
    assert total == pytest.approx(birkhoff_sum(psi, w, n) + birkhoff_sum(psi, w[n:], k), abs=1e-12)


@given(potentials(), st.integers(1, 3))
def test_lift_preserves_values(psi, extra):
    lifted = psi.lift(psi.memory + extra)
    for w, v in lifted.values.items():
        assert v == psi.value(w[: psi.memory])


@given(potentials(), st.floats(-3, 3))
def test_orbit_sum_shift(psi, c):
    shifted = psi.shift(c)
    for w in [(0,), (0, 1), (1, 0, 2)]:
        if psi.model.is_cyclically_admissible(w):
            assert shifted.orbit_sum(w) == pytest.approx(psi.orbit_sum(w) + c * len(w), abs=1e-12)


@given(potentials(memory=2), potentials(memory=2))
def test_normalize_idempotent(phi, psi):
    if phi.model != psi.model:
        return
    phi_n, psi_n, shifts = normalize_pair(phi, psi)
    again = normalize_pair(phi_n, psi_n, tol=1e-12)
    assert again[2] == (0.0, 0.0)
    assert np.isfinite(shifts).all()
