import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sharpldp.deviations.distribution import (check_against_exact, dp_distribution, exact_distribution,
                                              load_snapshot, save_snapshot, snapshot_bytes,
                                              snapshot_from_bytes, window_measure, window_measure_sum)
from sharpldp.errors import ModelError, ResourceError
from sharpldp.thermo import equilibrium_measure

from conftest import corpus
from strategies import pairs


def test_bernoulli_binomial(bernoulli):
    ex = exact_distribution(*bernoulli, 10)
    m = ex.merged()
    got = {}
    for x, lo, hi in zip(m.lower, m.mass_lo, m.mass_hi):
        got[x] = got.get(x, (0.0, 0.0))
        got[x] = (got[x][0] + lo, got[x][1] + hi)
    for k in range(11):
        lo, hi = got[float(k)]
        assert lo <= math.comb(10, k) / 1024 <= hi and hi - lo < 1e-15
    w = window_measure(ex, 0.7, 0.05)
    assert w.lo == w.hi == 0.1171875


def test_budget(bernoulli):
    with pytest.raises(ResourceError):
        exact_distribution(*bernoulli, 30, budget=1000)
    mf, phi, psi = corpus("golden-nonlattice")
    with pytest.raises(ResourceError) as info:
        dp_distribution(mf.model, phi, psi, 400, 1e-8, budget_bins=10_000)
    assert info.value.suggestion


def test_embeddings():
    mf, phi, psi = corpus("loopless3")
    assert dp_distribution(mf.model, phi, psi, 20, 1e-3).embedding == "rational"
    mf, phi, psi = corpus("golden-lattice-sqrt2")
    assert dp_distribution(mf.model, phi, psi, 20, 1e-3).embedding in ("rational", "pslq")
    mf, phi, psi = corpus("golden-nonlattice")
    d = dp_distribution(mf.model, phi, psi, 20, 1e-3)
    assert d.embedding == "grid" and d.merged().width.max() <= 1e-3


@pytest.mark.parametrize("name", ["golden-nonlattice", "trinary-nonlattice", "loopless3", "suspension"])
def test_dp_vs_exact_corpus(name):
    mf, phi, psi = corpus(name)
    for n in (1, 5, 9):
        ex = exact_distribution(mf.model, phi, psi, n)
        dp = dp_distribution(mf.model, phi, psi, n, 1e-4)
        assert check_against_exact(dp, ex) == []


def test_exact_rational_values():
    mf, phi, psi = corpus("loopless3")
    ex = exact_distribution(mf.model, phi, psi, 4)
    assert ex.exact_values is not None
    assert all(isinstance(v, Fraction) for vals in ex.exact_values for v in vals)


def test_snapshot_roundtrip(tmp_path):
    mf, phi, psi = corpus("golden-nonlattice")
    d = dp_distribution(mf.model, phi, psi, 30, 1e-3)
    data = snapshot_bytes(d)
    assert data[:4] == b"LDPD"
    back = snapshot_from_bytes(data, d.states)
    assert snapshot_bytes(back) == data
    save_snapshot(d, tmp_path / "d.ldpd")
    assert snapshot_bytes(load_snapshot(tmp_path / "d.ldpd", d.states)) == data
    with pytest.raises(ModelError):
        snapshot_from_bytes(b"XXXX" + data[4:])
    with pytest.raises(ModelError):
        snapshot_from_bytes(data[:-8])


def test_measure_argument_forms():
    mf, phi, psi = corpus("golden")
    a = exact_distribution(mf.model, phi, psi, 6)
    b = exact_distribution(mf.model, equilibrium_measure(mf.model, phi), psi, 6)
    assert snapshot_bytes(a) == snapshot_bytes(b)


@given(pairs(), st.integers(1, 7), st.sampled_from([1e-2, 1e-3]))
def test_dp_brackets_exact(data, n, h):
    model, phi, psi = data
    ex = exact_distribution(model, phi, psi, n)
    dp = dp_distribution(model, phi, psi, n, h)
    assert check_against_exact(dp, ex) == []
    assert dp.total_lo <= 1 + 1e-12 <= dp.total_hi + 2e-12


@given(pairs(), st.integers(1, 8))
def test_exact_mass_bracket(data, n):
    model, phi, psi = data
    ex = exact_distribution(model, phi, psi, n)
    assert abs(ex.total_lo - 1) <= 1e-9 and abs(ex.total_hi - 1) <= 1e-9
    assert ex.total_lo <= 1 <= ex.total_hi


@given(pairs(), st.integers(2, 7), st.floats(-1, 1), st.floats(0.01, 1))
def test_window_monotone_and_contained(data, n, a, w):
    model, phi, psi = data
    ex = exact_distribution(model, phi, psi, n)
    dp = dp_distribution(model, phi, psi, n, 1e-3)
    lo, hi = n * a, n * (a + w)
    we, wd = window_measure_sum(ex, lo, hi), window_measure_sum(dp, lo, hi)
    assert wd.lo <= we.hi * (1 + 1e-12) and we.lo <= wd.hi * (1 + 1e-12)
    wider = window_measure_sum(ex, lo - 1, hi + 1)
    assert wider.hi >= we.lo
