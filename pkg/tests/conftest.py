import math

import pytest
from hypothesis import HealthCheck, settings

from sharpldp.modelfile import corpus_paths, load, resolve
from sharpldp.potentials import Potential
from sharpldp.sft import MarkovModel

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDEN = math.log((1 + math.sqrt(5)) / 2)
J07 = math.log(2) + 0.7 * math.log(0.7) + 0.3 * math.log(0.3)


@pytest.fixture
def full2():
    return MarkovModel.full_shift(2)


@pytest.fixture
def golden():
    return MarkovModel.golden_mean()


@pytest.fixture
def bernoulli(full2):
    return full2, Potential.constant(full2, 0), Potential.indicator(full2, 0)


def corpus(name):
    mf = load(resolve(name))
    return mf, mf.potential("phi", default_zero=True), mf.potential("psi")


CORPUS = [p.stem for p in corpus_paths()]


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
